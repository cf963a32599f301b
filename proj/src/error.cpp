#include "impuritypart/error.hpp"

namespace impuritypart {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::NegativeEntry: return "NegativeEntry";
    case ErrorCode::ZeroTotal: return "ZeroTotal";
    case ErrorCode::ZeroRow: return "ZeroRow";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidLabel: return "InvalidLabel";
    case ErrorCode::ConcavityViolation: return "ConcavityViolation";
    case ErrorCode::MissingL: return "MissingL";
    case ErrorCode::EOutOfRange: return "EOutOfRange";
    case ErrorCode::NotAChannel: return "NotAChannel";
    case ErrorCode::KTooSmall: return "KTooSmall";
    case ErrorCode::KNotGreaterThanN: return "KNotGreaterThanN";
    case ErrorCode::KNotLessThanN: return "KNotLessThanN";
    case ErrorCode::MaskBudgetExceeded: return "MaskBudgetExceeded";
    case ErrorCode::EmptyStart: return "EmptyStart";
    case ErrorCode::InstanceTooLarge: return "InstanceTooLarge";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::ConfigError: return "ConfigError";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message, std::optional<std::size_t> index)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), index_(index) {}

} // namespace impuritypart
