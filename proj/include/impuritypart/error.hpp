#ifndef IMPURITYPART_ERROR_HPP
#define IMPURITYPART_ERROR_HPP

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace impuritypart {

enum class ErrorCode {
    NegativeEntry,
    ZeroTotal,
    ZeroRow,
    NotNormalized,
    DimensionMismatch,
    InvalidLabel,
    ConcavityViolation,
    MissingL,
    EOutOfRange,
    NotAChannel,
    KTooSmall,
    KNotGreaterThanN,
    KNotLessThanN,
    MaskBudgetExceeded,
    EmptyStart,
    InstanceTooLarge,
    ParseError,
    IoError,
    ConfigError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Exception carrying a machine-readable code and, where it applies, the
/// offending row/column/line index.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message, std::optional<std::size_t> index = std::nullopt);

    ErrorCode code() const noexcept { return code_; }
    std::optional<std::size_t> index() const noexcept { return index_; }

private:
    ErrorCode code_;
    std::optional<std::size_t> index_;
};

} // namespace impuritypart

#endif // IMPURITYPART_ERROR_HPP
