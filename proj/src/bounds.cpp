#include "impuritypart/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "impuritypart/error.hpp"
#include "impuritypart/prob_core.hpp"

namespace impuritypart {

namespace {

// e_Q computed from data inherits the normalization slack of the input, so the
// admissible interval is widened by the same amount and the value clamped.
constexpr double kRangeSlack = kNormalizationTolerance;

double clamp_e(double e, double lo, double hi, const char* what) {
    if (!(e >= lo - kRangeSlack && e <= hi + kRangeSlack)) {
        throw Error(ErrorCode::EOutOfRange, std::string(what) + " = " + std::to_string(e) + " outside [" +
                                                std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    return std::clamp(e, lo, hi);
}

void check_classes(std::size_t n) {
    if (n < 2) {
        throw Error(ErrorCode::DimensionMismatch, "bounds need at least two classes");
    }
}

double neg_log2(double e) { return -std::log2(e); }

} // namespace

double binary_entropy(double x) {
    auto term = [](double p) { return p <= 0.0 ? 0.0 : -p * std::log2(p); };
    return term(x) + term(1.0 - x);
}

double upper_bound(double e, std::size_t n, const ImpuritySpec& f) {
    check_classes(n);
    const double nd = static_cast<double>(n);
    e = clamp_e(e, 1.0 / nd, 1.0, "e");
    return f.f(e) + (nd - 1.0) * f.f((1.0 - e) / (nd - 1.0));
}

double lower_bound(double e, const ImpuritySpec& f) {
    if (!(e > 0.0)) {
        throw Error(ErrorCode::EOutOfRange, "e = " + std::to_string(e) + " must be positive");
    }
    e = clamp_e(e, 0.0, 1.0, "e");
    return f.l(e);
}

double approximation_ratio(double e_max, std::size_t n, const ImpuritySpec& f) {
    check_classes(n);
    const double nd = static_cast<double>(n);
    e_max = clamp_e(e_max, 1.0 / nd, 1.0, "e_max");
    if (f.kind() == ImpurityKind::Custom && !f.has_l()) {
        f.l(e_max); // throws MissingL
    }
    if (e_max >= 1.0) {
        return 1.0;
    }
    switch (f.kind()) {
    case ImpurityKind::Entropy:
        return (binary_entropy(e_max) + (1.0 - e_max) * std::log2(nd - 1.0)) / neg_log2(e_max);
    case ImpurityKind::Gini:
        return e_max + 1.0 - (1.0 - e_max) / (nd - 1.0);
    case ImpurityKind::Custom:
        break;
    }
    return upper_bound(e_max, n, f) / lower_bound(e_max, f);
}

double gini_ratio_ceiling(double e_max) { return 1.0 + e_max; }

double s_value(double e_max) {
    if (!(e_max > 0.0 && e_max < 1.0)) {
        throw Error(ErrorCode::EOutOfRange, "S(e) needs 0 < e < 1, got " + std::to_string(e_max));
    }
    const double nl = neg_log2(e_max);
    const double gap = 1.0 - e_max;
    return gap / (2.0 * nl) + std::sqrt(4.0 * binary_entropy(e_max) * nl + gap * gap) / (2.0 * nl);
}

double n_min(double e_max) { return std::exp2(s_value(e_max)); }

double fano_bound(double e_q, std::size_t n) {
    check_classes(n);
    const double nd = static_cast<double>(n);
    e_q = clamp_e(e_q, 1.0 / nd, 1.0, "e_q");
    const double pe = 1.0 - e_q;
    return binary_entropy(pe) + pe * std::log2(nd - 1.0);
}

double boyd_chiang_bound(std::span<const double> channel, std::size_t outputs, std::size_t inputs) {
    if (outputs == 0 || inputs == 0 || channel.size() != outputs * inputs) {
        throw Error(ErrorCode::NotAChannel, "channel matrix shape does not match " + std::to_string(outputs) +
                                                " outputs x " + std::to_string(inputs) + " inputs");
    }
    for (std::size_t i = 0; i < inputs; ++i) {
        double column = 0.0;
        for (std::size_t k = 0; k < outputs; ++k) {
            const double p = channel[k * inputs + i];
            if (!(p >= 0.0)) {
                throw Error(ErrorCode::NotAChannel, "negative transition probability at output " +
                                                        std::to_string(k) + ", input " + std::to_string(i));
            }
            column += p;
        }
        if (std::abs(column - 1.0) > kNormalizationTolerance) {
            throw Error(ErrorCode::NotAChannel,
                        "transitions from input " + std::to_string(i) + " sum to " + std::to_string(column), i);
        }
    }
    // Extended accumulation so that K copies of 1/K round back to exactly 1.
    long double total = 0.0L;
    for (std::size_t k = 0; k < outputs; ++k) {
        const auto row = channel.subspan(k * inputs, inputs);
        total += *std::max_element(row.begin(), row.end());
    }
    return std::log2(static_cast<double>(total));
}

BoundsReport make_bounds_report(double e_q, std::size_t n, const ImpuritySpec& f, bool is_emax,
                                std::optional<std::span<const double>> uniform_input_channel,
                                std::size_t channel_outputs) {
    BoundsReport report;
    report.e_q = e_q;
    report.upper_u = upper_bound(e_q, n, f);
    if (f.has_l()) {
        report.lower_l = lower_bound(e_q, f);
        if (is_emax) {
            report.ratio_r = approximation_ratio(e_q, n, f);
        }
    }
    if (f.kind() == ImpurityKind::Entropy) {
        report.fano = fano_bound(e_q, n);
        if (is_emax && e_q < 1.0) {
            report.s_value = s_value(e_q);
            report.n_min = std::exp2(*report.s_value);
        }
        if (uniform_input_channel) {
            report.boyd_chiang = boyd_chiang_bound(*uniform_input_channel, channel_outputs, n);
        }
    }
    return report;
}

} // namespace impuritypart
