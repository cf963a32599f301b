#ifndef IMPURITYPART_BOUNDS_HPP
#define IMPURITYPART_BOUNDS_HPP

#include <cstddef>
#include <optional>
#include <span>

#include "impuritypart/impurity.hpp"

/**
 * @file bounds.hpp
 *
 * @brief Closed-form bounds on the impurity of a quantizer as a function of
 * its maximum-likelihood success probability e_Q, and the approximation
 * ratios that follow from them. All logarithms are base 2.
 */
namespace impuritypart {

/// Binary entropy H(x) = -x log2 x - (1-x) log2 (1-x), with H(0) = H(1) = 0.
double binary_entropy(double x);

/**
 * u(e) = f(e) + (n-1) f((1-e)/(n-1)), an upper bound on I_Q for every
 * quantizer with e_Q = e. Requires n >= 2 and 1/n <= e <= 1.
 */
double upper_bound(double e, std::size_t n, const ImpuritySpec& f);

/// l(e), a lower bound on I_Q for every quantizer with e_Q = e. Requires 0 < e <= 1.
double lower_bound(double e, const ImpuritySpec& f);

/**
 * R(e_max) = u(e_max) / l(e_max): the factor by which the maximum-likelihood
 * partition's impurity can exceed the optimum.
 *
 * Entropy uses [H(e) + (1-e) log2(n-1)] / (-log2 e); Gini uses the exact
 * quotient e + 1 - (1-e)/(n-1), which never exceeds 1 + e <= 2. At e_max = 1
 * both bounds vanish and the ratio is 1.
 */
double approximation_ratio(double e_max, std::size_t n, const ImpuritySpec& f);

/// The looser Gini guarantee 1 + e_max.
double gini_ratio_ceiling(double e_max);

/// Threshold exponent S(e_max) on log2 N beyond which the entropy ratio drops below log2^2 N. Requires 0 < e < 1.
double s_value(double e_max);

/// N_min = 2^S(e_max).
double n_min(double e_max);

/// Fano's bound on H(X|Z) with error probability 1 - e_q: H(1-e_q) + (1-e_q) log2(n-1).
double fano_bound(double e_q, std::size_t n);

/**
 * Capacity upper bound log2(sum_k max_i p(z_k|x_i)) for uniform input.
 * `channel` is K x N row-major with entry (k, i) = p(z_k | x_i); each column
 * must sum to 1 within 1e-9 or NotAChannel is thrown.
 */
double boyd_chiang_bound(std::span<const double> channel, std::size_t outputs, std::size_t inputs);

struct BoundsReport {
    double e_q = 0.0;
    double upper_u = 0.0;
    std::optional<double> lower_l;
    std::optional<double> ratio_r;
    std::optional<double> s_value;
    std::optional<double> n_min;
    std::optional<double> fano;
    std::optional<double> boyd_chiang;
};

/**
 * Collects every bound applicable to an instance with n classes and the given
 * e_Q. `is_emax` marks e_q as the maximum over all quantizers, enabling the
 * ratio and S/N_min fields. `uniform_input_channel` (K x N, p(z|x)) enables
 * the Boyd-Chiang field for entropy.
 */
BoundsReport make_bounds_report(double e_q, std::size_t n, const ImpuritySpec& f, bool is_emax,
                                std::optional<std::span<const double>> uniform_input_channel = std::nullopt,
                                std::size_t channel_outputs = 0);

} // namespace impuritypart

#endif // IMPURITYPART_BOUNDS_HPP
