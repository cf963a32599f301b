#ifndef IMPURITYPART_IMPURITY_HPP
#define IMPURITYPART_IMPURITY_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>

namespace impuritypart {

enum class ImpurityKind { Entropy, Gini, Custom };

std::string_view to_string(ImpurityKind kind) noexcept;

/**
 * A concave impurity function f on [0,1] together with the optional companion
 * l satisfying f(x) = x * l(x).
 *
 * The partition impurity of a quantizer is sum_k p(z_k) sum_i f(p(x_i|z_k)).
 * Only the bound and ratio computations need l; the partitioning algorithms
 * never touch it.
 */
class ImpuritySpec {
public:
    using Function = std::function<double(double)>;

    /// f(x) = -x log2 x with f(0) = 0, l(x) = -log2 x.
    static ImpuritySpec entropy();

    /// f(x) = x (1 - x), l(x) = 1 - x.
    static ImpuritySpec gini();

    /**
     * Wraps a caller-supplied f (and optionally l). Concavity of f is
     * spot-checked on `concavity_samples` random triples (a, b, lambda);
     * a violation throws ErrorCode::ConcavityViolation naming the triple.
     */
    static ImpuritySpec custom(Function f, std::optional<Function> l = std::nullopt,
                               std::size_t concavity_samples = 1000, std::uint64_t seed = 0x5eed);

    ImpurityKind kind() const noexcept { return kind_; }
    bool has_l() const noexcept { return l_.has_value(); }

    double f(double x) const { return f_(x); }

    /// Throws ErrorCode::MissingL when the spec was built without l.
    double l(double x) const;

    /// sum_i f(values[i]).
    template <class Range>
    double sum_f(const Range& values) const {
        double total = 0.0;
        for (double v : values) {
            total += f(v);
        }
        return total;
    }

private:
    ImpuritySpec(ImpurityKind kind, Function f, std::optional<Function> l)
        : kind_(kind), f_(std::move(f)), l_(std::move(l)) {}

    ImpurityKind kind_;
    Function f_;
    std::optional<Function> l_;
};

} // namespace impuritypart

#endif // IMPURITYPART_IMPURITY_HPP
