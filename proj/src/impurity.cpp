#include "impuritypart/impurity.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "impuritypart/error.hpp"

namespace impuritypart {

namespace {

// Absolute slack allowed in the sampled concavity inequality; covers rounding
// in f itself, not genuine convexity.
constexpr double kConcavitySlack = 1e-12;

double entropy_f(double x) {
    if (x <= 0.0) {
        return 0.0;
    }
    return -x * std::log2(x);
}

double entropy_l(double x) { return -std::log2(x); }

double gini_f(double x) { return x * (1.0 - x); }

double gini_l(double x) { return 1.0 - x; }

} // namespace

std::string_view to_string(ImpurityKind kind) noexcept {
    switch (kind) {
    case ImpurityKind::Entropy: return "entropy";
    case ImpurityKind::Gini: return "gini";
    case ImpurityKind::Custom: return "custom";
    }
    return "unknown";
}

ImpuritySpec ImpuritySpec::entropy() { return ImpuritySpec(ImpurityKind::Entropy, entropy_f, Function(entropy_l)); }

ImpuritySpec ImpuritySpec::gini() { return ImpuritySpec(ImpurityKind::Gini, gini_f, Function(gini_l)); }

ImpuritySpec ImpuritySpec::custom(Function f, std::optional<Function> l, std::size_t concavity_samples,
                                  std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t s = 0; s < concavity_samples; ++s) {
        const double a = unit(rng);
        const double b = unit(rng);
        const double lambda = unit(rng);
        const double mixed = f(lambda * a + (1.0 - lambda) * b);
        const double chord = lambda * f(a) + (1.0 - lambda) * f(b);
        if (!(mixed >= chord - kConcavitySlack)) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "f(lambda*a + (1-lambda)*b) < lambda*f(a) + (1-lambda)*f(b) at a=" << a << ", b=" << b
                << ", lambda=" << lambda << " (" << mixed << " < " << chord << ")";
            throw Error(ErrorCode::ConcavityViolation, msg.str(), s);
        }
    }
    return ImpuritySpec(ImpurityKind::Custom, std::move(f), std::move(l));
}

double ImpuritySpec::l(double x) const {
    if (!l_) {
        throw Error(ErrorCode::MissingL, "impurity spec has no companion l(x) with f(x) = x l(x)");
    }
    return (*l_)(x);
}

} // namespace impuritypart
