#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "impuritypart/error.hpp"
#include "impuritypart/impurity.hpp"

using namespace impuritypart;

TEST(Entropy, Values) {
    const auto h = ImpuritySpec::entropy();
    EXPECT_EQ(h.kind(), ImpurityKind::Entropy);
    EXPECT_DOUBLE_EQ(h.f(0.5), 0.5);
    EXPECT_EQ(h.f(1.0), 0.0);
    EXPECT_EQ(h.f(0.0), 0.0);
    EXPECT_NEAR(h.f(0.25) / 0.25 - h.l(0.25), 0.0, 1e-15);
}

TEST(Gini, Values) {
    const auto g = ImpuritySpec::gini();
    EXPECT_DOUBLE_EQ(g.f(0.5), 0.25);
    EXPECT_EQ(g.f(0.0), 0.0);
    EXPECT_EQ(g.f(1.0), 0.0);
    const std::vector<double> uniform(4, 0.25);
    EXPECT_DOUBLE_EQ(g.sum_f(uniform), 0.75);
    EXPECT_NEAR(g.f(0.3) - 0.3 * g.l(0.3), 0.0, 1e-16);
}

TEST(BuiltinSpecs, FactorThroughLAndLIsNonIncreasing) {
    for (const auto& spec : {ImpuritySpec::entropy(), ImpuritySpec::gini()}) {
        for (int step = 1; step <= 99; ++step) {
            const double x = step / 100.0;
            EXPECT_NEAR(spec.f(x), x * spec.l(x), 1e-12) << to_string(spec.kind()) << " x=" << x;
        }
        double prev = spec.l(1e-3);
        for (int step = 2; step <= 1000; ++step) {
            const double cur = spec.l(step * 1e-3);
            EXPECT_LE(cur, prev);
            prev = cur;
        }
    }
}

TEST(BuiltinSpecs, ConcaveAndJensen) {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (const auto& spec : {ImpuritySpec::entropy(), ImpuritySpec::gini()}) {
        for (int trial = 0; trial < 2000; ++trial) {
            const double a = unit(rng);
            const double b = unit(rng);
            const double lam = unit(rng);
            EXPECT_GE(spec.f(lam * a + (1 - lam) * b), lam * spec.f(a) + (1 - lam) * spec.f(b) - 1e-12);
        }
        for (int trial = 0; trial < 500; ++trial) {
            const std::size_t k = 1 + rng() % 8;
            std::vector<double> t(k);
            double sum = 0.0;
            for (auto& v : t) {
                v = unit(rng) / static_cast<double>(k);
                sum += v;
            }
            const double kd = static_cast<double>(k);
            EXPECT_GE(kd * spec.f(sum / kd), spec.sum_f(t) - 1e-12);
        }
    }
}

TEST(Custom, GiniEquivalent) {
    const auto c = ImpuritySpec::custom([](double x) { return x * (1 - x); }, [](double x) { return 1 - x; });
    const auto g = ImpuritySpec::gini();
    EXPECT_EQ(c.kind(), ImpurityKind::Custom);
    for (int step = 0; step <= 100; ++step) {
        const double x = step / 100.0;
        EXPECT_EQ(c.f(x), g.f(x));
        EXPECT_EQ(c.l(x), g.l(x));
    }
}

TEST(Custom, ConvexRejectedWithTriple) {
    try {
        ImpuritySpec::custom([](double x) { return x * x; });
        FAIL() << "expected ConcavityViolation";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ConcavityViolation);
        EXPECT_NE(std::string(e.what()).find("lambda="), std::string::npos);
    }
}

// f(x) = sqrt(x)(1 - sqrt(x)) = sqrt(x) - x.
TEST(Custom, SqrtFixtureIsConcaveBySecondDifferences) {
    auto f = [](double x) { return std::sqrt(x) * (1.0 - std::sqrt(x)); };
    const double h = 1e-3;
    for (int step = 1; step < 1000; ++step) {
        const double x = step * h;
        EXPECT_LE(f(x + h) - 2 * f(x) + f(x - h), 1e-15) << "x=" << x;
    }
    const auto spec = ImpuritySpec::custom(f);
    EXPECT_FALSE(spec.has_l());
    EXPECT_NEAR(spec.f(0.25), 0.25, 1e-15);
}

TEST(Custom, MissingL) {
    const auto spec = ImpuritySpec::custom([](double x) { return std::sqrt(x) - x; });
    try {
        spec.l(0.5);
        FAIL() << "expected MissingL";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::MissingL);
    }
}
