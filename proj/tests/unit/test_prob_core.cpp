#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "impuritypart/error.hpp"
#include "impuritypart/prob_core.hpp"
#include "oracles.hpp"

using namespace impuritypart;
using impuritypart::testing::direct_stats;
using impuritypart::testing::random_joint;
using impuritypart::testing::random_partition;
using impuritypart::testing::random_size;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "expected an impuritypart::Error";
    return ErrorCode::ConfigError;
}

} // namespace

TEST(BuildJoint, UniformCountsNormalize) {
    const auto jd = build_joint({{1, 1}, {1, 1}});
    ASSERT_EQ(jd.rows(), 2u);
    ASSERT_EQ(jd.cols(), 2u);
    for (double v : jd.values()) {
        EXPECT_EQ(v, 0.25);
    }
}

TEST(BuildJoint, Diagonal) {
    const auto jd = build_joint({{2, 0}, {0, 2}});
    EXPECT_EQ(jd.at(0, 0), 0.5);
    EXPECT_EQ(jd.at(0, 1), 0.0);
    EXPECT_EQ(jd.at(1, 0), 0.0);
    EXPECT_EQ(jd.at(1, 1), 0.5);
    EXPECT_EQ(jd.row_mass(1), 0.5);
}

TEST(BuildJoint, ZeroRowNamesIndex) {
    try {
        build_joint({{1, 0}, {0, 0}});
        FAIL() << "expected ZeroRow";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ZeroRow);
        EXPECT_EQ(e.index(), 1u);
    }
}

TEST(BuildJoint, NegativeAndZeroTotal) {
    try {
        build_joint({{1, 2}, {-1, 3}});
        FAIL() << "expected NegativeEntry";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NegativeEntry);
        EXPECT_EQ(e.index(), 2u);
    }
    EXPECT_EQ(code_of([] { build_joint({{0, 0}, {0, 0}}); }), ErrorCode::ZeroTotal);
    EXPECT_EQ(code_of([] { build_joint({{1}, {2}}); }), ErrorCode::DimensionMismatch);
    EXPECT_EQ(code_of([] { build_joint({{1, 2}, {2}}); }), ErrorCode::DimensionMismatch);
}

TEST(JointDistribution, FromProbabilitiesRejectsUnnormalized) {
    EXPECT_EQ(code_of([] { JointDistribution::from_probabilities({0.5, 0.5, 0.5, 0.5}, 2, 2); }),
              ErrorCode::NotNormalized);
    const auto jd = JointDistribution::from_probabilities({0.1, 0.2, 0.3, 0.4}, 2, 2);
    EXPECT_EQ(jd.at(1, 1), 0.4);
    const auto px = jd.class_marginal();
    EXPECT_NEAR(px[0], 0.4, 1e-15);
    EXPECT_NEAR(px[1], 0.6, 1e-15);
}

TEST(Partition, RejectsOutOfRangeLabels) {
    EXPECT_EQ(code_of([] { Partition({0, 3}, 3); }), ErrorCode::InvalidLabel);
    EXPECT_EQ(code_of([] { Partition({0}, 0); }), ErrorCode::KTooSmall);
}

TEST(ComputeStats, PurePartitionsHaveZeroImpurity) {
    const auto jd = build_joint({{1, 0}, {0, 1}});
    const auto stats = compute_stats(jd, Partition({0, 1}, 2), ImpuritySpec::entropy());
    EXPECT_EQ(stats.impurity, 0.0);
    EXPECT_EQ(stats.e_q, 1.0);
}

TEST(ComputeStats, UniformSingleGroupHasOneBit) {
    const auto jd = build_joint({{1, 1}, {1, 1}});
    const auto stats = compute_stats(jd, Partition({0, 0}, 2), ImpuritySpec::entropy());
    EXPECT_DOUBLE_EQ(stats.impurity, 1.0);
    EXPECT_DOUBLE_EQ(stats.e_q, 0.5);
    EXPECT_TRUE(stats.nonempty[0]);
    EXPECT_FALSE(stats.nonempty[1]);
    EXPECT_FALSE(stats.conditional(1).has_value());
    EXPECT_EQ(stats.count_nonempty(), 1u);
}

TEST(ComputeStats, GiniMatchesExactTabulation) {
    // I_Q = 328/609 and e_Q = 18/29, tabulated with exact rationals.
    const auto jd = build_joint({{3, 1, 2}, {1, 4, 1}, {2, 2, 5}, {6, 1, 1}});
    const std::vector<std::size_t> labels{0, 1, 2, 0};
    const auto stats = compute_stats(jd, Partition(labels, 3), ImpuritySpec::gini());
    EXPECT_NEAR(stats.impurity, 328.0 / 609.0, 1e-14);
    EXPECT_NEAR(stats.e_q, 18.0 / 29.0, 1e-14);

    const auto direct = direct_stats(jd, labels, 3, impuritypart::testing::gini_fn);
    EXPECT_NEAR(stats.impurity, direct.impurity, 1e-12 * direct.impurity);
}

TEST(ComputeStats, DimensionMismatch) {
    const auto jd = build_joint({{1, 1}, {1, 1}});
    EXPECT_EQ(code_of([&] { compute_stats(jd, Partition({0}, 1), ImpuritySpec::gini()); }),
              ErrorCode::DimensionMismatch);
}

TEST(ComputeStats, RandomInstancesSatisfyInvariants) {
    std::mt19937_64 rng(11);
    const auto specs = {ImpuritySpec::entropy(), ImpuritySpec::gini()};
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t m = random_size(rng, 1, 12);
        const std::size_t n = random_size(rng, 2, 6);
        const std::size_t k = random_size(rng, 1, 6);
        const auto jd = random_joint(rng, m, n);
        const auto part = random_partition(rng, m, k);
        for (const auto& f : specs) {
            const auto s = compute_stats(jd, part, f);
            double pz = 0.0;
            double per = 0.0;
            for (std::size_t z = 0; z < k; ++z) {
                pz += s.pz[z];
                per += s.per_partition_impurity[z];
                if (auto row = s.conditional(z)) {
                    double sum = 0.0;
                    for (double v : *row) {
                        sum += v;
                    }
                    EXPECT_NEAR(sum, 1.0, 1e-9);
                }
            }
            EXPECT_NEAR(pz, 1.0, 1e-9);
            EXPECT_NEAR(s.impurity, per, 1e-9);
            EXPECT_GE(s.e_q, 1.0 / static_cast<double>(n) - 1e-12);
            EXPECT_LE(s.e_q, 1.0 + 1e-12);
            EXPECT_GE(s.impurity, 0.0);
        }
    }
}

TEST(ComputeStats, ZeroImpurityIffDegenerateConditionals) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t m = random_size(rng, 2, 8);
        const std::size_t n = random_size(rng, 2, 4);
        const auto jd = random_joint(rng, m, n, 0.6);
        const auto part = random_partition(rng, m, random_size(rng, 1, 4));
        const auto s = compute_stats(jd, part, ImpuritySpec::entropy());
        bool degenerate = true;
        for (std::size_t z = 0; z < s.k; ++z) {
            if (auto row = s.conditional(z)) {
                const auto nonzero = std::count_if(row->begin(), row->end(), [](double v) { return v > 0.0; });
                degenerate = degenerate && nonzero == 1;
            }
        }
        EXPECT_EQ(s.impurity == 0.0, degenerate);
    }
}

// Merging two labels never lowers I_Q; splitting one never raises it.
TEST(ComputeStats, MergeAndSplitMonotonicity) {
    std::mt19937_64 rng(21);
    const auto specs = {ImpuritySpec::entropy(), ImpuritySpec::gini()};
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t m = random_size(rng, 2, 12);
        const std::size_t n = random_size(rng, 2, 6);
        const std::size_t k = random_size(rng, 2, 6);
        const auto jd = random_joint(rng, m, n);
        const auto part = random_partition(rng, m, k);

        const std::size_t a = random_size(rng, 0, k - 1);
        std::size_t b = random_size(rng, 0, k - 2);
        b = b >= a ? b + 1 : b;
        auto merged = part.assignment;
        for (auto& l : merged) {
            l = l == b ? a : l;
        }

        // Split: send a random subset of label a to a new label k.
        auto split = part.assignment;
        for (auto& l : split) {
            if (l == a && rng() % 2 == 0) {
                l = k;
            }
        }

        for (const auto& f : specs) {
            const double base = compute_stats(jd, part, f).impurity;
            EXPECT_GE(compute_stats(jd, Partition(merged, k), f).impurity, base - 1e-12);
            EXPECT_LE(compute_stats(jd, Partition(split, k + 1), f).impurity, base + 1e-12);
        }
    }
}

TEST(ComputeStats, BitReproducible) {
    std::mt19937_64 rng(3);
    const auto jd = random_joint(rng, 9, 4);
    const auto part = random_partition(rng, 9, 3);
    const auto a = compute_stats(jd, part, ImpuritySpec::entropy());
    const auto b = compute_stats(jd, part, ImpuritySpec::entropy());
    EXPECT_EQ(a.impurity, b.impurity);
    EXPECT_EQ(a.e_q, b.e_q);
    EXPECT_EQ(a.pxz, b.pxz);
}
