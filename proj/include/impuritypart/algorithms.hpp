#ifndef IMPURITYPART_ALGORITHMS_HPP
#define IMPURITYPART_ALGORITHMS_HPP

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "impuritypart/impurity.hpp"
#include "impuritypart/prob_core.hpp"

/**
 * @file algorithms.hpp
 *
 * @brief Partitioning algorithms for concave impurity minimization.
 *
 * The maximum-likelihood partition maximizes e_Q, which minimizes the upper
 * bound u(e_Q) and yields an R(e_max)-approximation. Greedy splitting and
 * greedy merging adapt it to K > N and K < N; iterative refinement walks the
 * result to a local optimum; the exhaustive oracle enumerates all K^M
 * assignments for small instances.
 *
 * Argmax ties always resolve to the lowest index, so every routine is
 * deterministic.
 */
namespace impuritypart {

/// Binary class-selection vector with exactly min(K, N) ones.
class ProjectionMask {
public:
    /// All-ones mask over n classes.
    static ProjectionMask all(std::size_t n);

    /// Mask with ones at the strictly increasing positions in `active`.
    static ProjectionMask from_active(std::vector<std::size_t> active, std::size_t n);

    std::size_t size() const noexcept { return bits_.size(); }
    std::size_t popcount() const noexcept { return active_.size(); }
    bool operator[](std::size_t i) const noexcept { return bits_[i]; }

    /// Indices of the active classes, increasing.
    const std::vector<std::size_t>& active() const noexcept { return active_; }

private:
    std::vector<bool> bits_;
    std::vector<std::size_t> active_;
};

enum class TraceKind { Initial, Split, Merge, Iteration };

std::string_view to_string(TraceKind kind) noexcept;

struct TraceEvent {
    TraceKind kind = TraceKind::Initial;
    std::size_t step = 0;
    double impurity = 0.0;
    /// Split: source label and new label. Merge: the two labels merged, before renumbering.
    std::size_t first = 0;
    std::size_t second = 0;
    /// Merge only: every impurity loss evaluated in that round, in pair order.
    std::vector<double> deltas;
    /// Iteration only: number of points that changed partition.
    std::size_t moved = 0;
};

struct AlgoResult {
    Partition partition;
    PartitionStats stats;
    double e_max_achieved = 0.0;
    std::size_t masks_evaluated = 0;
    std::size_t iterations = 0;
    std::vector<TraceEvent> trace;
};

struct MaxLikelihoodOptions {
    /// Upper limit on C(N, K) when K < N.
    std::uint64_t mask_budget = std::uint64_t{1} << 20;
};

/// C(n, k), saturating at UINT64_MAX.
std::uint64_t binomial(std::size_t n, std::size_t k) noexcept;

/// Every mask with min(k, n) ones, ordered lexicographically by active index set.
std::vector<ProjectionMask> enumerate_masks(std::size_t n, std::size_t k);

/**
 * Maximum-likelihood assignment under one projection: each y_j goes to the
 * active class maximizing p(x_i, y_j) among active i. Labels are positions
 * within the mask's active set. A point with no mass on any active class goes
 * to label 0.
 */
Partition project_and_assign(const JointDistribution& jd, const ProjectionMask& mask);

/**
 * Partition maximizing e_Q over all K-label quantizers.
 *
 * K >= N: each y_j goes to label argmax_i p(x_i, y_j); labels N..K-1 stay empty.
 * K < N: every C(N, K) projection mask is tried and the one with the largest
 * e_Q (computed on the unprojected distribution) wins; the first mask wins ties.
 *
 * Throws KTooSmall for k == 0 and MaskBudgetExceeded when C(N, K) exceeds the budget.
 */
AlgoResult max_likelihood_partition(const JointDistribution& jd, std::size_t k, const ImpuritySpec& f,
                                    const MaxLikelihoodOptions& options = {});

/**
 * K > N: starts from the N-label maximum-likelihood partition and performs
 * K - N splits. Each split takes the nonempty partition (with at least two
 * points) of largest weighted impurity, finds its dominant class j*, and moves
 * every member with p(x_j*|y) > p(x_j*|z) to a fresh label. If that would move
 * nothing, the member with the largest p(x_j*|y) moves alone. Splitting stops
 * early, leaving labels empty, once no partition has two points.
 */
AlgoResult greedy_split(const JointDistribution& jd, std::size_t k, const ImpuritySpec& f);

/**
 * K < N: starts from the N-label maximum-likelihood partition, compacts labels
 * over the nonempty partitions, then repeatedly merges the pair whose union
 * increases impurity least until at most K remain. Labels are renumbered
 * densely after each merge.
 */
AlgoResult greedy_merge(const JointDistribution& jd, std::size_t k, const ImpuritySpec& f);

/**
 * Lloyd-style local search: reassigns each y_j to the nonempty partition
 * whose conditional q_k minimizes the Bregman divergence generated by f
 * (KL divergence for entropy, squared Euclidean distance for Gini), then
 * recomputes the conditionals. A point moves only when another partition is
 * better than its current one by more than a rounding margin; among equally
 * good alternatives the lowest label wins. Stops when nothing moves or after
 * `max_iters` iterations.
 *
 * A custom spec uses the same divergence with f' estimated by finite differences.
 */
AlgoResult iterative_refine(const JointDistribution& jd, const Partition& start, const ImpuritySpec& f,
                            std::size_t max_iters = 100);

struct OracleResult {
    /// Global minimum-impurity assignment (first in enumeration order on ties).
    AlgoResult best;
    /// Assignment attaining the global maximum e_Q.
    Partition max_e_q_partition;
    double max_e_q = 0.0;
    std::uint64_t assignments_evaluated = 0;
};

inline constexpr std::uint64_t kDefaultOracleCap = 2'000'000;

/// Enumerates all K^M assignments. Throws InstanceTooLarge when K^M exceeds `cap`.
OracleResult exhaustive_oracle(const JointDistribution& jd, std::size_t k, const ImpuritySpec& f,
                               std::uint64_t cap = kDefaultOracleCap);

} // namespace impuritypart

#endif // IMPURITYPART_ALGORITHMS_HPP
