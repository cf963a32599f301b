#include "impuritypart/algorithms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "impuritypart/error.hpp"

namespace impuritypart {

namespace {

std::size_t argmax_first(std::span<const double> values) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i] > values[best]) {
            best = i;
        }
    }
    return best;
}

AlgoResult make_result(const JointDistribution& jd, Partition part, const ImpuritySpec& f) {
    AlgoResult result;
    result.stats = compute_stats(jd, part, f);
    result.partition = std::move(part);
    result.e_max_achieved = result.stats.e_q;
    return result;
}

TraceEvent initial_event(double impurity) {
    TraceEvent ev;
    ev.kind = TraceKind::Initial;
    ev.impurity = impurity;
    return ev;
}

// Bregman divergence of phi(p) = -sum_i f(p_i) between a point conditional p
// and a partition conditional q.
class Divergence {
public:
    explicit Divergence(const ImpuritySpec& f) : f_(f) {}

    double operator()(std::span<const double> p, std::span<const double> q) const {
        switch (f_.kind()) {
        case ImpurityKind::Entropy: return kl(p, q);
        case ImpurityKind::Gini: return squared_euclidean(p, q);
        case ImpurityKind::Custom: break;
        }
        return generic(p, q);
    }

private:
    static double kl(std::span<const double> p, std::span<const double> q) {
        double d = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) {
            if (p[i] <= 0.0) {
                continue;
            }
            if (q[i] <= 0.0) {
                return std::numeric_limits<double>::infinity();
            }
            d += p[i] * std::log2(p[i] / q[i]);
        }
        return d;
    }

    static double squared_euclidean(std::span<const double> p, std::span<const double> q) {
        double d = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) {
            const double diff = p[i] - q[i];
            d += diff * diff;
        }
        return d;
    }

    // Central difference for f', falling back to one-sided at the ends of [0, 1].
    double derivative(double x) const {
        constexpr double h = 1e-6;
        const double lo = std::max(0.0, x - h);
        const double hi = std::min(1.0, x + h);
        return (f_.f(hi) - f_.f(lo)) / (hi - lo);
    }

    double generic(std::span<const double> p, std::span<const double> q) const {
        double d = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) {
            d += f_.f(q[i]) - f_.f(p[i]) + derivative(q[i]) * (p[i] - q[i]);
        }
        return d;
    }

    const ImpuritySpec& f_;
};

// Relative margin a reassignment must beat; keeps rounding noise from moving
// points between partitions with identical conditionals.
constexpr double kMoveMargin = 1e-12;

} // namespace

std::string_view to_string(TraceKind kind) noexcept {
    switch (kind) {
    case TraceKind::Initial: return "initial";
    case TraceKind::Split: return "split";
    case TraceKind::Merge: return "merge";
    case TraceKind::Iteration: return "iteration";
    }
    return "unknown";
}

ProjectionMask ProjectionMask::all(std::size_t n) {
    std::vector<std::size_t> active(n);
    for (std::size_t i = 0; i < n; ++i) {
        active[i] = i;
    }
    return from_active(std::move(active), n);
}

ProjectionMask ProjectionMask::from_active(std::vector<std::size_t> active, std::size_t n) {
    ProjectionMask mask;
    mask.bits_.assign(n, false);
    for (std::size_t idx = 0; idx < active.size(); ++idx) {
        if (active[idx] >= n || (idx > 0 && active[idx] <= active[idx - 1])) {
            throw Error(ErrorCode::DimensionMismatch, "mask indices must be strictly increasing and below n");
        }
        mask.bits_[active[idx]] = true;
    }
    mask.active_ = std::move(active);
    return mask;
}

std::uint64_t binomial(std::size_t n, std::size_t k) noexcept {
    if (k > n) {
        return 0;
    }
    k = std::min(k, n - k);
    std::uint64_t result = 1;
    for (std::size_t i = 1; i <= k; ++i) {
        // result * (n - k + i) / i stays integral at every step.
        const std::uint64_t factor = n - k + i;
        if (result > std::numeric_limits<std::uint64_t>::max() / factor) {
            return std::numeric_limits<std::uint64_t>::max();
        }
        result = result * factor / i;
    }
    return result;
}

std::vector<ProjectionMask> enumerate_masks(std::size_t n, std::size_t k) {
    if (k >= n) {
        return {ProjectionMask::all(n)};
    }
    std::vector<ProjectionMask> masks;
    if (k == 0) {
        return masks;
    }
    std::vector<std::size_t> active(k);
    for (std::size_t i = 0; i < k; ++i) {
        active[i] = i;
    }
    while (true) {
        masks.push_back(ProjectionMask::from_active(active, n));
        // Advance to the next k-subset in lexicographic order.
        std::size_t pos = k;
        while (pos > 0 && active[pos - 1] == n - k + pos - 1) {
            --pos;
        }
        if (pos == 0) {
            break;
        }
        ++active[pos - 1];
        for (std::size_t i = pos; i < k; ++i) {
            active[i] = active[i - 1] + 1;
        }
    }
    return masks;
}

Partition project_and_assign(const JointDistribution& jd, const ProjectionMask& mask) {
    if (mask.size() != jd.cols()) {
        throw Error(ErrorCode::DimensionMismatch, "mask length differs from the number of classes");
    }
    const auto& active = mask.active();
    std::vector<std::size_t> labels(jd.rows(), 0);
    for (std::size_t j = 0; j < jd.rows(); ++j) {
        const auto row = jd.row(j);
        std::size_t best = 0;
        for (std::size_t pos = 1; pos < active.size(); ++pos) {
            if (row[active[pos]] > row[active[best]]) {
                best = pos;
            }
        }
        labels[j] = best;
    }
    return Partition(std::move(labels), std::max<std::size_t>(active.size(), 1));
}

AlgoResult max_likelihood_partition(const JointDistribution& jd, std::size_t k, const ImpuritySpec& f,
                                    const MaxLikelihoodOptions& options) {
    if (k < 1) {
        throw Error(ErrorCode::KTooSmall, "k must be at least 1");
    }
    const std::size_t n = jd.cols();

    if (k >= n) {
        Partition part = project_and_assign(jd, ProjectionMask::all(n));
        part.k = k;
        AlgoResult result = make_result(jd, std::move(part), f);
        result.masks_evaluated = 1;
        result.trace.push_back(initial_event(result.stats.impurity));
        return result;
    }

    const std::uint64_t count = binomial(n, k);
    if (count > options.mask_budget) {
        throw Error(ErrorCode::MaskBudgetExceeded, "C(" + std::to_string(n) + ", " + std::to_string(k) +
                                                       ") = " + std::to_string(count) + " masks exceeds budget " +
                                                       std::to_string(options.mask_budget));
    }

    std::optional<AlgoResult> best;
    std::size_t evaluated = 0;
    for (const auto& mask : enumerate_masks(n, k)) {
        Partition part = project_and_assign(jd, mask);
        PartitionStats stats = compute_stats(jd, part, f);
        ++evaluated;
        if (!best || stats.e_q > best->stats.e_q) {
            AlgoResult candidate;
            candidate.partition = std::move(part);
            candidate.stats = std::move(stats);
            best = std::move(candidate);
        }
    }
    AlgoResult result = std::move(*best);
    result.e_max_achieved = result.stats.e_q;
    result.masks_evaluated = evaluated;
    result.trace.push_back(initial_event(result.stats.impurity));
    return result;
}

AlgoResult greedy_split(const JointDistribution& jd, std::size_t k, const ImpuritySpec& f) {
    const std::size_t n = jd.cols();
    if (k <= n) {
        throw Error(ErrorCode::KNotGreaterThanN,
                    "greedy splitting needs k > n (k=" + std::to_string(k) + ", n=" + std::to_string(n) + ")");
    }
    const AlgoResult start = max_likelihood_partition(jd, n, f);

    std::vector<std::size_t> labels = start.partition.assignment;
    PartitionStats stats = compute_stats(jd, Partition(labels, k), f);

    AlgoResult result;
    result.masks_evaluated = start.masks_evaluated;
    result.trace.push_back(initial_event(stats.impurity));

    std::vector<std::size_t> members;
    for (std::size_t step = 0; step < k - n; ++step) {
        const std::size_t new_label = n + step;

        std::vector<std::size_t> sizes(k, 0);
        for (std::size_t label : labels) {
            ++sizes[label];
        }
        std::optional<std::size_t> source;
        for (std::size_t z = 0; z < k; ++z) {
            if (sizes[z] < 2) {
                continue;
            }
            if (!source || stats.per_partition_impurity[z] > stats.per_partition_impurity[*source]) {
                source = z;
            }
        }
        if (!source) {
            break;
        }

        const auto conditional = *stats.conditional(*source);
        const std::size_t dominant = argmax_first(conditional);
        const double threshold = conditional[dominant];

        members.clear();
        for (std::size_t j = 0; j < labels.size(); ++j) {
            if (labels[j] == *source) {
                members.push_back(j);
            }
        }
        auto attribution = [&](std::size_t j) { return jd.at(j, dominant) / jd.row_mass(j); };

        std::size_t moved = 0;
        for (std::size_t j : members) {
            if (attribution(j) > threshold) {
                ++moved;
            }
        }
        if (moved == 0 || moved == members.size()) {
            std::size_t pick = members.front();
            for (std::size_t j : members) {
                if (attribution(j) > attribution(pick)) {
                    pick = j;
                }
            }
            labels[pick] = new_label;
        } else {
            for (std::size_t j : members) {
                if (attribution(j) > threshold) {
                    labels[j] = new_label;
                }
            }
        }

        stats = compute_stats(jd, Partition(labels, k), f);
        TraceEvent ev;
        ev.kind = TraceKind::Split;
        ev.step = step + 1;
        ev.impurity = stats.impurity;
        ev.first = *source;
        ev.second = new_label;
        result.trace.push_back(std::move(ev));
    }

    result.partition = Partition(std::move(labels), k);
    result.stats = std::move(stats);
    result.e_max_achieved = result.stats.e_q;
    return result;
}

AlgoResult greedy_merge(const JointDistribution& jd, std::size_t k, const ImpuritySpec& f) {
    const std::size_t n = jd.cols();
    if (k >= n) {
        throw Error(ErrorCode::KNotLessThanN,
                    "greedy merging needs k < n (k=" + std::to_string(k) + ", n=" + std::to_string(n) + ")");
    }
    if (k < 1) {
        throw Error(ErrorCode::KTooSmall, "k must be at least 1");
    }
    const AlgoResult start = max_likelihood_partition(jd, n, f);

    struct Group {
        std::vector<double> joint;
        double impurity;
    };
    std::vector<Group> groups;
    std::vector<std::size_t> group_of(n, 0);
    for (std::size_t z = 0; z < n; ++z) {
        if (!start.stats.nonempty[z]) {
            continue;
        }
        const auto joint = start.stats.joint_row(z);
        group_of[z] = groups.size();
        groups.push_back({std::vector<double>(joint.begin(), joint.end()), start.stats.per_partition_impurity[z]});
    }

    AlgoResult result;
    result.masks_evaluated = start.masks_evaluated;
    result.trace.push_back(initial_event(start.stats.impurity));

    std::vector<double> merged(n);
    std::size_t step = 0;
    while (groups.size() > k) {
        TraceEvent ev;
        ev.kind = TraceKind::Merge;
        ev.step = ++step;
        double best_delta = std::numeric_limits<double>::infinity();
        std::size_t best_a = 0;
        std::size_t best_b = 1;
        for (std::size_t a = 0; a + 1 < groups.size(); ++a) {
            for (std::size_t b = a + 1; b < groups.size(); ++b) {
                for (std::size_t i = 0; i < n; ++i) {
                    merged[i] = groups[a].joint[i] + groups[b].joint[i];
                }
                const double delta = group_impurity(merged, f) - groups[a].impurity - groups[b].impurity;
                ev.deltas.push_back(delta);
                if (delta < best_delta) {
                    best_delta = delta;
                    best_a = a;
                    best_b = b;
                }
            }
        }

        for (std::size_t i = 0; i < n; ++i) {
            groups[best_a].joint[i] += groups[best_b].joint[i];
        }
        groups[best_a].impurity = group_impurity(groups[best_a].joint, f);
        groups.erase(groups.begin() + static_cast<std::ptrdiff_t>(best_b));
        for (auto& g : group_of) {
            if (g == best_b) {
                g = best_a;
            } else if (g > best_b) {
                --g;
            }
        }

        ev.first = best_a;
        ev.second = best_b;
        ev.impurity = 0.0;
        for (const auto& g : groups) {
            ev.impurity += g.impurity;
        }
        result.trace.push_back(std::move(ev));
    }

    std::vector<std::size_t> labels(jd.rows());
    for (std::size_t j = 0; j < labels.size(); ++j) {
        labels[j] = group_of[start.partition.assignment[j]];
    }
    result.partition = Partition(std::move(labels), k);
    result.stats = compute_stats(jd, result.partition, f);
    result.e_max_achieved = result.stats.e_q;
    return result;
}

AlgoResult iterative_refine(const JointDistribution& jd, const Partition& start, const ImpuritySpec& f,
                            std::size_t max_iters) {
    if (start.size() != jd.rows()) {
        throw Error(ErrorCode::DimensionMismatch, "start partition length differs from the number of rows");
    }
    PartitionStats stats = compute_stats(jd, start, f);
    if (stats.count_nonempty() == 0) {
        throw Error(ErrorCode::EmptyStart, "start partition has no nonempty label");
    }

    const std::size_t n = jd.cols();
    const Divergence divergence(f);
    std::vector<std::size_t> labels = start.assignment;
    std::vector<double> point(n);

    AlgoResult result;
    result.trace.push_back(initial_event(stats.impurity));

    std::size_t iter = 0;
    while (iter < max_iters) {
        ++iter;
        std::size_t moved = 0;
        for (std::size_t j = 0; j < labels.size(); ++j) {
            const auto row = jd.row(j);
            for (std::size_t i = 0; i < n; ++i) {
                point[i] = row[i] / jd.row_mass(j);
            }
            const std::size_t current = labels[j];
            const double current_d = divergence(point, *stats.conditional(current));
            const double required = current_d - kMoveMargin * std::max(1.0, std::abs(current_d));

            std::optional<std::size_t> best;
            double best_d = required;
            for (std::size_t z = 0; z < stats.k; ++z) {
                if (z == current || !stats.nonempty[z]) {
                    continue;
                }
                const double d = divergence(point, *stats.conditional(z));
                if (d < best_d) {
                    best_d = d;
                    best = z;
                }
            }
            if (best) {
                labels[j] = *best;
                ++moved;
            }
        }
        if (moved == 0) {
            break;
        }
        stats = compute_stats(jd, Partition(labels, start.k), f);
        TraceEvent ev;
        ev.kind = TraceKind::Iteration;
        ev.step = iter;
        ev.impurity = stats.impurity;
        ev.moved = moved;
        result.trace.push_back(std::move(ev));
    }

    result.partition = Partition(std::move(labels), start.k);
    result.stats = std::move(stats);
    result.e_max_achieved = result.stats.e_q;
    result.iterations = iter;
    return result;
}

OracleResult exhaustive_oracle(const JointDistribution& jd, std::size_t k, const ImpuritySpec& f,
                               std::uint64_t cap) {
    if (k < 1) {
        throw Error(ErrorCode::KTooSmall, "k must be at least 1");
    }
    const std::size_t m = jd.rows();
    const std::size_t n = jd.cols();

    std::uint64_t total = 1;
    for (std::size_t j = 0; j < m; ++j) {
        if (total > cap / k) {
            throw Error(ErrorCode::InstanceTooLarge, std::to_string(k) + "^" + std::to_string(m) +
                                                         " assignments exceed the cap of " + std::to_string(cap));
        }
        total *= k;
    }

    // Depth-first enumeration with label 0 first at every position; group
    // masses are rebuilt by adding rows in increasing j so each leaf's sums are
    // bit-identical to compute_stats.
    std::vector<double> joint(k * n, 0.0);
    std::vector<double> impurity(k, 0.0);
    std::vector<double> peak(k, 0.0);
    std::vector<double> saved(m * n);
    std::vector<std::size_t> labels(m, 0);

    double best_impurity = std::numeric_limits<double>::infinity();
    double best_e = -1.0;
    std::vector<std::size_t> best_labels;
    std::vector<std::size_t> best_e_labels;
    std::uint64_t evaluated = 0;

    auto refresh = [&](std::size_t z) {
        const std::span<const double> row(joint.data() + z * n, n);
        double mass = 0.0;
        double top = 0.0;
        for (double v : row) {
            mass += v;
            top = std::max(top, v);
        }
        impurity[z] = mass > 0.0 ? group_impurity(row, f) : 0.0;
        peak[z] = mass > 0.0 ? top : 0.0;
    };

    auto descend = [&](auto& self, std::size_t j) -> void {
        if (j == m) {
            ++evaluated;
            double total_impurity = 0.0;
            double e = 0.0;
            for (std::size_t z = 0; z < k; ++z) {
                total_impurity += impurity[z];
                e += peak[z];
            }
            if (total_impurity < best_impurity) {
                best_impurity = total_impurity;
                best_labels = labels;
            }
            if (e > best_e) {
                best_e = e;
                best_e_labels = labels;
            }
            return;
        }
        const auto row = jd.row(j);
        for (std::size_t z = 0; z < k; ++z) {
            double* target = joint.data() + z * n;
            std::copy(target, target + n, saved.begin() + static_cast<std::ptrdiff_t>(j * n));
            const double old_impurity = impurity[z];
            const double old_peak = peak[z];
            for (std::size_t i = 0; i < n; ++i) {
                target[i] += row[i];
            }
            refresh(z);
            labels[j] = z;
            self(self, j + 1);
            std::copy(saved.begin() + static_cast<std::ptrdiff_t>(j * n),
                      saved.begin() + static_cast<std::ptrdiff_t>((j + 1) * n), target);
            impurity[z] = old_impurity;
            peak[z] = old_peak;
        }
    };
    descend(descend, 0);

    OracleResult result;
    result.best = make_result(jd, Partition(best_labels, k), f);
    result.best.masks_evaluated = 0;
    result.max_e_q_partition = Partition(best_e_labels, k);
    result.max_e_q = best_e;
    result.assignments_evaluated = evaluated;
    return result;
}

} // namespace impuritypart
