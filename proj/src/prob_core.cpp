#include "impuritypart/prob_core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "impuritypart/error.hpp"

namespace impuritypart {

namespace {

void check_shape(std::size_t size, std::size_t rows, std::size_t cols) {
    if (rows < 1) {
        throw Error(ErrorCode::DimensionMismatch, "a joint distribution needs at least one row");
    }
    if (cols < 2) {
        throw Error(ErrorCode::DimensionMismatch, "a joint distribution needs at least two columns");
    }
    if (size != rows * cols) {
        throw Error(ErrorCode::DimensionMismatch,
                    "expected " + std::to_string(rows * cols) + " values, got " + std::to_string(size));
    }
}

void check_nonnegative(std::span<const double> values) {
    for (std::size_t idx = 0; idx < values.size(); ++idx) {
        if (!(values[idx] >= 0.0) || !std::isfinite(values[idx])) {
            throw Error(ErrorCode::NegativeEntry,
                        "entry " + std::to_string(idx) + " is negative or not finite", idx);
        }
    }
}

std::vector<double> row_sums(std::span<const double> values, std::size_t rows, std::size_t cols) {
    std::vector<double> sums(rows, 0.0);
    for (std::size_t r = 0; r < rows; ++r) {
        double s = 0.0;
        for (std::size_t c = 0; c < cols; ++c) {
            s += values[r * cols + c];
        }
        if (s == 0.0) {
            throw Error(ErrorCode::ZeroRow, "row " + std::to_string(r) + " has zero mass", r);
        }
        sums[r] = s;
    }
    return sums;
}

} // namespace

JointDistribution JointDistribution::from_probabilities(std::vector<double> values, std::size_t rows,
                                                        std::size_t cols) {
    check_shape(values.size(), rows, cols);
    check_nonnegative(values);
    auto masses = row_sums(values, rows, cols);
    double total = 0.0;
    for (double m : masses) {
        total += m;
    }
    if (std::abs(total - 1.0) > kNormalizationTolerance) {
        throw Error(ErrorCode::NotNormalized, "probabilities sum to " + std::to_string(total));
    }
    return JointDistribution(std::move(values), std::move(masses), rows, cols);
}

std::vector<double> JointDistribution::class_marginal() const {
    std::vector<double> px(cols_, 0.0);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) {
            px[c] += at(r, c);
        }
    }
    return px;
}

JointDistribution build_joint(std::span<const double> raw, std::size_t rows, std::size_t cols) {
    check_shape(raw.size(), rows, cols);
    check_nonnegative(raw);
    double total = 0.0;
    for (double v : raw) {
        total += v;
    }
    if (total <= 0.0) {
        throw Error(ErrorCode::ZeroTotal, "matrix total is zero");
    }
    // Zero rows are reported before normalization so the index refers to the input.
    row_sums(raw, rows, cols);

    std::vector<double> values(raw.begin(), raw.end());
    for (double& v : values) {
        v /= total;
    }
    return JointDistribution::from_probabilities(std::move(values), rows, cols);
}

JointDistribution build_joint(const std::vector<std::vector<double>>& raw) {
    if (raw.empty()) {
        throw Error(ErrorCode::DimensionMismatch, "a joint distribution needs at least one row");
    }
    const std::size_t cols = raw.front().size();
    std::vector<double> flat;
    flat.reserve(raw.size() * cols);
    for (std::size_t r = 0; r < raw.size(); ++r) {
        if (raw[r].size() != cols) {
            throw Error(ErrorCode::DimensionMismatch,
                        "row " + std::to_string(r) + " has " + std::to_string(raw[r].size()) + " columns, expected " +
                            std::to_string(cols),
                        r);
        }
        flat.insert(flat.end(), raw[r].begin(), raw[r].end());
    }
    return build_joint(flat, raw.size(), cols);
}

Partition::Partition(std::vector<std::size_t> labels, std::size_t num_labels)
    : assignment(std::move(labels)), k(num_labels) {
    if (k == 0) {
        throw Error(ErrorCode::KTooSmall, "a partition needs at least one label");
    }
    for (std::size_t j = 0; j < assignment.size(); ++j) {
        if (assignment[j] >= k) {
            throw Error(ErrorCode::InvalidLabel,
                        "label " + std::to_string(assignment[j]) + " at position " + std::to_string(j) +
                            " is not below k=" + std::to_string(k),
                        j);
        }
    }
}

std::size_t PartitionStats::count_nonempty() const noexcept {
    return static_cast<std::size_t>(std::count(nonempty.begin(), nonempty.end(), true));
}

double group_impurity(std::span<const double> joint_row, const ImpuritySpec& f) {
    double mass = 0.0;
    for (double v : joint_row) {
        mass += v;
    }
    if (mass <= 0.0) {
        return 0.0;
    }
    double sum = 0.0;
    for (double v : joint_row) {
        sum += f.f(v / mass);
    }
    return mass * sum;
}

PartitionStats compute_stats(const JointDistribution& jd, const Partition& part, const ImpuritySpec& f) {
    if (part.size() != jd.rows()) {
        throw Error(ErrorCode::DimensionMismatch, "partition has " + std::to_string(part.size()) +
                                                      " entries but the distribution has " +
                                                      std::to_string(jd.rows()) + " rows");
    }
    const std::size_t n = jd.cols();
    const std::size_t k = part.k;

    PartitionStats stats;
    stats.k = k;
    stats.n = n;
    stats.pxz.assign(k * n, 0.0);
    for (std::size_t j = 0; j < jd.rows(); ++j) {
        const std::size_t label = part.assignment[j];
        if (label >= k) {
            throw Error(ErrorCode::InvalidLabel, "label out of range at position " + std::to_string(j), j);
        }
        const auto row = jd.row(j);
        for (std::size_t i = 0; i < n; ++i) {
            stats.pxz[label * n + i] += row[i];
        }
    }

    stats.pz.assign(k, 0.0);
    stats.px_given_z.assign(k * n, 0.0);
    stats.nonempty.assign(k, false);
    stats.per_partition_impurity.assign(k, 0.0);
    for (std::size_t z = 0; z < k; ++z) {
        const auto joint = stats.joint_row(z);
        double mass = 0.0;
        double best = 0.0;
        for (double v : joint) {
            mass += v;
            best = std::max(best, v);
        }
        stats.pz[z] = mass;
        if (mass <= 0.0) {
            continue;
        }
        stats.nonempty[z] = true;
        for (std::size_t i = 0; i < n; ++i) {
            stats.px_given_z[z * n + i] = joint[i] / mass;
        }
        stats.per_partition_impurity[z] = group_impurity(joint, f);
        stats.impurity += stats.per_partition_impurity[z];
        stats.e_q += best;
    }
    return stats;
}

} // namespace impuritypart
