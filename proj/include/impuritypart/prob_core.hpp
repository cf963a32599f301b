#ifndef IMPURITYPART_PROB_CORE_HPP
#define IMPURITYPART_PROB_CORE_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "impuritypart/impurity.hpp"

/**
 * @file prob_core.hpp
 *
 * @brief Joint distributions p(x_i, y_j), partitions of the data points y_j,
 * and the statistics a partition induces.
 */
namespace impuritypart {

/// Absolute tolerance on probability normalization.
inline constexpr double kNormalizationTolerance = 1e-9;

/**
 * Dense M x N matrix of probabilities p(x_i, y_j), stored row-major with one
 * row per data point y_j and one column per class x_i.
 *
 * Immutable once constructed. Every entry is >= 0, every row has positive
 * mass, and the total is 1 within kNormalizationTolerance.
 */
class JointDistribution {
public:
    /**
     * Validates `values` as an already-normalized joint distribution without
     * rescaling it. Throws NegativeEntry, ZeroRow, NotNormalized or
     * DimensionMismatch.
     */
    static JointDistribution from_probabilities(std::vector<double> values, std::size_t rows, std::size_t cols);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double at(std::size_t row, std::size_t col) const noexcept { return values_[row * cols_ + col]; }
    std::span<const double> row(std::size_t r) const noexcept { return {values_.data() + r * cols_, cols_}; }

    /// p(y_j).
    double row_mass(std::size_t r) const noexcept { return row_mass_[r]; }

    /// p(x_i).
    std::vector<double> class_marginal() const;

    std::span<const double> values() const noexcept { return values_; }

    friend bool operator==(const JointDistribution& a, const JointDistribution& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.values_ == b.values_;
    }

private:
    JointDistribution(std::vector<double> values, std::vector<double> row_mass, std::size_t rows, std::size_t cols)
        : values_(std::move(values)), row_mass_(std::move(row_mass)), rows_(rows), cols_(cols) {}

    std::vector<double> values_;
    std::vector<double> row_mass_;
    std::size_t rows_;
    std::size_t cols_;
};

/**
 * Normalizes a nonnegative M x N matrix (counts or unnormalized weights) by its
 * total. Throws NegativeEntry, ZeroTotal or ZeroRow naming the offending index.
 */
JointDistribution build_joint(const std::vector<std::vector<double>>& raw);

/// Flat row-major variant of build_joint.
JointDistribution build_joint(std::span<const double> raw, std::size_t rows, std::size_t cols);

/// Assignment of every data point to one of k labels. Labels may be unused.
struct Partition {
    std::vector<std::size_t> assignment;
    std::size_t k = 1;

    Partition() = default;

    /// Throws KTooSmall when k == 0 and InvalidLabel for any label >= k.
    Partition(std::vector<std::size_t> labels, std::size_t num_labels);

    std::size_t size() const noexcept { return assignment.size(); }

    friend bool operator==(const Partition&, const Partition&) = default;
};

/**
 * Quantities induced by a partition: p(z_k), p(x_i, z_k), p(x_i | z_k), the
 * weighted per-partition impurity F_k = p(z_k) sum_i f(p(x_i|z_k)), their sum
 * I_Q, and e_Q = sum_k max_i p(x_i, z_k).
 *
 * Empty partitions have p(z_k) = 0, contribute nothing to I_Q or e_Q, and
 * carry no conditional row.
 */
struct PartitionStats {
    std::size_t k = 0;
    std::size_t n = 0;
    std::vector<double> pz;
    std::vector<double> pxz;
    std::vector<double> px_given_z;
    std::vector<bool> nonempty;
    std::vector<double> per_partition_impurity;
    double impurity = 0.0;
    double e_q = 0.0;

    std::span<const double> joint_row(std::size_t label) const noexcept { return {pxz.data() + label * n, n}; }

    /// p(x | z_label), or nullopt for an empty partition.
    std::optional<std::span<const double>> conditional(std::size_t label) const noexcept {
        if (!nonempty[label]) {
            return std::nullopt;
        }
        return std::span<const double>(px_given_z.data() + label * n, n);
    }

    std::size_t count_nonempty() const noexcept;
};

/// Throws DimensionMismatch when the partition length differs from jd.rows().
PartitionStats compute_stats(const JointDistribution& jd, const Partition& part, const ImpuritySpec& f);

/**
 * Weighted impurity F(p_{x,z}) = p(z) sum_i f(p(x_i,z) / p(z)) of a group whose
 * unnormalized class masses are `joint_row`. Zero for a zero-mass group.
 */
double group_impurity(std::span<const double> joint_row, const ImpuritySpec& f);

} // namespace impuritypart

#endif // IMPURITYPART_PROB_CORE_HPP
