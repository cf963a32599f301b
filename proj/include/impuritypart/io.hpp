#ifndef IMPURITYPART_IO_HPP
#define IMPURITYPART_IO_HPP

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "impuritypart/prob_core.hpp"

namespace impuritypart {

enum class InputFormat {
    /// One row per data point, comma-separated probabilities (or weights).
    DenseCsv,
    /// Lines `j,i,value` with 0-based row j and class i; absent entries are zero.
    SparseTriplets,
    /// Same layout as DenseCsv but integer counts, always normalized by the total.
    Counts,
};

InputFormat parse_input_format(std::string_view name);
std::string_view to_string(InputFormat format) noexcept;

struct IngestResult {
    JointDistribution joint;
    /// Rows with zero mass removed before normalization.
    std::size_t dropped_rows = 0;
    /// Original row index of every kept row.
    std::vector<std::size_t> source_rows;
};

/**
 * Parses a joint distribution from text. Blank lines and lines starting with
 * '#' are ignored. Dense and sparse inputs whose total is within 1e-9 of 1
 * are kept verbatim; anything else is divided by its total.
 *
 * Throws ParseError (index = 1-based line), NegativeEntry or ZeroTotal.
 */
IngestResult ingest_text(std::string_view text, InputFormat format);

/// Reads `path` and forwards to ingest_text. Throws IoError if unreadable.
IngestResult ingest(const std::filesystem::path& path, InputFormat format);

/// Shortest decimal string that parses back to exactly `value`.
std::string format_double(double value);

/// Dense CSV with shortest round-trip formatting; ingest_text(emit_dense_csv(jd), DenseCsv) reproduces jd.
std::string emit_dense_csv(const JointDistribution& jd);

} // namespace impuritypart

#endif // IMPURITYPART_IO_HPP
