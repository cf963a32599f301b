#ifndef IMPURITYPART_RUN_HPP
#define IMPURITYPART_RUN_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "impuritypart/algorithms.hpp"
#include "impuritypart/io.hpp"

namespace impuritypart {

inline constexpr std::string_view kReportSchema = "impuritypart/1";

enum class Algorithm { Ml, GreedySplit, GreedyMerge, Auto, Oracle };

Algorithm parse_algorithm(std::string_view name);
std::string_view to_string(Algorithm algorithm) noexcept;

/// Inclusive range of K values; a single K has first == last.
struct KRange {
    std::size_t first = 1;
    std::size_t last = 1;
};

/// Parses "K" or "a:b". Throws ConfigError on malformed input, k < 1, or a > b.
KRange parse_k_range(std::string_view text);

struct RunConfig {
    std::string input_path;
    InputFormat input_format = InputFormat::DenseCsv;
    ImpurityKind impurity = ImpurityKind::Entropy;
    KRange k;
    Algorithm algorithm = Algorithm::Auto;
    bool refine = false;
    std::size_t max_iters = 100;
    std::uint64_t mask_budget = std::uint64_t{1} << 20;
    std::uint64_t oracle_cap = kDefaultOracleCap;
    std::uint64_t seed = 0;
    std::string output_path;
    std::string csv_path;
    bool emit_assignment = false;
    /// Wall-clock timings make reports differ between runs, so they are opt-in.
    bool timing = false;
};

/// K > N: greedy_split, K = N: ml, K < N: greedy_merge.
Algorithm resolve_algorithm(Algorithm requested, std::size_t k, std::size_t n) noexcept;

struct RunRecord {
    std::size_t k = 0;
    Algorithm algorithm_used = Algorithm::Ml;
    std::optional<std::string> error_code;
    std::string error_message;

    double impurity = 0.0;
    double e_q = 0.0;
    double e_max_achieved = 0.0;
    double upper_u = 0.0;
    std::optional<double> lower_l;
    std::optional<double> ratio_r;
    std::optional<double> fano;
    std::size_t masks_evaluated = 0;
    std::size_t n_nonempty = 0;
    std::optional<std::size_t> refine_iterations;
    std::optional<double> wall_ms;
    std::optional<std::vector<std::size_t>> assignment;

    bool ok() const noexcept { return !error_code.has_value(); }
};

/// Runs one K. Library errors are captured in the record rather than thrown.
RunRecord run_single(const JointDistribution& jd, std::size_t k, const RunConfig& config);

/// Runs every K in config.k, in increasing order.
std::vector<RunRecord> run_sweep(const JointDistribution& jd, const RunConfig& config);

/// The versioned JSON report document.
nlohmann::ordered_json make_report(const RunConfig& config, const IngestResult& input,
                                   const std::vector<RunRecord>& records);

/// One CSV row per record with a header line.
std::string make_csv(const std::vector<RunRecord>& records);

} // namespace impuritypart

#endif // IMPURITYPART_RUN_HPP
