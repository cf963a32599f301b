#include "impuritypart/run.hpp"

#include <charconv>
#include <chrono>

#include "impuritypart/bounds.hpp"
#include "impuritypart/error.hpp"

namespace impuritypart {

namespace {

ImpuritySpec spec_for(ImpurityKind kind) {
    return kind == ImpurityKind::Gini ? ImpuritySpec::gini() : ImpuritySpec::entropy();
}

std::size_t parse_count(std::string_view text) {
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
        throw Error(ErrorCode::ConfigError, "cannot parse '" + std::string(text) + "' as K");
    }
    return value;
}

template <class T>
nlohmann::ordered_json optional_json(const std::optional<T>& value) {
    return value ? nlohmann::ordered_json(*value) : nlohmann::ordered_json(nullptr);
}

std::string optional_csv(const std::optional<double>& value) { return value ? format_double(*value) : ""; }

} // namespace

Algorithm parse_algorithm(std::string_view name) {
    if (name == "ml") {
        return Algorithm::Ml;
    }
    if (name == "greedy_split") {
        return Algorithm::GreedySplit;
    }
    if (name == "greedy_merge") {
        return Algorithm::GreedyMerge;
    }
    if (name == "auto") {
        return Algorithm::Auto;
    }
    if (name == "oracle") {
        return Algorithm::Oracle;
    }
    throw Error(ErrorCode::ConfigError, "unknown algorithm '" + std::string(name) + "'");
}

std::string_view to_string(Algorithm algorithm) noexcept {
    switch (algorithm) {
    case Algorithm::Ml: return "ml";
    case Algorithm::GreedySplit: return "greedy_split";
    case Algorithm::GreedyMerge: return "greedy_merge";
    case Algorithm::Auto: return "auto";
    case Algorithm::Oracle: return "oracle";
    }
    return "unknown";
}

KRange parse_k_range(std::string_view text) {
    KRange range;
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) {
        range.first = range.last = parse_count(text);
    } else {
        range.first = parse_count(text.substr(0, colon));
        range.last = parse_count(text.substr(colon + 1));
    }
    if (range.first < 1) {
        throw Error(ErrorCode::ConfigError, "K must be at least 1");
    }
    if (range.first > range.last) {
        throw Error(ErrorCode::ConfigError, "K range start exceeds its end");
    }
    return range;
}

Algorithm resolve_algorithm(Algorithm requested, std::size_t k, std::size_t n) noexcept {
    if (requested != Algorithm::Auto) {
        return requested;
    }
    if (k > n) {
        return Algorithm::GreedySplit;
    }
    return k == n ? Algorithm::Ml : Algorithm::GreedyMerge;
}

RunRecord run_single(const JointDistribution& jd, std::size_t k, const RunConfig& config) {
    RunRecord record;
    record.k = k;
    record.algorithm_used = resolve_algorithm(config.algorithm, k, jd.cols());
    const auto spec = spec_for(config.impurity);
    const auto started = std::chrono::steady_clock::now();

    try {
        AlgoResult result;
        switch (record.algorithm_used) {
        case Algorithm::Ml:
        case Algorithm::Auto:
            result = max_likelihood_partition(jd, k, spec, MaxLikelihoodOptions{config.mask_budget});
            break;
        case Algorithm::GreedySplit: result = greedy_split(jd, k, spec); break;
        case Algorithm::GreedyMerge: result = greedy_merge(jd, k, spec); break;
        case Algorithm::Oracle: result = exhaustive_oracle(jd, k, spec, config.oracle_cap).best; break;
        }
        const double e_max = result.e_max_achieved;
        if (config.refine) {
            const std::size_t masks = result.masks_evaluated;
            result = iterative_refine(jd, result.partition, spec, config.max_iters);
            result.masks_evaluated = masks;
            record.refine_iterations = result.iterations;
        }

        record.impurity = result.stats.impurity;
        record.e_q = result.stats.e_q;
        record.e_max_achieved = e_max;
        const auto bounds = make_bounds_report(record.e_q, jd.cols(), spec, false);
        record.upper_u = bounds.upper_u;
        record.lower_l = bounds.lower_l;
        record.fano = bounds.fano;
        // The guarantee only covers partitions built from the e_max quantizer.
        if (record.algorithm_used == Algorithm::Ml || record.algorithm_used == Algorithm::GreedySplit) {
            record.ratio_r = approximation_ratio(e_max, jd.cols(), spec);
        }
        record.masks_evaluated = result.masks_evaluated;
        record.n_nonempty = result.stats.count_nonempty();
        if (config.emit_assignment) {
            record.assignment = result.partition.assignment;
        }
    } catch (const Error& err) {
        record.error_code = std::string(to_string(err.code()));
        record.error_message = err.what();
    }

    if (config.timing) {
        record.wall_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
    }
    return record;
}

std::vector<RunRecord> run_sweep(const JointDistribution& jd, const RunConfig& config) {
    std::vector<RunRecord> records;
    records.reserve(config.k.last - config.k.first + 1);
    for (std::size_t k = config.k.first; k <= config.k.last; ++k) {
        records.push_back(run_single(jd, k, config));
    }
    return records;
}

nlohmann::ordered_json make_report(const RunConfig& config, const IngestResult& input,
                                   const std::vector<RunRecord>& records) {
    using json = nlohmann::ordered_json;
    json doc;
    doc["schema"] = kReportSchema;
    doc["input"] = {{"path", config.input_path},
                    {"format", to_string(config.input_format)},
                    {"rows", input.joint.rows()},
                    {"cols", input.joint.cols()},
                    {"dropped_rows", input.dropped_rows}};
    doc["config"] = {{"impurity", to_string(config.impurity)},
                     {"algorithm", to_string(config.algorithm)},
                     {"k_first", config.k.first},
                     {"k_last", config.k.last},
                     {"refine", config.refine},
                     {"max_iters", config.max_iters},
                     {"mask_budget", config.mask_budget},
                     {"seed", config.seed}};

    json list = json::array();
    std::size_t failed = 0;
    for (const auto& r : records) {
        json rec;
        rec["K"] = r.k;
        rec["algorithm_used"] = to_string(r.algorithm_used);
        if (!r.ok()) {
            ++failed;
            rec["error"] = {{"code", *r.error_code}, {"message", r.error_message}};
        } else {
            rec["impurity"] = r.impurity;
            rec["e_q"] = r.e_q;
            rec["e_max_achieved"] = r.e_max_achieved;
            rec["upper_u"] = r.upper_u;
            rec["lower_l"] = optional_json(r.lower_l);
            rec["ratio_r"] = optional_json(r.ratio_r);
            rec["fano"] = optional_json(r.fano);
            rec["masks_evaluated"] = r.masks_evaluated;
            rec["n_nonempty"] = r.n_nonempty;
            if (r.refine_iterations) {
                rec["refine_iterations"] = *r.refine_iterations;
            }
        }
        rec["wall_ms"] = optional_json(r.wall_ms);
        if (r.assignment) {
            rec["assignment"] = *r.assignment;
        }
        list.push_back(std::move(rec));
    }
    doc["summary"] = {{"records", records.size()}, {"failed", failed}};
    doc["records"] = std::move(list);
    return doc;
}

std::string make_csv(const std::vector<RunRecord>& records) {
    std::string out =
        "K,algorithm,impurity,e_q,e_max_achieved,upper_u,lower_l,ratio_r,fano,masks_evaluated,n_nonempty,wall_ms,error\n";
    for (const auto& r : records) {
        out += std::to_string(r.k) + ',' + std::string(to_string(r.algorithm_used)) + ',';
        if (r.ok()) {
            out += format_double(r.impurity) + ',' + format_double(r.e_q) + ',' + format_double(r.e_max_achieved) +
                   ',' + format_double(r.upper_u) + ',' + optional_csv(r.lower_l) + ',' + optional_csv(r.ratio_r) +
                   ',' + optional_csv(r.fano) + ',' + std::to_string(r.masks_evaluated) + ',' +
                   std::to_string(r.n_nonempty) + ',';
        } else {
            out += ",,,,,,,,,";
        }
        out += optional_csv(r.wall_ms) + ',' + r.error_code.value_or("") + '\n';
    }
    return out;
}

} // namespace impuritypart
