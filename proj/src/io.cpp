#include "impuritypart/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "impuritypart/error.hpp"

namespace impuritypart {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

[[noreturn]] void parse_fail(std::size_t line, const std::string& what) {
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + what, line);
}

double parse_value(std::string_view field, std::size_t line) {
    field = trim(field);
    if (!field.empty() && field.front() == '+') {
        field.remove_prefix(1);
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (field.empty() || ec != std::errc() || ptr != field.data() + field.size() || !std::isfinite(value)) {
        parse_fail(line, "cannot parse '" + std::string(field) + "' as a number");
    }
    if (value < 0.0) {
        throw Error(ErrorCode::NegativeEntry, "line " + std::to_string(line) + ": negative value", line);
    }
    return value;
}

std::size_t parse_index(std::string_view field, std::size_t line) {
    field = trim(field);
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) {
        parse_fail(line, "cannot parse '" + std::string(field) + "' as a 0-based index");
    }
    return value;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

// Calls visit(line_number, content) for every non-blank, non-comment line.
template <class Visitor>
void for_each_line(std::string_view text, Visitor&& visit) {
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        const auto end = nl == std::string_view::npos ? text.size() : nl;
        ++line_no;
        const auto content = trim(text.substr(pos, end - pos));
        if (!content.empty() && content.front() != '#') {
            visit(line_no, content);
        }
        if (nl == std::string_view::npos) {
            break;
        }
        pos = nl + 1;
    }
}

struct Table {
    std::vector<double> values;
    std::size_t rows = 0;
    std::size_t cols = 0;
};

Table read_dense(std::string_view text, bool integer_counts) {
    Table table;
    for_each_line(text, [&](std::size_t line, std::string_view content) {
        const auto fields = split_fields(content);
        if (table.rows == 0) {
            table.cols = fields.size();
        } else if (fields.size() != table.cols) {
            parse_fail(line, "expected " + std::to_string(table.cols) + " fields, got " +
                                 std::to_string(fields.size()));
        }
        for (auto field : fields) {
            const double v = parse_value(field, line);
            if (integer_counts && v != std::floor(v)) {
                parse_fail(line, "count '" + std::string(trim(field)) + "' is not an integer");
            }
            table.values.push_back(v);
        }
        ++table.rows;
    });
    return table;
}

Table read_triplets(std::string_view text) {
    struct Entry {
        std::size_t row;
        std::size_t col;
        double value;
    };
    std::vector<Entry> entries;
    Table table;
    for_each_line(text, [&](std::size_t line, std::string_view content) {
        const auto fields = split_fields(content);
        if (fields.size() != 3) {
            parse_fail(line, "expected 'j,i,value'");
        }
        Entry e{parse_index(fields[0], line), parse_index(fields[1], line), parse_value(fields[2], line)};
        table.rows = std::max(table.rows, e.row + 1);
        table.cols = std::max(table.cols, e.col + 1);
        entries.push_back(e);
    });
    table.values.assign(table.rows * table.cols, 0.0);
    for (const auto& e : entries) {
        table.values[e.row * table.cols + e.col] += e.value;
    }
    return table;
}

} // namespace

InputFormat parse_input_format(std::string_view name) {
    if (name == "dense_csv") {
        return InputFormat::DenseCsv;
    }
    if (name == "sparse_triplets") {
        return InputFormat::SparseTriplets;
    }
    if (name == "counts") {
        return InputFormat::Counts;
    }
    throw Error(ErrorCode::ConfigError, "unknown input format '" + std::string(name) + "'");
}

std::string_view to_string(InputFormat format) noexcept {
    switch (format) {
    case InputFormat::DenseCsv: return "dense_csv";
    case InputFormat::SparseTriplets: return "sparse_triplets";
    case InputFormat::Counts: return "counts";
    }
    return "unknown";
}

IngestResult ingest_text(std::string_view text, InputFormat format) {
    Table table = format == InputFormat::SparseTriplets ? read_triplets(text)
                                                        : read_dense(text, format == InputFormat::Counts);
    if (table.rows == 0) {
        throw Error(ErrorCode::ZeroTotal, "input contains no data rows");
    }

    std::vector<double> kept;
    std::vector<std::size_t> source_rows;
    kept.reserve(table.values.size());
    double total = 0.0;
    for (std::size_t r = 0; r < table.rows; ++r) {
        const auto first = table.values.begin() + static_cast<std::ptrdiff_t>(r * table.cols);
        const auto last = first + static_cast<std::ptrdiff_t>(table.cols);
        double mass = 0.0;
        for (auto it = first; it != last; ++it) {
            mass += *it;
        }
        if (mass == 0.0) {
            continue;
        }
        kept.insert(kept.end(), first, last);
        source_rows.push_back(r);
        total += mass;
    }
    if (source_rows.empty()) {
        throw Error(ErrorCode::ZeroTotal, "every row has zero mass");
    }

    const std::size_t rows = source_rows.size();
    const bool verbatim = format != InputFormat::Counts && std::abs(total - 1.0) <= kNormalizationTolerance;
    IngestResult result{verbatim ? JointDistribution::from_probabilities(std::move(kept), rows, table.cols)
                                 : build_joint(kept, rows, table.cols),
                        table.rows - rows, std::move(source_rows)};
    return result;
}

IngestResult ingest(const std::filesystem::path& path, InputFormat format) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return ingest_text(buffer.str(), format);
}

std::string format_double(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, ptr);
}

std::string emit_dense_csv(const JointDistribution& jd) {
    std::string out;
    for (std::size_t r = 0; r < jd.rows(); ++r) {
        const auto row = jd.row(r);
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c > 0) {
                out += ',';
            }
            out += format_double(row[c]);
        }
        out += '\n';
    }
    return out;
}

} // namespace impuritypart
