#include "fairtrade/dataset.hpp"

#include "fairtrade/error.hpp"
#include "random.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

namespace fairtrade {

namespace {

std::string trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

/// Splits one CSV record. Returns false on an unterminated quote.
bool split_record(const std::string& line, std::vector<std::string>& cells)
{
    cells.clear();
    std::string cell;
    bool quoted = false;
    bool was_quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cell.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cell.push_back(ch);
            }
        } else if (ch == '"') {
            quoted = true;
            was_quoted = true;
        } else if (ch == ',') {
            cells.push_back(was_quoted ? cell : trim(cell));
            cell.clear();
            was_quoted = false;
        } else {
            cell.push_back(ch);
        }
    }
    if (quoted) {
        return false;
    }
    cells.push_back(was_quoted ? cell : trim(cell));
    return true;
}

bool parse_number(const std::string& text, double& value)
{
    if (text.empty()) {
        return false;
    }
    const char* begin = text.data();
    const char* end = text.data() + text.size();
    if (*begin == '+') {
        ++begin;
    }
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    return ec == std::errc() && ptr == end && std::isfinite(value);
}

std::size_t column_index(const std::vector<std::string>& columns, const std::string& name, const char* role)
{
    if (name.empty()) {
        throw UsageError(std::string(role) + " column not specified");
    }
    const auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) {
        throw DataError(std::string(role) + " column '" + name + "' not found in header");
    }
    return static_cast<std::size_t>(it - columns.begin());
}

std::set<std::string> distinct(const RawTable& table, std::size_t col)
{
    std::set<std::string> values;
    for (const auto& row : table.rows) {
        values.insert(row[col]);
    }
    return values;
}

} // namespace

RawTable parse_csv(std::istream& in, const Schema& schema, const std::string& source)
{
    RawTable table;
    std::string line;
    std::vector<std::string> cells;
    std::size_t line_no = 0;

    while (std::getline(in, line)) {
        ++line_no;
        if (!trim(line).empty()) {
            break;
        }
    }
    if (trim(line).empty()) {
        throw DataError(source + ": missing header row");
    }
    if (!split_record(line, table.columns)) {
        throw DataError(source + ":" + std::to_string(line_no) + ": unterminated quote in header");
    }
    table.label_index = column_index(table.columns, schema.label_col, "label");
    table.group_index = column_index(table.columns, schema.group_col, "group");
    if (table.label_index == table.group_index) {
        throw UsageError("label and group must be different columns");
    }

    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        if (!split_record(line, cells)) {
            throw DataError(source + ":" + std::to_string(line_no) + ": unterminated quote");
        }
        if (cells.size() != table.columns.size()) {
            throw DataError(source + ":" + std::to_string(line_no) + ": expected " + std::to_string(table.columns.size())
                            + " cells, found " + std::to_string(cells.size()));
        }
        if (schema.missing == MissingPolicy::drop
            && std::find(cells.begin(), cells.end(), schema.missing_marker) != cells.end()) {
            continue;
        }
        table.rows.push_back(cells);
    }
    return table;
}

RawTable load_csv(const std::filesystem::path& path, const Schema& schema)
{
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open '" + path.string() + "'");
    }
    return parse_csv(in, schema, path.string());
}

RawTable select_rows(const RawTable& table, std::span<const std::size_t> indices)
{
    RawTable out;
    out.columns = table.columns;
    out.label_index = table.label_index;
    out.group_index = table.group_index;
    out.rows.reserve(indices.size());
    for (const auto i : indices) {
        if (i >= table.rows.size()) {
            throw DataError("row index " + std::to_string(i) + " out of range");
        }
        out.rows.push_back(table.rows[i]);
    }
    return out;
}

FeatureEncoder FeatureEncoder::fit(const RawTable& table, const Schema& schema)
{
    if (table.rows.empty()) {
        throw DataError("cannot fit an encoder on an empty table");
    }
    FeatureEncoder enc;
    enc.schema_ = schema;

    const auto labels = distinct(table, table.label_index);
    if (labels.size() > 2) {
        throw DataError("label column '" + schema.label_col + "' has " + std::to_string(labels.size())
                        + " distinct values; expected a binary label");
    }
    const auto groups = distinct(table, table.group_index);
    if (groups.size() > 2) {
        throw DataError("group column '" + schema.group_col + "' has " + std::to_string(groups.size())
                        + " distinct values; expected a binary protected attribute");
    }
    if (groups.size() < 2 || !groups.contains(schema.favored_value)) {
        throw DegenerateGroupError("group column '" + schema.group_col
                                   + "' must contain the favored value '" + schema.favored_value
                                   + "' and exactly one other value");
    }

    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        if (c == table.label_index) {
            continue;
        }
        Column col;
        col.source = c;
        if (c == table.group_index) {
            if (!schema.with_s) {
                continue;
            }
            col.levels = {schema.favored_value};
            enc.names_.push_back(table.columns[c] + "=" + schema.favored_value);
            enc.columns_.push_back(std::move(col));
            continue;
        }

        bool numeric = true;
        double sum = 0.0;
        std::size_t count = 0;
        std::vector<double> values;
        values.reserve(table.rows.size());
        for (const auto& row : table.rows) {
            const auto& cell = row[c];
            if (cell == schema.missing_marker) {
                continue;
            }
            double v = 0.0;
            if (!parse_number(cell, v)) {
                numeric = false;
                break;
            }
            values.push_back(v);
            sum += v;
            ++count;
        }

        if (numeric && count > 0) {
            col.numeric = true;
            col.mean = sum / static_cast<double>(count);
            double ss = 0.0;
            for (const double v : values) {
                ss += (v - col.mean) * (v - col.mean);
            }
            const double sd = std::sqrt(ss / static_cast<double>(count));
            if (sd > 0.0) {
                col.scale = 1.0 / sd;
            } else {
                col.scale = 0.0;
                enc.warnings_.push_back("numeric column '" + table.columns[c]
                                        + "' has zero variance; standardized to zeros");
            }
            enc.names_.push_back(table.columns[c]);
        } else {
            std::set<std::string> levels;
            for (const auto& row : table.rows) {
                if (row[c] != schema.missing_marker) {
                    levels.insert(row[c]);
                }
            }
            col.levels.assign(levels.begin(), levels.end());
            for (const auto& level : col.levels) {
                enc.names_.push_back(table.columns[c] + "=" + level);
            }
        }
        enc.columns_.push_back(std::move(col));
    }
    return enc;
}

Dataset FeatureEncoder::transform(const RawTable& table) const
{
    Dataset ds;
    ds.rows = table.rows.size();
    ds.cols = names_.size();
    ds.feature_names = names_;
    ds.features.assign(ds.rows * ds.cols, 0.0);
    ds.labels.resize(ds.rows);
    ds.groups.resize(ds.rows);

    std::set<std::string> label_values;
    std::set<std::string> group_values;
    for (std::size_t i = 0; i < ds.rows; ++i) {
        const auto& row = table.rows[i];
        const auto& label = row[table.label_index];
        const auto& group = row[table.group_index];
        label_values.insert(label);
        group_values.insert(group);
        ds.labels[i] = label == schema_.positive_value ? 1 : 0;
        ds.groups[i] = group == schema_.favored_value ? 1 : 0;

        double* out = ds.features.data() + i * ds.cols;
        std::size_t k = 0;
        for (const auto& col : columns_) {
            const auto& cell = row[col.source];
            if (col.numeric) {
                double v = 0.0;
                if (cell == schema_.missing_marker) {
                    out[k] = 0.0;  // the training mean
                } else if (parse_number(cell, v)) {
                    out[k] = (v - col.mean) * col.scale;
                } else {
                    throw DataError("non-numeric value '" + cell + "' in numeric column '"
                                    + table.columns[col.source] + "'");
                }
                ++k;
            } else {
                const auto it = std::lower_bound(col.levels.begin(), col.levels.end(), cell);
                if (it != col.levels.end() && *it == cell) {
                    out[k + static_cast<std::size_t>(it - col.levels.begin())] = 1.0;
                }
                k += col.levels.size();
            }
        }
    }
    if (label_values.size() > 2) {
        throw DataError("label column '" + schema_.label_col + "' is not binary");
    }
    if (group_values.size() > 2) {
        throw DataError("group column '" + schema_.group_col + "' is not binary");
    }
    return ds;
}

Dataset encode(const RawTable& table, const Schema& schema)
{
    return FeatureEncoder::fit(table, schema).transform(table);
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_indices(std::size_t n, double fraction,
                                                                            std::uint64_t seed)
{
    if (!(fraction > 0.0 && fraction < 1.0)) {
        throw UsageError("split fraction must lie strictly inside (0, 1)");
    }
    const auto first_size = detail::round_half_up(fraction * static_cast<double>(n));
    if (first_size < 1 || first_size >= static_cast<std::int64_t>(n)) {
        throw DataError("split of " + std::to_string(n) + " rows at fraction " + std::to_string(fraction)
                        + " leaves one side empty");
    }
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) {
        order[i] = i;
    }
    detail::Rng rng(seed);
    rng.shuffle(order);

    const auto cut = order.begin() + first_size;
    std::vector<std::size_t> first(order.begin(), cut);
    std::vector<std::size_t> second(cut, order.end());
    std::sort(first.begin(), first.end());
    std::sort(second.begin(), second.end());
    return {std::move(first), std::move(second)};
}

Dataset subset(const Dataset& ds, std::span<const std::size_t> indices)
{
    Dataset out;
    out.rows = indices.size();
    out.cols = ds.cols;
    out.feature_names = ds.feature_names;
    out.features.resize(out.rows * out.cols);
    out.labels.resize(out.rows);
    out.groups.resize(out.rows);
    for (std::size_t k = 0; k < indices.size(); ++k) {
        const auto i = indices[k];
        if (i >= ds.rows) {
            throw DataError("row index " + std::to_string(i) + " out of range");
        }
        std::copy_n(ds.features.begin() + static_cast<std::ptrdiff_t>(i * ds.cols), ds.cols,
                    out.features.begin() + static_cast<std::ptrdiff_t>(k * ds.cols));
        out.labels[k] = ds.labels[i];
        out.groups[k] = ds.groups[i];
    }
    return out;
}

std::pair<Dataset, Dataset> split(const Dataset& ds, double fraction, std::uint64_t seed)
{
    const auto [first, second] = split_indices(ds.size(), fraction, seed);
    return {subset(ds, first), subset(ds, second)};
}

DatasetSummary summarize(BinarySpan labels, BinarySpan groups)
{
    const GroupedTally t = tally(labels, labels, groups);
    const MetricBundle m = evaluate(t);
    DatasetSummary s;
    s.n = t.total();
    s.alpha = t.alpha();
    s.pi0 = t.pi0();
    s.d0 = m.d;
    s.delta0 = m.delta;
    return s;
}

DatasetSummary summarize(const Dataset& ds)
{
    return summarize(ds.labels, ds.groups);
}

Dataset synthesize(std::size_t n, double alpha, double pi0, double d0, std::uint64_t seed,
                   const SynthesisOptions& options)
{
    if (n < 2) {
        throw DataError("synthesize: need at least two individuals");
    }
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw DegenerateGroupError("synthesize: alpha must lie strictly inside (0, 1)");
    }
    if (!(pi0 >= 0.0 && pi0 <= 1.0)) {
        throw DataError("synthesize: pi0 must lie in [0, 1]");
    }
    const double rate_favored = pi0 + (1.0 - alpha) * d0;
    const double rate_protected = pi0 - alpha * d0;
    constexpr double eps = 1e-12;
    if (rate_favored < -eps || rate_favored > 1.0 + eps || rate_protected < -eps || rate_protected > 1.0 + eps) {
        std::ostringstream msg;
        msg << "synthesize: infeasible (alpha=" << alpha << ", pi0=" << pi0 << ", d0=" << d0
            << "): p(+|w)=" << rate_favored << ", p(+|b)=" << rate_protected;
        throw InfeasibleError(msg.str());
    }

    const auto total = static_cast<std::int64_t>(n);
    const std::int64_t n_favored = detail::round_half_up(alpha * static_cast<double>(n));
    const std::int64_t n_protected = total - n_favored;
    if (n_favored < 1 || n_protected < 1) {
        throw DegenerateGroupError("synthesize: a group would be empty at n=" + std::to_string(n));
    }
    const std::int64_t positives = detail::round_half_up(pi0 * static_cast<double>(n));
    // d(P_f) = P_f / n_f - (P - P_f) / n_p is increasing in P_f; take the
    // nearest integer to the root of d(P_f) = d0, then clamp.
    const double ideal = static_cast<double>(n_favored)
                         * (static_cast<double>(n_protected) * d0 + static_cast<double>(positives))
                         / static_cast<double>(total);
    const std::int64_t lo = std::max<std::int64_t>(0, positives - n_protected);
    const std::int64_t hi = std::min(n_favored, positives);
    const std::int64_t pos_favored = std::clamp(detail::round_half_up(ideal), lo, hi);
    const std::int64_t pos_protected = positives - pos_favored;

    struct Cell {
        std::uint8_t group;
        std::uint8_t label;
    };
    std::vector<Cell> cells;
    cells.reserve(n);
    for (std::int64_t i = 0; i < n_favored; ++i) {
        cells.push_back({1, static_cast<std::uint8_t>(i < pos_favored ? 1 : 0)});
    }
    for (std::int64_t i = 0; i < n_protected; ++i) {
        cells.push_back({0, static_cast<std::uint8_t>(i < pos_protected ? 1 : 0)});
    }
    detail::Rng rng(seed);
    rng.shuffle(cells);

    Dataset ds;
    ds.rows = n;
    ds.cols = 2 + options.noise_features;
    ds.feature_names = {"x_label", "x_group"};
    for (std::size_t k = 0; k < options.noise_features; ++k) {
        ds.feature_names.push_back("noise_" + std::to_string(k + 1));
    }
    ds.features.resize(ds.rows * ds.cols);
    ds.labels.resize(n);
    ds.groups.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double y = cells[i].label ? 1.0 : -1.0;
        const double s = cells[i].group ? 1.0 : -1.0;
        double* row = ds.features.data() + i * ds.cols;
        row[0] = y + rng.normal();
        row[1] = 0.8 * s + 0.4 * y + rng.normal();
        for (std::size_t k = 0; k < options.noise_features; ++k) {
            row[2 + k] = rng.normal();
        }
        ds.labels[i] = cells[i].label;
        ds.groups[i] = cells[i].group;
    }
    return ds;
}

void write_csv(const Dataset& ds, std::ostream& out)
{
    for (const auto& name : ds.feature_names) {
        out << name << ',';
    }
    out << "group,label\n";
    char buf[32];
    for (std::size_t i = 0; i < ds.rows; ++i) {
        for (std::size_t j = 0; j < ds.cols; ++j) {
            std::snprintf(buf, sizeof buf, "%.10g", ds.features[i * ds.cols + j]);
            out << buf << ',';
        }
        out << (ds.groups[i] ? 'w' : 'b') << ',' << (ds.labels[i] ? '1' : '0') << '\n';
    }
}

} // namespace fairtrade
