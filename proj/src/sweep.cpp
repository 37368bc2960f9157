#include "fairtrade/sweep.hpp"

#include "fairtrade/error.hpp"
#include "fairtrade/kernels.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace fairtrade {

namespace {

double parse_value(const std::string& token)
{
    if (token == "nan") {
        return std::numeric_limits<double>::quiet_NaN();
    }
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (token.empty() || end != token.c_str() + token.size()) {
        throw DataError("bad number '" + token + "'");
    }
    return v;
}

std::string format_value(double v)
{
    if (std::isnan(v)) {
        return "nan";
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Threshold below every score, so everybody is accepted.
double bottom_threshold(double lowest)
{
    return lowest > 0.0 ? 0.0 : lowest - 1.0;
}

} // namespace

SweepGrid SweepGrid::parse(const std::string& text)
{
    SweepGrid grid;
    if (text == "unique") {
        grid.kind = Kind::unique;
        return grid;
    }
    if (text.rfind("uniform:", 0) == 0) {
        grid.kind = Kind::uniform;
        const std::string count = text.substr(8);
        std::size_t n = 0;
        const auto [ptr, ec] = std::from_chars(count.data(), count.data() + count.size(), n);
        if (ec != std::errc() || ptr != count.data() + count.size() || n < 2) {
            throw UsageError("grid 'uniform:N' needs an integer N >= 2, got '" + count + "'");
        }
        grid.points = n;
        return grid;
    }
    grid.kind = Kind::list;
    std::stringstream in(text);
    std::string token;
    while (std::getline(in, token, ',')) {
        try {
            grid.thresholds.push_back(parse_value(token));
        } catch (const DataError&) {
            throw UsageError("grid must be 'unique', 'uniform:N' or a comma-separated list, got '" + text + "'");
        }
    }
    if (grid.thresholds.empty()) {
        throw UsageError("empty threshold grid");
    }
    return grid;
}

std::vector<double> sweep_thresholds(std::span<const double> scores, const SweepGrid& grid)
{
    if (scores.empty()) {
        throw DataError("cannot sweep an empty score vector");
    }
    std::vector<double> distinct(scores.begin(), scores.end());
    std::sort(distinct.begin(), distinct.end(), std::greater<>());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    const double lowest = distinct.back();

    std::vector<double> out;
    switch (grid.kind) {
    case SweepGrid::Kind::unique:
        out.reserve(distinct.size() + 1);
        out.push_back(1.0);
        for (std::size_t i = 0; i + 1 < distinct.size(); ++i) {
            const double hi = distinct[i];
            const double lo = distinct[i + 1];
            const double mid = lo + (hi - lo) / 2.0;
            // strict '>' means a threshold equal to `lo` separates the pair too
            out.push_back(mid > lo && mid < hi ? mid : lo);
        }
        out.push_back(bottom_threshold(lowest));
        break;
    case SweepGrid::Kind::uniform:
        for (std::size_t j = 0; j < grid.points; ++j) {
            out.push_back(1.0 - static_cast<double>(j) / static_cast<double>(grid.points - 1));
        }
        break;
    case SweepGrid::Kind::list:
        out = grid.thresholds;
        out.push_back(1.0);
        break;
    }
    std::sort(out.begin(), out.end(), std::greater<>());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    if (out.back() >= lowest) {
        out.push_back(bottom_threshold(lowest));
    }
    return out;
}

SweepTable sweep(const ScoreVector& scores, BinarySpan labels, BinarySpan groups, const SweepGrid& grid,
                 SweepMetadata metadata)
{
    if (scores.size() != labels.size() || labels.size() != groups.size()) {
        throw DataError("sweep: scores, labels and groups must be aligned");
    }
    const DatasetSummary data = summarize(labels, groups);
    const std::vector<double> thresholds = sweep_thresholds(scores.values(), grid);
    const std::vector<GroupedTally> tallies = kernels::threshold_tallies(scores.values(), labels, groups, thresholds);

    SweepTable table;
    table.metadata = std::move(metadata);
    table.rows.resize(thresholds.size());
    for (std::size_t k = 0; k < thresholds.size(); ++k) {
        const MetricBundle m = evaluate(tallies[k]);
        SweepRow& row = table.rows[k];
        row.threshold = thresholds[k];
        row.pi = m.pi;
        row.accuracy = m.accuracy;
        row.kappa = m.kappa;
        row.d = m.d;
        row.d_max = m.d_max;
        row.delta = m.delta;
        row.d_data = data.d0;
        row.delta_data = data.delta0;
        row.pi_data = data.pi0;
    }
    return table;
}

std::vector<std::pair<double, double>> SweepComparison::max_differences() const
{
    std::vector<std::pair<double, double>> out(classifiers.size(), {0.0, 0.0});
    for (const auto& row : rows) {
        const auto& ref = row.matches.front();
        if (!ref) {
            continue;
        }
        for (std::size_t k = 1; k < row.matches.size(); ++k) {
            if (const auto& other = row.matches[k]) {
                out[k].first = std::max(out[k].first, std::abs(other->kappa - ref->kappa));
                out[k].second = std::max(out[k].second, std::abs(other->delta - ref->delta));
            }
        }
    }
    return out;
}

SweepComparison compare_sweeps(const std::vector<SweepTable>& tables, double tolerance)
{
    if (tables.size() < 2) {
        throw DataError("comparison needs at least two sweeps");
    }
    for (const auto& t : tables) {
        if (t.metadata.manifest != tables.front().metadata.manifest) {
            throw DataError("cannot compare sweeps over different dataset manifests ('" + tables.front().metadata.manifest
                            + "' vs '" + t.metadata.manifest + "')");
        }
        if (t.rows.empty()) {
            throw DataError("cannot compare an empty sweep");
        }
    }

    SweepComparison out;
    for (const auto& t : tables) {
        out.classifiers.push_back(t.metadata.classifier);
    }
    for (const auto& ref : tables.front().rows) {
        SweepComparison::Row row;
        row.pi = ref.pi;
        row.matches.push_back(ref);
        for (std::size_t k = 1; k < tables.size(); ++k) {
            const auto& rows = tables[k].rows;
            const auto nearest = std::min_element(rows.begin(), rows.end(), [&](const SweepRow& a, const SweepRow& b) {
                return std::abs(a.pi - ref.pi) < std::abs(b.pi - ref.pi);
            });
            if (std::abs(nearest->pi - ref.pi) <= tolerance) {
                row.matches.emplace_back(*nearest);
            } else {
                row.matches.emplace_back(std::nullopt);
            }
        }
        out.rows.push_back(std::move(row));
    }
    return out;
}

std::optional<std::string> DatTable::meta(const std::string& key) const
{
    for (const auto& [k, v] : metadata) {
        if (k == key) {
            return v;
        }
    }
    return std::nullopt;
}

std::size_t DatTable::column(const std::string& name) const
{
    const auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) {
        throw DataError("table has no column '" + name + "'");
    }
    return static_cast<std::size_t>(it - columns.begin());
}

void write_dat(const DatTable& table, std::ostream& out)
{
    for (const auto& [key, value] : table.metadata) {
        out << "# " << key << ' ' << value << '\n';
    }
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        out << (c ? " " : "") << table.columns[c];
    }
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            out << (c ? " " : "") << format_value(row[c]);
        }
        out << '\n';
    }
}

DatTable read_dat(std::istream& in)
{
    DatTable table;
    std::string line;
    bool have_header = false;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        if (line.front() == '#') {
            std::istringstream meta(line.substr(1));
            std::string key;
            meta >> key;
            std::string value;
            std::getline(meta >> std::ws, value);
            table.metadata.emplace_back(key, value);
            continue;
        }
        std::istringstream fields(line);
        std::string token;
        if (!have_header) {
            while (fields >> token) {
                table.columns.push_back(token);
            }
            have_header = true;
            continue;
        }
        std::vector<double> row;
        while (fields >> token) {
            try {
                row.push_back(parse_value(token));
            } catch (const DataError&) {
                throw DataError("line " + std::to_string(line_no) + ": bad number '" + token + "'");
            }
        }
        if (row.size() != table.columns.size()) {
            throw DataError("line " + std::to_string(line_no) + ": expected " + std::to_string(table.columns.size())
                            + " values, found " + std::to_string(row.size()));
        }
        table.rows.push_back(std::move(row));
    }
    if (!have_header) {
        throw DataError("table has no header line");
    }
    return table;
}

DatTable to_dat(const SweepTable& table)
{
    DatTable out;
    out.metadata = {{"kind", "sweep"},
                    {"classifier", table.metadata.classifier},
                    {"manifest", table.metadata.manifest},
                    {"seed", std::to_string(table.metadata.seed)}};
    out.columns = sweep_columns();
    for (const auto& r : table.rows) {
        out.rows.push_back({r.threshold, r.pi, r.accuracy, r.kappa, r.d, r.d_max, r.delta, r.d_data, r.delta_data,
                            r.pi_data});
    }
    return out;
}

SweepTable sweep_from_dat(const DatTable& table)
{
    SweepTable out;
    out.metadata.classifier = table.meta("classifier").value_or("");
    out.metadata.manifest = table.meta("manifest").value_or("");
    out.metadata.seed = std::stoull(table.meta("seed").value_or("0"));
    std::vector<std::size_t> idx;
    for (const auto& name : sweep_columns()) {
        idx.push_back(table.column(name));
    }
    for (const auto& v : table.rows) {
        out.rows.push_back(SweepRow{v[idx[0]], v[idx[1]], v[idx[2]], v[idx[3]], v[idx[4]], v[idx[5]], v[idx[6]],
                                    v[idx[7]], v[idx[8]], v[idx[9]]});
    }
    return out;
}

DatTable frontier_to_dat(const std::vector<FrontierPoint>& points, OracleStrategy strategy,
                         const std::string& manifest)
{
    DatTable out;
    out.metadata = {{"kind", "oracle"}, {"strategy", std::string(to_string(strategy))}, {"manifest", manifest}};
    out.columns = {"target_d", "reachable", "d", "pi", "accuracy", "kappa", "delta", "flips"};
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (const auto& p : points) {
        if (p.reachable) {
            out.rows.push_back({p.target_d, 1.0, p.d, p.pi, p.accuracy, p.kappa, p.delta,
                                static_cast<double>(p.flips)});
        } else {
            out.rows.push_back({p.target_d, 0.0, nan, nan, nan, nan, nan, nan});
        }
    }
    return out;
}

DatTable comparison_to_dat(const SweepComparison& comparison)
{
    DatTable out;
    out.metadata = {{"kind", "comparison"}};
    out.columns = {"pi"};
    for (const auto& id : comparison.classifiers) {
        out.columns.push_back("kappa_" + id);
        out.columns.push_back("delta_" + id);
    }
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (const auto& row : comparison.rows) {
        std::vector<double> values = {row.pi};
        for (const auto& m : row.matches) {
            values.push_back(m ? m->kappa : nan);
            values.push_back(m ? m->delta : nan);
        }
        out.rows.push_back(std::move(values));
    }
    return out;
}

} // namespace fairtrade
