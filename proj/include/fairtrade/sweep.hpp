#pragma once

#include "fairtrade/baselines.hpp"
#include "fairtrade/classifiers.hpp"
#include "fairtrade/metrics.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fairtrade {

struct SweepRow {
    double threshold = 0.0;
    double pi = 0.0;
    double accuracy = 0.0;
    double kappa = 0.0;
    double d = 0.0;
    double d_max = 0.0;
    double delta = 0.0;
    double d_data = 0.0;      ///< d of the true labels (constant)
    double delta_data = 0.0;  ///< delta of the true labels (constant)
    double pi_data = 0.0;     ///< positive rate of the true labels (constant)
};

struct SweepMetadata {
    std::string classifier;
    std::string manifest;
    std::uint64_t seed = 0;
};

struct SweepTable {
    SweepMetadata metadata;
    std::vector<SweepRow> rows;  ///< descending threshold, so non-decreasing pi
};

struct SweepGrid {
    enum class Kind { unique, uniform, list };
    Kind kind = Kind::unique;
    std::size_t points = 101;
    std::vector<double> thresholds;

    /// "unique", "uniform:N" (N >= 2) or a comma-separated threshold list.
    static SweepGrid parse(const std::string& text);
};

/// Thresholds for a grid, sorted descending. Always starts with a threshold
/// at or above the top score (nobody accepted) and ends below the lowest
/// score (everybody accepted). For `unique`, one threshold separates each
/// pair of adjacent distinct scores.
std::vector<double> sweep_thresholds(std::span<const double> scores, const SweepGrid& grid);

/// One row per threshold: decisions via predict_at, metrics via evaluate.
/// Rows are computed concurrently.
SweepTable sweep(const ScoreVector& scores, BinarySpan labels, BinarySpan groups, const SweepGrid& grid,
                 SweepMetadata metadata = {});

/// Rows of several sweeps aligned to the first table's pi values. A row of
/// another table matches when its pi is the nearest one and within
/// `tolerance`.
struct SweepComparison {
    std::vector<std::string> classifiers;
    struct Row {
        double pi = 0.0;
        std::vector<std::optional<SweepRow>> matches;  ///< one per table; [0] is the reference row
    };
    std::vector<Row> rows;

    /// Largest |kappa_k - kappa_0| and |delta_k - delta_0| over matched rows,
    /// per table k (entry 0 is always zero).
    [[nodiscard]] std::vector<std::pair<double, double>> max_differences() const;
};

inline constexpr double kAlignmentTolerance = 0.01;

/// Throws DataError when fewer than two tables are given or the manifests
/// differ.
SweepComparison compare_sweeps(const std::vector<SweepTable>& tables, double tolerance = kAlignmentTolerance);

/// Generic whitespace-delimited table: `# key value` metadata lines, one
/// header line of column names, then numeric rows.
struct DatTable {
    std::vector<std::pair<std::string, std::string>> metadata;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    [[nodiscard]] std::optional<std::string> meta(const std::string& key) const;
    /// Throws DataError if the column is absent.
    [[nodiscard]] std::size_t column(const std::string& name) const;
};

void write_dat(const DatTable& table, std::ostream& out);
DatTable read_dat(std::istream& in);

DatTable to_dat(const SweepTable& table);
SweepTable sweep_from_dat(const DatTable& table);
DatTable frontier_to_dat(const std::vector<FrontierPoint>& points, OracleStrategy strategy,
                         const std::string& manifest);
DatTable comparison_to_dat(const SweepComparison& comparison);

inline const std::vector<std::string>& sweep_columns()
{
    static const std::vector<std::string> names = {"threshold", "pi",    "accuracy", "kappa",      "d",
                                                   "d_max",     "delta", "d_data",   "delta_data", "pi_data"};
    return names;
}

} // namespace fairtrade
