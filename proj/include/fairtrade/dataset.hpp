#pragma once

#include "fairtrade/kernels.hpp"
#include "fairtrade/metrics.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace fairtrade {

enum class MissingPolicy { drop, keep };

/// Column roles for a CSV file. The favored group and the positive label are
/// fixed here, at ingestion, and never re-inferred from the data.
struct Schema {
    std::string label_col;
    std::string positive_value;
    std::string group_col;
    std::string favored_value;
    bool with_s = false;  ///< include the protected column among the features
    MissingPolicy missing = MissingPolicy::drop;
    std::string missing_marker = "?";
};

struct RawTable {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    std::size_t label_index = 0;
    std::size_t group_index = 0;

    [[nodiscard]] std::size_t size() const noexcept { return rows.size(); }
};

struct Dataset {
    std::vector<double> features;  ///< row-major, rows x cols
    std::size_t rows = 0;
    std::size_t cols = 0;
    BinaryVector labels;
    BinaryVector groups;
    std::vector<std::string> feature_names;

    [[nodiscard]] std::size_t size() const noexcept { return rows; }
    [[nodiscard]] MatrixView view() const { return MatrixView{features, rows, cols}; }
};

struct DatasetSummary {
    std::int64_t n = 0;
    double alpha = 0.0;
    double pi0 = 0.0;
    double d0 = 0.0;
    double delta0 = 0.0;
};

/// Parses CSV text with a header row. Unquoted cells are trimmed; double
/// quotes follow the usual CSV escaping. Blank lines are skipped.
RawTable parse_csv(std::istream& in, const Schema& schema, const std::string& source = "<stream>");
RawTable load_csv(const std::filesystem::path& path, const Schema& schema);

RawTable select_rows(const RawTable& table, std::span<const std::size_t> indices);

/// One-hot encodes categorical columns and standardizes numeric ones with
/// statistics taken from the table passed to `fit`. A column is numeric when
/// every non-missing cell parses as a number.
class FeatureEncoder {
public:
    static FeatureEncoder fit(const RawTable& table, const Schema& schema);

    [[nodiscard]] Dataset transform(const RawTable& table) const;
    [[nodiscard]] const std::vector<std::string>& feature_names() const noexcept { return names_; }
    [[nodiscard]] const std::vector<std::string>& warnings() const noexcept { return warnings_; }

private:
    struct Column {
        std::size_t source = 0;
        bool numeric = false;
        double mean = 0.0;
        double scale = 1.0;  ///< 0 for a constant column
        std::vector<std::string> levels;  ///< sorted; the protected column keeps only the favored level
    };

    Schema schema_;
    std::vector<Column> columns_;
    std::vector<std::string> names_;
    std::vector<std::string> warnings_;
};

/// fit + transform on the same table.
Dataset encode(const RawTable& table, const Schema& schema);

/// Random partition of 0..n-1 into a first part of round(fraction * n)
/// indices and the rest, each sorted ascending. Reproducible per seed.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_indices(std::size_t n, double fraction,
                                                                            std::uint64_t seed);

Dataset subset(const Dataset& ds, std::span<const std::size_t> indices);

std::pair<Dataset, Dataset> split(const Dataset& ds, double fraction, std::uint64_t seed);

DatasetSummary summarize(const Dataset& ds);
DatasetSummary summarize(BinarySpan labels, BinarySpan groups);

struct SynthesisOptions {
    std::size_t noise_features = 2;
};

/// Draws a dataset whose group sizes and per-group positive counts hit the
/// requested (alpha, pi0, d0) after rounding. Features:
///   x_label ~ N(2y - 1, 1)
///   x_group ~ N(0.8 (2s - 1) + 0.4 (2y - 1), 1)
///   noise_k ~ N(0, 1)
/// Throws InfeasibleError when p(+|w) = pi0 + (1 - alpha) d0 or
/// p(+|b) = pi0 - alpha d0 falls outside [0, 1].
Dataset synthesize(std::size_t n, double alpha, double pi0, double d0, std::uint64_t seed,
                   const SynthesisOptions& options = {});

/// Writes features, a `group` column (w/b) and a `label` column (1/0).
void write_csv(const Dataset& ds, std::ostream& out);

} // namespace fairtrade
