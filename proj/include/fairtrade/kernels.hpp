#pragma once

// Data-parallel inner loops. Every kernel has an OpenMP version in
// `fairtrade::kernels` and a plain-loop reference in
// `fairtrade::kernels::serial`; the tests hold the two against each other.
//
// The parallel reductions over floating point are blocked with a fixed block
// size and summed in block order, so their results do not depend on the
// number of threads.

#include "fairtrade/metrics.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace fairtrade {

/// Row-major view of an n x m feature matrix.
struct MatrixView {
    std::span<const double> values;
    std::size_t rows = 0;
    std::size_t cols = 0;

    [[nodiscard]] std::span<const double> row(std::size_t i) const { return values.subspan(i * cols, cols); }
};

namespace kernels {

/// Rows per partial sum in blocked reductions.
inline constexpr std::size_t kBlockRows = 512;

struct LogisticObjective {
    double loss = 0.0;                 ///< mean log-loss + (l2 / 2) |w|^2
    std::vector<double> grad_weights;
    double grad_bias = 0.0;
};

/// Per-row sufficient statistics of a Gaussian naive Bayes model in log space.
struct GaussianTerms {
    std::span<const double> mean[2];
    std::span<const double> variance[2];
    double log_prior[2] = {0.0, 0.0};
};

/// Index of the best decision vector found by exhaustive search. Bit
/// (n - 1 - i) of `mask` is the decision for row i, so smaller masks are
/// lexicographically smaller decision vectors.
struct SearchResult {
    bool found = false;
    std::uint32_t mask = 0;
    std::int64_t correct = 0;
};

/// Acceptance constraints for exhaustive search, evaluated on the tally.
struct SearchConstraint {
    bool has_max_d = false;
    double max_d = 0.0;
    bool has_max_delta = false;
    double max_delta = 0.0;
    bool has_accepted = false;
    std::int64_t accepted = 0;
};

GroupedTally tally(BinarySpan labels, BinarySpan decisions, BinarySpan groups);
LogisticObjective logistic_objective(const MatrixView& x, BinarySpan labels, std::span<const double> weights,
                                     double bias, double l2);
void logistic_scores(const MatrixView& x, std::span<const double> weights, double bias, std::span<double> out);
void naive_bayes_scores(const MatrixView& x, const GaussianTerms& terms, std::span<double> out);
/// One tally per threshold: decision = score > threshold.
std::vector<GroupedTally> threshold_tallies(std::span<const double> scores, BinarySpan labels, BinarySpan groups,
                                            std::span<const double> thresholds);
SearchResult exhaustive_search(BinarySpan labels, BinarySpan groups, const SearchConstraint& constraint);

namespace serial {

GroupedTally tally(BinarySpan labels, BinarySpan decisions, BinarySpan groups);
LogisticObjective logistic_objective(const MatrixView& x, BinarySpan labels, std::span<const double> weights,
                                     double bias, double l2);
void logistic_scores(const MatrixView& x, std::span<const double> weights, double bias, std::span<double> out);
void naive_bayes_scores(const MatrixView& x, const GaussianTerms& terms, std::span<double> out);
std::vector<GroupedTally> threshold_tallies(std::span<const double> scores, BinarySpan labels, BinarySpan groups,
                                            std::span<const double> thresholds);
SearchResult exhaustive_search(BinarySpan labels, BinarySpan groups, const SearchConstraint& constraint);

} // namespace serial

/// Whether a tally satisfies a search constraint. Shared by both search
/// kernels.
bool satisfies(const GroupedTally& t, const SearchConstraint& constraint);

} // namespace kernels
} // namespace fairtrade
