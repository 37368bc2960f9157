#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace fairtrade {

/// Binary vectors (labels, decisions, group membership) are stored one byte
/// per individual. Labels: 1 = accept (+). Groups: 1 = favored (w), 0 =
/// protected (b).
using BinaryVector = std::vector<std::uint8_t>;
using BinarySpan = std::span<const std::uint8_t>;

/// Counts split by group; every metric in this module is a function of one
/// tally.
struct GroupedTally {
    std::int64_t n_favored = 0;
    std::int64_t n_protected = 0;
    std::int64_t accepted_favored = 0;
    std::int64_t accepted_protected = 0;
    std::int64_t correct = 0;
    std::int64_t positives_true = 0;

    [[nodiscard]] std::int64_t total() const noexcept { return n_favored + n_protected; }
    [[nodiscard]] std::int64_t accepted() const noexcept { return accepted_favored + accepted_protected; }

    /// Acceptance rate of the decisions.
    [[nodiscard]] double pi() const;
    /// Positive rate of the true labels.
    [[nodiscard]] double pi0() const;
    /// Share of the favored group.
    [[nodiscard]] double alpha() const;

    bool operator==(const GroupedTally&) const = default;
};

struct MetricBundle {
    double pi = 0.0;
    double accuracy = 0.0;
    double random_accuracy = 0.0;
    double kappa = 0.0;
    double d = 0.0;
    double d_max = 0.0;
    double delta = 0.0;

    bool operator==(const MetricBundle&) const = default;
};

/// Counts decisions against labels per group. Throws DataError on a length
/// mismatch or empty input.
GroupedTally tally(BinarySpan labels, BinarySpan decisions, BinarySpan groups);

/// d = p(+|w) - p(+|b). Throws DegenerateGroupError when a group is empty.
double discrimination(const GroupedTally& t);

/// Largest |d| reachable at acceptance rate `pi` when a share `alpha` of the
/// population is favored: everybody favored is accepted before anybody
/// protected.
double max_discrimination(double pi, double alpha);

/// d_max at the tally's own acceptance rate and favored share, formed
/// exactly as min(accepted / n_favored, rejected / n_protected).
double max_discrimination(const GroupedTally& t);

/// delta = d / d_max, with delta = 0 when d_max = 0 (nobody or everybody
/// accepted).
double normalized_discrimination(double d, double d_max);

/// delta of a tally from integer numerators; 0 when nobody or everybody is
/// accepted.
double normalized_discrimination(const GroupedTally& t);

double accuracy(const GroupedTally& t);

/// Accuracy of a classifier that accepts at random with probability `pi`
/// on data whose positive rate is `pi0`.
double random_accuracy(double pi0, double pi);

/// Cohen's kappa, (A - R) / (1 - R). Throws DegenerateLabelsError when R = 1.
double cohens_kappa(double accuracy, double random_accuracy);

/// Full bundle from one tally. Rates are formed from exact integer
/// numerators, so e.g. kappa is exactly 0 for the all-reject and
/// all-accept decision vectors.
MetricBundle evaluate(const GroupedTally& t);

MetricBundle evaluate(BinarySpan labels, BinarySpan decisions, BinarySpan groups);

} // namespace fairtrade
