#pragma once

#include "fairtrade/metrics.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fairtrade {

/// How an oracle that knows the true labels removes discrimination.
enum class OracleStrategy {
    decrease_favored,      ///< reject favored true positives
    increase_protected,    ///< accept protected true negatives
    change_both_fixed_pi,  ///< both, in equal numbers, keeping the acceptance count
};

std::string_view to_string(OracleStrategy strategy);
/// Accepts the enumerator names. Throws UsageError otherwise.
OracleStrategy parse_strategy(std::string_view name);

struct OracleRequest {
    OracleStrategy strategy = OracleStrategy::decrease_favored;
    double target_d = 0.0;
};

struct FrontierPoint {
    double target_d = 0.0;
    bool reachable = false;
    double d = 0.0;
    double pi = 0.0;
    double accuracy = 0.0;
    double kappa = 0.0;
    double delta = 0.0;
    std::int64_t flips = 0;
};

/// i.i.d. Bernoulli(pi) decisions.
BinaryVector random_predict(std::size_t n, double pi, std::uint64_t seed);

/// Expected metrics of the random classifier: A = R, kappa = 0, d = delta = 0.
MetricBundle random_expected_metrics(double pi0, double pi, double alpha);

/// Number of decisions (or, for change_both_fixed_pi, decision pairs) the
/// oracle changes to move from d0 to the target, rounded half-up.
std::int64_t oracle_flip_count(const GroupedTally& data, const OracleRequest& request);

/// Starts from decisions = labels and flips the computed number of favored
/// true positives and/or protected true negatives, lowest row index first.
/// Throws InfeasibleError naming the binding count when the target is out of
/// reach.
BinaryVector oracle_predict(BinarySpan labels, BinarySpan groups, const OracleRequest& request);

/// One point per grid value; unreachable values are returned with
/// reachable = false. Grid points are evaluated concurrently.
std::vector<FrontierPoint> oracle_frontier(BinarySpan labels, BinarySpan groups, OracleStrategy strategy,
                                           std::span<const double> d_grid);

/// `count` evenly spaced targets from d0 down to 0 inclusive.
std::vector<double> descending_grid(double d0, std::size_t count);

/// Least-squares slope of ys against xs.
double fit_slope(std::span<const double> xs, std::span<const double> ys);

struct BruteForceConstraint {
    std::optional<double> max_d;
    std::optional<double> max_delta;
    std::optional<std::int64_t> accepted;  ///< fixes pi = accepted / n
};

struct BruteForceResult {
    BinaryVector decisions;
    MetricBundle metrics;
};

inline constexpr std::size_t kBruteForceMaxRows = 16;

/// Most accurate decision vector under the constraint, by enumerating all
/// 2^n vectors; ties go to the lexicographically smallest vector. Throws
/// DataError for n > 16 and InfeasibleError when nothing satisfies the
/// constraint.
BruteForceResult brute_force_best(BinarySpan labels, BinarySpan groups, const BruteForceConstraint& constraint);

} // namespace fairtrade
