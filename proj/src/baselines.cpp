#include "fairtrade/baselines.hpp"

#include "fairtrade/error.hpp"
#include "fairtrade/kernels.hpp"
#include "random.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace fairtrade {

namespace {

struct GroupCounts {
    std::int64_t favored_positive = 0;
    std::int64_t protected_negative = 0;
};

GroupCounts group_counts(BinarySpan labels, BinarySpan groups)
{
    GroupCounts c;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (groups[i] != 0 && labels[i] != 0) {
            ++c.favored_positive;
        } else if (groups[i] == 0 && labels[i] == 0) {
            ++c.protected_negative;
        }
    }
    return c;
}

/// Flips the first `count` rows matching (group, label) from decision
/// `label` to its opposite.
void flip_first(BinaryVector& decisions, BinarySpan labels, BinarySpan groups, std::uint8_t group,
                std::uint8_t label, std::int64_t count)
{
    for (std::size_t i = 0; i < labels.size() && count > 0; ++i) {
        if ((groups[i] != 0) == (group != 0) && (labels[i] != 0) == (label != 0)) {
            decisions[i] = label != 0 ? 0 : 1;
            --count;
        }
    }
}

} // namespace

std::string_view to_string(OracleStrategy strategy)
{
    switch (strategy) {
    case OracleStrategy::decrease_favored:
        return "decrease_favored";
    case OracleStrategy::increase_protected:
        return "increase_protected";
    case OracleStrategy::change_both_fixed_pi:
        return "change_both_fixed_pi";
    }
    return "unknown";
}

OracleStrategy parse_strategy(std::string_view name)
{
    for (const auto s : {OracleStrategy::decrease_favored, OracleStrategy::increase_protected,
                         OracleStrategy::change_both_fixed_pi}) {
        if (name == to_string(s)) {
            return s;
        }
    }
    throw UsageError("unknown oracle strategy '" + std::string(name)
                     + "' (expected decrease_favored, increase_protected or change_both_fixed_pi)");
}

BinaryVector random_predict(std::size_t n, double pi, std::uint64_t seed)
{
    if (!(pi >= 0.0 && pi <= 1.0)) {
        throw DataError("acceptance rate must lie in [0, 1]");
    }
    detail::Rng rng(seed);
    BinaryVector out(n);
    for (auto& d : out) {
        d = rng.uniform() < pi ? 1 : 0;
    }
    return out;
}

MetricBundle random_expected_metrics(double pi0, double pi, double alpha)
{
    MetricBundle m;
    m.pi = pi;
    m.random_accuracy = random_accuracy(pi0, pi);
    m.accuracy = m.random_accuracy;
    m.kappa = 0.0;
    m.d = 0.0;
    m.d_max = max_discrimination(pi, alpha);
    m.delta = 0.0;
    return m;
}

std::int64_t oracle_flip_count(const GroupedTally& data, const OracleRequest& request)
{
    const double d0 = discrimination(data);
    const double gap = d0 - request.target_d;
    double scale = 0.0;
    switch (request.strategy) {
    case OracleStrategy::decrease_favored:
        scale = static_cast<double>(data.n_favored);
        break;
    case OracleStrategy::increase_protected:
        scale = static_cast<double>(data.n_protected);
        break;
    case OracleStrategy::change_both_fixed_pi:
        // each pair lowers d by 1/nf + 1/np = n / (nf np)
        scale = static_cast<double>(data.n_favored) * static_cast<double>(data.n_protected)
                / static_cast<double>(data.total());
        break;
    }
    return detail::round_half_up(gap * scale);
}

BinaryVector oracle_predict(BinarySpan labels, BinarySpan groups, const OracleRequest& request)
{
    const GroupedTally data = tally(labels, labels, groups);
    const std::int64_t k = oracle_flip_count(data, request);
    if (k < 0) {
        throw InfeasibleError("target d*=" + std::to_string(request.target_d)
                              + " exceeds the discrimination in the data (d0=" + std::to_string(discrimination(data))
                              + ")");
    }
    const GroupCounts available = group_counts(labels, groups);
    const bool demote = request.strategy != OracleStrategy::increase_protected;
    const bool promote = request.strategy != OracleStrategy::decrease_favored;
    if (demote && k > available.favored_positive) {
        throw InfeasibleError("need " + std::to_string(k) + " favored true positives to reject, only "
                              + std::to_string(available.favored_positive) + " available");
    }
    if (promote && k > available.protected_negative) {
        throw InfeasibleError("need " + std::to_string(k) + " protected true negatives to accept, only "
                              + std::to_string(available.protected_negative) + " available");
    }

    BinaryVector decisions(labels.begin(), labels.end());
    if (demote) {
        flip_first(decisions, labels, groups, 1, 1, k);
    }
    if (promote) {
        flip_first(decisions, labels, groups, 0, 0, k);
    }
    return decisions;
}

std::vector<FrontierPoint> oracle_frontier(BinarySpan labels, BinarySpan groups, OracleStrategy strategy,
                                           std::span<const double> d_grid)
{
    if (d_grid.empty()) {
        throw UsageError("oracle frontier needs a non-empty d grid");
    }
    // validates lengths, groups and labels before entering the parallel region
    evaluate(labels, labels, groups);

    std::vector<FrontierPoint> out(d_grid.size());
    const auto count = static_cast<std::int64_t>(d_grid.size());
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t k = 0; k < count; ++k) {
        FrontierPoint& p = out[static_cast<std::size_t>(k)];
        p.target_d = d_grid[static_cast<std::size_t>(k)];
        try {
            const OracleRequest request{strategy, p.target_d};
            const BinaryVector decisions = oracle_predict(labels, groups, request);
            const GroupedTally t = tally(labels, decisions, groups);
            const MetricBundle m = evaluate(t);
            p.reachable = true;
            p.d = m.d;
            p.pi = m.pi;
            p.accuracy = m.accuracy;
            p.kappa = m.kappa;
            p.delta = m.delta;
            p.flips = t.total() - t.correct;
        } catch (const InfeasibleError&) {
            p.reachable = false;
        }
    }
    return out;
}

std::vector<double> descending_grid(double d0, std::size_t count)
{
    if (count == 0) {
        throw UsageError("grid size must be positive");
    }
    if (count == 1) {
        return {d0};
    }
    std::vector<double> grid(count);
    for (std::size_t k = 0; k < count; ++k) {
        grid[k] = d0 * static_cast<double>(count - 1 - k) / static_cast<double>(count - 1);
    }
    return grid;
}

double fit_slope(std::span<const double> xs, std::span<const double> ys)
{
    if (xs.size() != ys.size() || xs.size() < 2) {
        throw DataError("slope fit needs at least two paired points");
    }
    const auto n = static_cast<double>(xs.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    if (sxx == 0.0) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    return sxy / sxx;
}

BruteForceResult brute_force_best(BinarySpan labels, BinarySpan groups, const BruteForceConstraint& constraint)
{
    if (labels.size() > kBruteForceMaxRows) {
        throw DataError("exhaustive search is limited to " + std::to_string(kBruteForceMaxRows) + " rows, got "
                        + std::to_string(labels.size()));
    }
    const GroupedTally data = tally(labels, labels, groups);
    discrimination(data);

    kernels::SearchConstraint c;
    if (constraint.max_d) {
        c.has_max_d = true;
        c.max_d = *constraint.max_d;
    }
    if (constraint.max_delta) {
        c.has_max_delta = true;
        c.max_delta = *constraint.max_delta;
    }
    if (constraint.accepted) {
        c.has_accepted = true;
        c.accepted = *constraint.accepted;
    }
    const kernels::SearchResult found = kernels::exhaustive_search(labels, groups, c);
    if (!found.found) {
        throw InfeasibleError("no decision vector satisfies the constraint");
    }

    const std::size_t n = labels.size();
    BruteForceResult out;
    out.decisions.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.decisions[i] = static_cast<std::uint8_t>((found.mask >> (n - 1 - i)) & 1U);
    }
    out.metrics = evaluate(labels, out.decisions, groups);
    return out;
}

} // namespace fairtrade
