#include "fairtrade/metrics.hpp"

#include "fairtrade/error.hpp"
#include "fairtrade/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fairtrade {

namespace {

void require_nonempty(const GroupedTally& t)
{
    if (t.total() < 1) {
        throw DataError("empty tally");
    }
}

void require_both_groups(const GroupedTally& t)
{
    if (t.n_favored < 1 || t.n_protected < 1) {
        throw DegenerateGroupError("both groups must be non-empty (favored=" + std::to_string(t.n_favored)
                                   + ", protected=" + std::to_string(t.n_protected) + ")");
    }
}

void require_unit_interval(double value, const char* what)
{
    if (!(value >= 0.0 && value <= 1.0)) {
        throw DataError(std::string(what) + " must lie in [0, 1], got " + std::to_string(value));
    }
}

} // namespace

double GroupedTally::pi() const
{
    require_nonempty(*this);
    return static_cast<double>(accepted()) / static_cast<double>(total());
}

double GroupedTally::pi0() const
{
    require_nonempty(*this);
    return static_cast<double>(positives_true) / static_cast<double>(total());
}

double GroupedTally::alpha() const
{
    require_nonempty(*this);
    return static_cast<double>(n_favored) / static_cast<double>(total());
}

GroupedTally tally(BinarySpan labels, BinarySpan decisions, BinarySpan groups)
{
    if (labels.size() != decisions.size() || labels.size() != groups.size()) {
        throw DataError("tally: length mismatch (labels=" + std::to_string(labels.size()) + ", decisions="
                        + std::to_string(decisions.size()) + ", groups=" + std::to_string(groups.size()) + ")");
    }
    if (labels.empty()) {
        throw DataError("tally: empty input");
    }
    return kernels::tally(labels, decisions, groups);
}

double discrimination(const GroupedTally& t)
{
    require_both_groups(t);
    const auto numerator = t.accepted_favored * t.n_protected - t.accepted_protected * t.n_favored;
    return static_cast<double>(numerator) / static_cast<double>(t.n_favored * t.n_protected);
}

double max_discrimination(double pi, double alpha)
{
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw DegenerateGroupError("favored share must lie strictly inside (0, 1), got " + std::to_string(alpha));
    }
    require_unit_interval(pi, "acceptance rate");
    return std::min(pi / alpha, (1.0 - pi) / (1.0 - alpha));
}

double normalized_discrimination(double d, double d_max)
{
    if (!(d_max >= 0.0)) {
        throw DataError("maximum discrimination must be non-negative, got " + std::to_string(d_max));
    }
    if (d_max == 0.0) {
        return 0.0;
    }
    return d / d_max;
}

double max_discrimination(const GroupedTally& t)
{
    require_both_groups(t);
    const std::int64_t n = t.total();
    const std::int64_t a = t.accepted();
    if (a * t.n_protected <= (n - a) * t.n_favored) {
        return static_cast<double>(a) / static_cast<double>(t.n_favored);
    }
    return static_cast<double>(n - a) / static_cast<double>(t.n_protected);
}

double normalized_discrimination(const GroupedTally& t)
{
    require_both_groups(t);
    const std::int64_t n = t.total();
    const std::int64_t a = t.accepted();
    const std::int64_t nf = t.n_favored;
    const std::int64_t np = t.n_protected;
    if (a == 0 || a == n) {
        return 0.0;
    }
    // d / d_max with the nf * np denominators cancelled
    const std::int64_t gap = t.accepted_favored * np - t.accepted_protected * nf;
    if (a * np <= (n - a) * nf) {
        return static_cast<double>(gap) / static_cast<double>(np * a);
    }
    return static_cast<double>(gap) / static_cast<double>(nf * (n - a));
}

double accuracy(const GroupedTally& t)
{
    require_nonempty(t);
    return static_cast<double>(t.correct) / static_cast<double>(t.total());
}

double random_accuracy(double pi0, double pi)
{
    require_unit_interval(pi0, "label positive rate");
    require_unit_interval(pi, "acceptance rate");
    return pi0 * pi + (1.0 - pi0) * (1.0 - pi);
}

double cohens_kappa(double accuracy, double random_accuracy)
{
    require_unit_interval(accuracy, "accuracy");
    require_unit_interval(random_accuracy, "random accuracy");
    if (random_accuracy >= 1.0) {
        throw DegenerateLabelsError("kappa is undefined when random accuracy is 1 (single-class labels)");
    }
    return (accuracy - random_accuracy) / (1.0 - random_accuracy);
}

MetricBundle evaluate(const GroupedTally& t)
{
    require_nonempty(t);
    require_both_groups(t);

    const std::int64_t n = t.total();
    const std::int64_t a = t.accepted();
    const std::int64_t p = t.positives_true;
    const std::int64_t c = t.correct;

    // R and kappa are ratios of integers scaled by n^2; forming the numerators
    // exactly makes kappa exactly 0 at both ends of a sweep.
    const std::int64_t random_hits = p * a + (n - p) * (n - a);
    const std::int64_t n_sq = n * n;
    if (random_hits == n_sq) {
        throw DegenerateLabelsError("kappa is undefined when random accuracy is 1 (single-class labels)");
    }

    MetricBundle m;
    m.pi = static_cast<double>(a) / static_cast<double>(n);
    m.accuracy = static_cast<double>(c) / static_cast<double>(n);
    m.random_accuracy = static_cast<double>(random_hits) / static_cast<double>(n_sq);
    m.kappa = static_cast<double>(c * n - random_hits) / static_cast<double>(n_sq - random_hits);

    m.d = discrimination(t);
    m.d_max = max_discrimination(t);
    m.delta = normalized_discrimination(t);
    return m;
}

MetricBundle evaluate(BinarySpan labels, BinarySpan decisions, BinarySpan groups)
{
    return evaluate(tally(labels, decisions, groups));
}

} // namespace fairtrade
