#include "fairtrade/massaging.hpp"

#include "fairtrade/error.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

namespace fairtrade {

namespace {

std::vector<std::size_t> rows_where(const Dataset& ds, std::uint8_t group, std::uint8_t label)
{
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        if ((ds.groups[i] != 0) == (group != 0) && (ds.labels[i] != 0) == (label != 0)) {
            rows.push_back(i);
        }
    }
    return rows;
}

} // namespace

MassagePlan plan_massage(const Dataset& train, const ScoreVector& scores)
{
    if (scores.size() != train.size()) {
        throw DataError("massage: " + std::to_string(scores.size()) + " scores for " + std::to_string(train.size())
                        + " training rows");
    }
    const GroupedTally t = tally(train.labels, train.labels, train.groups);
    discrimination(t);

    const std::int64_t n = t.total();
    // d0 * nf * np, exact
    std::int64_t gap = t.accepted_favored * t.n_protected - t.accepted_protected * t.n_favored;

    MassagePlan plan;
    std::uint8_t high = 1;  // group whose positives get demoted
    if (gap < 0) {
        plan.roles_swapped = true;
        high = 0;
        gap = -gap;
    }
    // round half-up of gap / n
    plan.m = (2 * gap + n) / (2 * n);
    if (plan.m == 0) {
        return plan;
    }

    auto demote_pool = rows_where(train, high, 1);
    auto promote_pool = rows_where(train, high ^ 1U, 0);
    if (static_cast<std::int64_t>(demote_pool.size()) < plan.m
        || static_cast<std::int64_t>(promote_pool.size()) < plan.m) {
        throw InfeasibleError("massage needs " + std::to_string(plan.m) + " relabelings per side; "
                              + std::to_string(demote_pool.size()) + " candidates to demote, "
                              + std::to_string(promote_pool.size()) + " to promote");
    }

    const auto s = scores.values();
    // pools are already in ascending row order, so stable sorts keep that
    // order among equal scores
    std::stable_sort(demote_pool.begin(), demote_pool.end(),
                     [&](std::size_t a, std::size_t b) { return s[a] < s[b]; });
    std::stable_sort(promote_pool.begin(), promote_pool.end(),
                     [&](std::size_t a, std::size_t b) { return s[a] > s[b]; });
    plan.demote.assign(demote_pool.begin(), demote_pool.begin() + plan.m);
    plan.promote.assign(promote_pool.begin(), promote_pool.begin() + plan.m);
    return plan;
}

Dataset apply_massage(const Dataset& train, const MassagePlan& plan)
{
    if (plan.demote.size() != plan.promote.size()) {
        throw DataError("massage plan has unequal demote/promote lists");
    }
    Dataset out = train;
    for (const auto i : plan.demote) {
        if (i >= out.size()) {
            throw DataError("massage plan row " + std::to_string(i) + " out of range");
        }
        if (out.labels[i] == 0) {
            throw DataError("massage plan demotes row " + std::to_string(i) + " which is not positive");
        }
        out.labels[i] = 0;
    }
    for (const auto i : plan.promote) {
        if (i >= out.size()) {
            throw DataError("massage plan row " + std::to_string(i) + " out of range");
        }
        if (out.labels[i] != 0) {
            throw DataError("massage plan promotes row " + std::to_string(i) + " which is not negative");
        }
        out.labels[i] = 1;
    }
    return out;
}

void write_plan(const MassagePlan& plan, std::ostream& out)
{
    out << "demote promote\n";
    for (std::size_t k = 0; k < plan.demote.size(); ++k) {
        out << plan.demote[k] << ' ' << plan.promote[k] << '\n';
    }
}

MassagePlan read_plan(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line) || line != "demote promote") {
        throw DataError("massage plan: missing 'demote promote' header");
    }
    MassagePlan plan;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::istringstream row(line);
        std::size_t demote = 0;
        std::size_t promote = 0;
        if (!(row >> demote >> promote)) {
            throw DataError("massage plan: malformed line '" + line + "'");
        }
        plan.demote.push_back(demote);
        plan.promote.push_back(promote);
    }
    plan.m = static_cast<std::int64_t>(plan.demote.size());
    return plan;
}

} // namespace fairtrade
