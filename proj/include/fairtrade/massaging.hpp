#pragma once

#include "fairtrade/classifiers.hpp"
#include "fairtrade/dataset.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

namespace fairtrade {

/// Relabeling that zeroes out training-set discrimination while keeping the
/// number of positive labels. `demote` rows go from + to -, `promote` rows
/// from - to +. Normally the demoted rows are favored positives and the
/// promoted rows protected negatives; when the protected group has the higher
/// positive rate the roles swap and `roles_swapped` is set.
struct MassagePlan {
    std::vector<std::size_t> demote;
    std::vector<std::size_t> promote;
    std::int64_t m = 0;
    bool roles_swapped = false;
};

/// m = round(nf * np * d0 / n), computed in integers as
/// round((P_w * np - P_b * nf) / n). Demotes the m lowest-scored favored
/// positives and promotes the m highest-scored protected negatives; equal
/// scores are taken in ascending row order. Throws InfeasibleError when a
/// side has fewer than m candidates.
MassagePlan plan_massage(const Dataset& train, const ScoreVector& scores);

/// Copy of `train` with the planned labels changed. Features and groups are
/// untouched.
Dataset apply_massage(const Dataset& train, const MassagePlan& plan);

/// Two-column audit file: `demote promote` row indices, one pair per line.
void write_plan(const MassagePlan& plan, std::ostream& out);
MassagePlan read_plan(std::istream& in);

} // namespace fairtrade
