// Plain-loop reference versions of the kernels. Kept deliberately naive:
// the tests compare the OpenMP kernels against these.

#include "fairtrade/kernels.hpp"

#include "kernel_math.hpp"

#include <cmath>

namespace fairtrade::kernels {

using detail::sigmoid;
using detail::softplus;

bool satisfies(const GroupedTally& t, const SearchConstraint& constraint)
{
    constexpr double slack = 1e-12;
    if (constraint.has_accepted && t.accepted() != constraint.accepted) {
        return false;
    }
    if (constraint.has_max_d && discrimination(t) > constraint.max_d + slack) {
        return false;
    }
    if (constraint.has_max_delta && normalized_discrimination(t) > constraint.max_delta + slack) {
        return false;
    }
    return true;
}

namespace serial {

GroupedTally tally(BinarySpan labels, BinarySpan decisions, BinarySpan groups)
{
    GroupedTally t;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const bool y = labels[i] != 0;
        const bool yhat = decisions[i] != 0;
        if (groups[i] != 0) {
            ++t.n_favored;
            t.accepted_favored += yhat ? 1 : 0;
        } else {
            ++t.n_protected;
            t.accepted_protected += yhat ? 1 : 0;
        }
        t.correct += (y == yhat) ? 1 : 0;
        t.positives_true += y ? 1 : 0;
    }
    return t;
}

LogisticObjective logistic_objective(const MatrixView& x, BinarySpan labels, std::span<const double> weights,
                                     double bias, double l2)
{
    LogisticObjective out;
    out.grad_weights.assign(x.cols, 0.0);
    double loss = 0.0;
    for (std::size_t i = 0; i < x.rows; ++i) {
        const auto row = x.row(i);
        double z = bias;
        for (std::size_t j = 0; j < x.cols; ++j) {
            z += weights[j] * row[j];
        }
        const double y = labels[i] != 0 ? 1.0 : 0.0;
        loss += softplus(z) - y * z;
        const double residual = sigmoid(z) - y;
        for (std::size_t j = 0; j < x.cols; ++j) {
            out.grad_weights[j] += residual * row[j];
        }
        out.grad_bias += residual;
    }
    const double inv_n = 1.0 / static_cast<double>(x.rows);
    double penalty = 0.0;
    for (std::size_t j = 0; j < x.cols; ++j) {
        out.grad_weights[j] = out.grad_weights[j] * inv_n + l2 * weights[j];
        penalty += weights[j] * weights[j];
    }
    out.grad_bias *= inv_n;
    out.loss = loss * inv_n + 0.5 * l2 * penalty;
    return out;
}

void logistic_scores(const MatrixView& x, std::span<const double> weights, double bias, std::span<double> out)
{
    for (std::size_t i = 0; i < x.rows; ++i) {
        const auto row = x.row(i);
        double z = bias;
        for (std::size_t j = 0; j < x.cols; ++j) {
            z += weights[j] * row[j];
        }
        out[i] = sigmoid(z);
    }
}

void naive_bayes_scores(const MatrixView& x, const GaussianTerms& terms, std::span<double> out)
{
    for (std::size_t i = 0; i < x.rows; ++i) {
        const auto row = x.row(i);
        double joint[2];
        for (int c = 0; c < 2; ++c) {
            double lp = terms.log_prior[c];
            for (std::size_t j = 0; j < x.cols; ++j) {
                const double var = terms.variance[c][j];
                const double diff = row[j] - terms.mean[c][j];
                lp -= 0.5 * (detail::kLogTwoPi + std::log(var) + diff * diff / var);
            }
            joint[c] = lp;
        }
        const double top = joint[0] > joint[1] ? joint[0] : joint[1];
        const double e0 = std::exp(joint[0] - top);
        const double e1 = std::exp(joint[1] - top);
        out[i] = e1 / (e0 + e1);
    }
}

std::vector<GroupedTally> threshold_tallies(std::span<const double> scores, BinarySpan labels, BinarySpan groups,
                                            std::span<const double> thresholds)
{
    std::vector<GroupedTally> out;
    out.reserve(thresholds.size());
    BinaryVector decisions(scores.size());
    for (const double threshold : thresholds) {
        for (std::size_t i = 0; i < scores.size(); ++i) {
            decisions[i] = scores[i] > threshold ? 1 : 0;
        }
        out.push_back(tally(labels, decisions, groups));
    }
    return out;
}

SearchResult exhaustive_search(BinarySpan labels, BinarySpan groups, const SearchConstraint& constraint)
{
    const std::size_t n = labels.size();
    SearchResult best;
    BinaryVector decisions(n);
    const std::uint64_t count = std::uint64_t{1} << n;
    for (std::uint64_t mask = 0; mask < count; ++mask) {
        for (std::size_t i = 0; i < n; ++i) {
            decisions[i] = static_cast<std::uint8_t>((mask >> (n - 1 - i)) & 1U);
        }
        const GroupedTally t = tally(labels, decisions, groups);
        if (!satisfies(t, constraint)) {
            continue;
        }
        if (!best.found || t.correct > best.correct) {
            best.found = true;
            best.correct = t.correct;
            best.mask = static_cast<std::uint32_t>(mask);
        }
    }
    return best;
}

} // namespace serial
} // namespace fairtrade::kernels
