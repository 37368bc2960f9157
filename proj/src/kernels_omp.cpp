#include "fairtrade/kernels.hpp"

#include "kernel_math.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>

namespace fairtrade::kernels {

namespace {

std::size_t block_count(std::size_t rows)
{
    return (rows + kBlockRows - 1) / kBlockRows;
}

/// Tally of decision vector `mask` from precomputed bit masks.
GroupedTally mask_tally(std::uint32_t mask, std::uint32_t favored, std::uint32_t positives, std::uint32_t everyone,
                        std::int64_t n_favored, std::int64_t n_protected, std::int64_t n_positive)
{
    GroupedTally t;
    t.n_favored = n_favored;
    t.n_protected = n_protected;
    t.accepted_favored = std::popcount(mask & favored);
    t.accepted_protected = std::popcount(mask & ~favored & everyone);
    t.correct = std::popcount(~(mask ^ positives) & everyone);
    t.positives_true = n_positive;
    return t;
}

bool better(const SearchResult& a, const SearchResult& b)
{
    if (!a.found) {
        return false;
    }
    if (!b.found) {
        return true;
    }
    return a.correct > b.correct || (a.correct == b.correct && a.mask < b.mask);
}

} // namespace

GroupedTally tally(BinarySpan labels, BinarySpan decisions, BinarySpan groups)
{
    const auto n = static_cast<std::int64_t>(labels.size());
    std::int64_t n_favored = 0;
    std::int64_t accepted_favored = 0;
    std::int64_t accepted_protected = 0;
    std::int64_t correct = 0;
    std::int64_t positives = 0;

#pragma omp parallel for schedule(static) if (n > 65536) \
    reduction(+ : n_favored, accepted_favored, accepted_protected, correct, positives)
    for (std::int64_t i = 0; i < n; ++i) {
        const bool y = labels[i] != 0;
        const bool yhat = decisions[i] != 0;
        const bool favored = groups[i] != 0;
        n_favored += favored ? 1 : 0;
        accepted_favored += (favored && yhat) ? 1 : 0;
        accepted_protected += (!favored && yhat) ? 1 : 0;
        correct += (y == yhat) ? 1 : 0;
        positives += y ? 1 : 0;
    }

    GroupedTally t;
    t.n_favored = n_favored;
    t.n_protected = n - n_favored;
    t.accepted_favored = accepted_favored;
    t.accepted_protected = accepted_protected;
    t.correct = correct;
    t.positives_true = positives;
    return t;
}

LogisticObjective logistic_objective(const MatrixView& x, BinarySpan labels, std::span<const double> weights,
                                     double bias, double l2)
{
    const std::size_t m = x.cols;
    const std::size_t blocks = block_count(x.rows);
    // per block: m weight partials, then bias partial, then loss partial
    const std::size_t stride = m + 2;
    std::vector<double> partial(blocks * stride, 0.0);

#pragma omp parallel for schedule(static)
    for (std::int64_t b = 0; b < static_cast<std::int64_t>(blocks); ++b) {
        double* acc = partial.data() + static_cast<std::size_t>(b) * stride;
        const std::size_t begin = static_cast<std::size_t>(b) * kBlockRows;
        const std::size_t end = std::min(begin + kBlockRows, x.rows);
        for (std::size_t i = begin; i < end; ++i) {
            const auto row = x.row(i);
            double z = bias;
            for (std::size_t j = 0; j < m; ++j) {
                z += weights[j] * row[j];
            }
            const double y = labels[i] != 0 ? 1.0 : 0.0;
            const double residual = detail::sigmoid(z) - y;
            for (std::size_t j = 0; j < m; ++j) {
                acc[j] += residual * row[j];
            }
            acc[m] += residual;
            acc[m + 1] += detail::softplus(z) - y * z;
        }
    }

    LogisticObjective out;
    out.grad_weights.assign(m, 0.0);
    double loss = 0.0;
    for (std::size_t b = 0; b < blocks; ++b) {
        const double* acc = partial.data() + b * stride;
        for (std::size_t j = 0; j < m; ++j) {
            out.grad_weights[j] += acc[j];
        }
        out.grad_bias += acc[m];
        loss += acc[m + 1];
    }

    const double inv_n = 1.0 / static_cast<double>(x.rows);
    double penalty = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        out.grad_weights[j] = out.grad_weights[j] * inv_n + l2 * weights[j];
        penalty += weights[j] * weights[j];
    }
    out.grad_bias *= inv_n;
    out.loss = loss * inv_n + 0.5 * l2 * penalty;
    return out;
}

void logistic_scores(const MatrixView& x, std::span<const double> weights, double bias, std::span<double> out)
{
    const auto rows = static_cast<std::int64_t>(x.rows);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < rows; ++i) {
        const auto row = x.row(static_cast<std::size_t>(i));
        double z = bias;
        for (std::size_t j = 0; j < x.cols; ++j) {
            z += weights[j] * row[j];
        }
        out[static_cast<std::size_t>(i)] = detail::sigmoid(z);
    }
}

void naive_bayes_scores(const MatrixView& x, const GaussianTerms& terms, std::span<double> out)
{
    // The log-normalizer of each class does not depend on the row.
    double normalizer[2] = {terms.log_prior[0], terms.log_prior[1]};
    for (int c = 0; c < 2; ++c) {
        for (std::size_t j = 0; j < x.cols; ++j) {
            normalizer[c] -= 0.5 * (detail::kLogTwoPi + std::log(terms.variance[c][j]));
        }
    }

    const auto rows = static_cast<std::int64_t>(x.rows);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < rows; ++i) {
        const auto row = x.row(static_cast<std::size_t>(i));
        double joint[2];
        for (int c = 0; c < 2; ++c) {
            double quad = 0.0;
            for (std::size_t j = 0; j < x.cols; ++j) {
                const double diff = row[j] - terms.mean[c][j];
                quad += diff * diff / terms.variance[c][j];
            }
            joint[c] = normalizer[c] - 0.5 * quad;
        }
        const double top = std::max(joint[0], joint[1]);
        const double e0 = std::exp(joint[0] - top);
        const double e1 = std::exp(joint[1] - top);
        out[static_cast<std::size_t>(i)] = e1 / (e0 + e1);
    }
}

std::vector<GroupedTally> threshold_tallies(std::span<const double> scores, BinarySpan labels, BinarySpan groups,
                                            std::span<const double> thresholds)
{
    std::vector<GroupedTally> out(thresholds.size());
    const auto count = static_cast<std::int64_t>(thresholds.size());
    const std::size_t n = scores.size();

#pragma omp parallel for schedule(dynamic, 8)
    for (std::int64_t k = 0; k < count; ++k) {
        const double threshold = thresholds[static_cast<std::size_t>(k)];
        GroupedTally t;
        for (std::size_t i = 0; i < n; ++i) {
            const bool y = labels[i] != 0;
            const bool yhat = scores[i] > threshold;
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
        out[static_cast<std::size_t>(k)] = t;
    }
    return out;
}

SearchResult exhaustive_search(BinarySpan labels, BinarySpan groups, const SearchConstraint& constraint)
{
    const std::size_t n = labels.size();
    std::uint32_t favored = 0;
    std::uint32_t positives = 0;
    std::int64_t n_favored = 0;
    std::int64_t n_positive = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint32_t bit = std::uint32_t{1} << (n - 1 - i);
        if (groups[i] != 0) {
            favored |= bit;
            ++n_favored;
        }
        if (labels[i] != 0) {
            positives |= bit;
            ++n_positive;
        }
    }
    const std::uint32_t everyone = n == 32 ? ~std::uint32_t{0} : (std::uint32_t{1} << n) - 1;
    const auto n_protected = static_cast<std::int64_t>(n) - n_favored;
    const auto count = static_cast<std::int64_t>(std::uint64_t{1} << n);

    SearchResult best;
#pragma omp parallel
    {
        SearchResult local;
#pragma omp for schedule(static) nowait
        for (std::int64_t k = 0; k < count; ++k) {
            const auto mask = static_cast<std::uint32_t>(k);
            const GroupedTally t = mask_tally(mask, favored, positives, everyone, n_favored, n_protected, n_positive);
            if (local.found && t.correct <= local.correct) {
                continue;
            }
            if (satisfies(t, constraint)) {
                local = SearchResult{true, mask, t.correct};
            }
        }
#pragma omp critical(fairtrade_exhaustive_search)
        {
            if (better(local, best)) {
                best = local;
            }
        }
    }
    return best;
}

} // namespace fairtrade::kernels
