#include "fairtrade/error.hpp"
#include "fairtrade/metrics.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace fairtrade;

TEST(Tally, CountsTwoRows)
{
    const BinaryVector labels{1, 0};
    const BinaryVector decisions{1, 0};
    const BinaryVector groups{1, 0};
    const GroupedTally t = tally(labels, decisions, groups);
    EXPECT_EQ(t, (GroupedTally{1, 1, 1, 0, 2, 1}));
}

TEST(Tally, AllReject)
{
    const BinaryVector labels{1, 1, 0, 0};
    const BinaryVector decisions{0, 0, 0, 0};
    const BinaryVector groups{1, 1, 0, 0};
    const GroupedTally t = tally(labels, decisions, groups);
    EXPECT_EQ(t.correct, 2);
    EXPECT_EQ(t.accepted_favored, 0);
    EXPECT_EQ(t.accepted_protected, 0);
}

TEST(Tally, MatchesLoopRecount)
{
    std::mt19937_64 gen(7);
    std::bernoulli_distribution coin(0.5);
    for (int trial = 0; trial < 50; ++trial) {
        BinaryVector labels(20), decisions(20), groups(20);
        for (int i = 0; i < 20; ++i) {
            labels[i] = coin(gen);
            decisions[i] = coin(gen);
            groups[i] = coin(gen);
        }
        GroupedTally expect;
        for (int i = 0; i < 20; ++i) {
            if (groups[i]) {
                ++expect.n_favored;
                expect.accepted_favored += decisions[i];
            } else {
                ++expect.n_protected;
                expect.accepted_protected += decisions[i];
            }
            expect.correct += labels[i] == decisions[i] ? 1 : 0;
            expect.positives_true += labels[i];
        }
        EXPECT_EQ(tally(labels, decisions, groups), expect);
    }
}

TEST(Tally, RejectsBadInput)
{
    const BinaryVector a{1, 0};
    const BinaryVector b{1};
    EXPECT_THROW(tally(a, b, a), DataError);
    EXPECT_THROW(tally({}, {}, {}), DataError);
}

TEST(Discrimination, Examples)
{
    EXPECT_DOUBLE_EQ(discrimination(GroupedTally{4, 6, 4, 6, 10, 10}), 0.0);
    EXPECT_DOUBLE_EQ(discrimination(GroupedTally{4, 6, 4, 0, 4, 4}), 1.0);
    // acceptance rates 0.3124 and 0.1135
    EXPECT_NEAR(discrimination(GroupedTally{10000, 10000, 3124, 1135, 0, 4259}), 0.1989, 1e-12);
}

TEST(Discrimination, EmptyGroupThrows)
{
    EXPECT_THROW(discrimination(GroupedTally{3, 0, 1, 0, 3, 1}), DegenerateGroupError);
    EXPECT_THROW(discrimination(GroupedTally{0, 3, 0, 1, 3, 1}), DegenerateGroupError);
}

TEST(Discrimination, IncreasesWithFavoredAcceptance)
{
    GroupedTally t{10, 10, 0, 5, 0, 0};
    double prev = discrimination(t);
    for (int k = 1; k <= 10; ++k) {
        t.accepted_favored = k;
        const double d = discrimination(t);
        EXPECT_GT(d, prev);
        prev = d;
    }
}

TEST(MaxDiscrimination, Examples)
{
    EXPECT_DOUBLE_EQ(max_discrimination(0.5, 0.5), 1.0);
    EXPECT_DOUBLE_EQ(max_discrimination(0.0, 0.3), 0.0);
    EXPECT_DOUBLE_EQ(max_discrimination(1.0, 0.3), 0.0);
    EXPECT_NEAR(max_discrimination(0.247, 0.675), 0.247 / 0.675, 1e-15);
    EXPECT_NEAR(max_discrimination(0.247, 0.675), 0.3659, 5e-5);
    EXPECT_THROW(max_discrimination(0.5, 0.0), DegenerateGroupError);
    EXPECT_THROW(max_discrimination(0.5, 1.0), DegenerateGroupError);
}

TEST(MaxDiscrimination, TallyFormAgreesWithRates)
{
    std::mt19937_64 gen(11);
    for (int trial = 0; trial < 200; ++trial) {
        const auto inst = test::random_instance(gen, 30);
        const auto dec = test::random_instance(gen, 30).labels;
        const GroupedTally t = tally(inst.labels, dec, inst.groups);
        EXPECT_NEAR(max_discrimination(t), max_discrimination(t.pi(), t.alpha()), 1e-12);
    }
}

TEST(NormalizedDiscrimination, Examples)
{
    EXPECT_NEAR(normalized_discrimination(0.199, 0.3659), 0.544, 5e-4);
    EXPECT_DOUBLE_EQ(normalized_discrimination(0.0, 0.7), 0.0);
    EXPECT_DOUBLE_EQ(normalized_discrimination(0.0, 0.0), 0.0);
    EXPECT_NEAR(normalized_discrimination(0.135, max_discrimination(0.154, 0.6815)), 0.597, 1e-3);
    EXPECT_THROW(normalized_discrimination(0.1, -0.1), DataError);
}

TEST(Accuracy, Extremes)
{
    const BinaryVector labels{1, 0, 1, 0, 1};
    const BinaryVector flipped{0, 1, 0, 1, 0};
    const BinaryVector groups{1, 0, 0, 1, 1};
    EXPECT_DOUBLE_EQ(accuracy(tally(labels, labels, groups)), 1.0);
    EXPECT_DOUBLE_EQ(accuracy(tally(labels, flipped, groups)), 0.0);
}

TEST(RandomAccuracy, Examples)
{
    EXPECT_DOUBLE_EQ(random_accuracy(0.5, 0.13), 0.5);
    EXPECT_NEAR(random_accuracy(0.247, 0.202), 0.6508, 5e-5);
    EXPECT_NEAR(random_accuracy(0.247, 0.0), 0.753, 1e-15);
}

TEST(CohensKappa, Examples)
{
    EXPECT_NEAR(cohens_kappa(0.849, random_accuracy(0.247, 0.202)), 0.567, 5e-3);
    EXPECT_DOUBLE_EQ(cohens_kappa(1.0, 0.3), 1.0);
    EXPECT_NEAR(cohens_kappa(0.819, random_accuracy(0.247, 0.154)), 0.442, 5e-3);
    EXPECT_THROW(cohens_kappa(1.0, 1.0), DegenerateLabelsError);
}

TEST(Evaluate, PerfectPredictionsGiveDataDiscrimination)
{
    const BinaryVector labels{1, 1, 0, 1, 0, 0, 0, 1};
    const BinaryVector groups{1, 1, 1, 0, 0, 0, 0, 1};
    const MetricBundle m = evaluate(labels, labels, groups);
    EXPECT_DOUBLE_EQ(m.kappa, 1.0);
    // favored 3/4 accepted, protected 1/4
    EXPECT_DOUBLE_EQ(m.d, 0.5);
    EXPECT_DOUBLE_EQ(m.d_max, 1.0);
    EXPECT_DOUBLE_EQ(m.delta, 0.5);
}

TEST(Evaluate, AllAcceptAndAllReject)
{
    const BinaryVector labels{1, 0, 0, 1, 0, 1, 0};
    const BinaryVector groups{1, 1, 0, 0, 0, 1, 1};
    const BinaryVector all(7, 1);
    const BinaryVector none(7, 0);
    const MetricBundle a = evaluate(labels, all, groups);
    EXPECT_EQ(a.pi, 1.0);
    EXPECT_EQ(a.d, 0.0);
    EXPECT_EQ(a.delta, 0.0);
    EXPECT_EQ(a.kappa, 0.0);
    EXPECT_EQ(a.accuracy, 3.0 / 7.0);
    const MetricBundle r = evaluate(labels, none, groups);
    EXPECT_EQ(r.pi, 0.0);
    EXPECT_EQ(r.kappa, 0.0);
    EXPECT_EQ(r.delta, 0.0);
}

TEST(Evaluate, MatchesStepByStepRecomputation)
{
    std::mt19937_64 gen(3);
    for (int trial = 0; trial < 200; ++trial) {
        const auto inst = test::random_instance(gen, 25);
        const auto dec = test::random_instance(gen, 25).labels;
        double pos = 0, acc = 0, correct = 0, nf = 0;
        for (int i = 0; i < 25; ++i) {
            pos += inst.labels[i];
            acc += dec[i];
            correct += inst.labels[i] == dec[i];
            nf += inst.groups[i];
        }
        const double n = 25, pi0 = pos / n, pi = acc / n, alpha = nf / n, A = correct / n;
        if (pi0 == 0.0 || pi0 == 1.0) {
            continue;
        }
        const double R = pi0 * pi + (1 - pi0) * (1 - pi);
        const auto [pw, pb] = test::group_rates(dec, inst.groups);
        const double d = pw - pb;
        const double dmax = std::min(pi / alpha, (1 - pi) / (1 - alpha));
        const MetricBundle m = evaluate(inst.labels, dec, inst.groups);
        EXPECT_NEAR(m.pi, pi, 1e-12);
        EXPECT_NEAR(m.accuracy, A, 1e-12);
        EXPECT_NEAR(m.random_accuracy, R, 1e-12);
        EXPECT_NEAR(m.kappa, (A - R) / (1 - R), 1e-12);
        EXPECT_NEAR(m.d, d, 1e-12);
        EXPECT_NEAR(m.d_max, dmax, 1e-12);
        EXPECT_NEAR(m.delta, dmax == 0 ? 0.0 : d / dmax, 1e-12);
    }
}

TEST(Evaluate, ConstantLabelsThrow)
{
    // R = 1 needs constant labels and decisions that agree with them
    const BinaryVector labels{1, 1, 1};
    const BinaryVector groups{1, 0, 1};
    EXPECT_THROW(evaluate(labels, labels, groups), DegenerateLabelsError);
    const BinaryVector dec{1, 0, 1};
    EXPECT_NEAR(evaluate(labels, dec, groups).kappa, 0.0, 1e-15);
}

TEST(Evaluate, ExhaustiveBoundsOnSmallDatasets)
{
    std::mt19937_64 gen(19);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 6 + trial % 7;
        const auto inst = test::random_instance(gen, n);
        const GroupedTally data = tally(inst.labels, inst.labels, inst.groups);
        const double eps = 1.0 / static_cast<double>(std::min(data.n_favored, data.n_protected));
        BinaryVector dec(n);
        for (std::uint32_t mask = 0; mask < (1U << n); ++mask) {
            for (std::size_t i = 0; i < n; ++i) {
                dec[i] = (mask >> i) & 1U;
            }
            const GroupedTally t = tally(inst.labels, dec, inst.groups);
            const double d = discrimination(t);
            const double dmax = max_discrimination(t);
            // d_max bounds favored-first orderings only; reverse
            // discrimination is bounded by the protected-first ordering
            ASSERT_LE(d, dmax + eps);
            const double reverse_max = std::min(t.pi() / (1.0 - t.alpha()), (1.0 - t.pi()) / t.alpha());
            ASSERT_LE(-d, reverse_max + eps);
            const double delta = normalized_discrimination(t);
            ASSERT_LE(delta, 1.0 + eps);
            if (dmax == 0.0) {
                ASSERT_EQ(d, 0.0);
                ASSERT_EQ(delta, 0.0);
            }
        }
    }
}

TEST(Evaluate, SwappingDecisionsWithinGroupKeepsDelta)
{
    std::mt19937_64 gen(23);
    for (int trial = 0; trial < 200; ++trial) {
        const auto inst = test::random_instance(gen, 16);
        BinaryVector dec = test::random_instance(gen, 16).labels;
        const double before = normalized_discrimination(tally(inst.labels, dec, inst.groups));
        std::uniform_int_distribution<std::size_t> pick(0, 15);
        const std::size_t i = pick(gen);
        const std::size_t j = pick(gen);
        if (inst.groups[i] != inst.groups[j]) {
            continue;
        }
        std::swap(dec[i], dec[j]);
        EXPECT_EQ(normalized_discrimination(tally(inst.labels, dec, inst.groups)), before);
    }
}

TEST(Evaluate, TitanicOrderingGivesUnitDelta)
{
    for (int nf = 1; nf < 40; nf += 3) {
        for (int np = 1; np < 40; np += 5) {
            const int n = nf + np;
            BinaryVector groups(n, 0);
            std::fill(groups.begin(), groups.begin() + nf, 1);
            BinaryVector labels(n, 0);
            labels[0] = 1;
            labels[n - 1] = n > 1 ? 0 : 1;
            for (int k = 1; k < n; ++k) {
                BinaryVector dec(n, 0);
                std::fill(dec.begin(), dec.begin() + k, 1);
                EXPECT_DOUBLE_EQ(normalized_discrimination(tally(labels, dec, groups)), 1.0);
            }
        }
    }
}
