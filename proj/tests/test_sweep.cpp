#include "fairtrade/error.hpp"
#include "fairtrade/sweep.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>
#include <sstream>

using namespace fairtrade;

namespace {

struct Fixture {
    ScoreVector scores;
    BinaryVector labels;
    BinaryVector groups;
};

Fixture random_fixture(std::uint64_t seed, std::size_t n, int levels = 0)
{
    std::mt19937_64 gen(seed);
    const auto inst = test::random_instance(gen, n);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> s(n);
    for (auto& v : s) {
        v = levels > 0 ? std::floor(u(gen) * levels) / levels : u(gen);
    }
    return {ScoreVector(s), inst.labels, inst.groups};
}

} // namespace

TEST(SweepGrid, Parse)
{
    EXPECT_EQ(SweepGrid::parse("unique").kind, SweepGrid::Kind::unique);
    const SweepGrid u = SweepGrid::parse("uniform:11");
    EXPECT_EQ(u.kind, SweepGrid::Kind::uniform);
    EXPECT_EQ(u.points, 11U);
    const SweepGrid l = SweepGrid::parse("0.2,0.7");
    EXPECT_EQ(l.kind, SweepGrid::Kind::list);
    EXPECT_EQ(l.thresholds, (std::vector<double>{0.2, 0.7}));
    EXPECT_THROW(SweepGrid::parse("uniform:1"), UsageError);
    EXPECT_THROW(SweepGrid::parse("uniform:x"), UsageError);
    EXPECT_THROW(SweepGrid::parse("0.2,abc"), UsageError);
}

TEST(SweepThresholds, UniqueSeparatesEveryDistinctScore)
{
    const std::vector<double> scores = {0.3, 0.3, 0.8, 0.1, 0.55};
    const auto t = sweep_thresholds(scores, SweepGrid::parse("unique"));
    ASSERT_EQ(t.size(), 5U);
    EXPECT_EQ(t.front(), 1.0);
    EXPECT_EQ(t.back(), 0.0);
    for (std::size_t k = 1; k < t.size(); ++k) {
        EXPECT_LT(t[k], t[k - 1]);
    }
}

TEST(SweepThresholds, ZeroScoreNeedsNegativeBottom)
{
    const std::vector<double> scores = {0.0, 0.5, 1.0};
    const auto t = sweep_thresholds(scores, SweepGrid::parse("uniform:5"));
    EXPECT_EQ(t.front(), 1.0);
    EXPECT_LT(t.back(), 0.0);
}

TEST(Sweep, EndpointsAreExact)
{
    const Fixture f = random_fixture(1, 300);
    for (const char* grid : {"unique", "uniform:101", "0.5"}) {
        const SweepTable table = sweep(f.scores, f.labels, f.groups, SweepGrid::parse(grid));
        const DatasetSummary data = summarize(f.labels, f.groups);
        const SweepRow& first = table.rows.front();
        const SweepRow& last = table.rows.back();
        EXPECT_EQ(first.pi, 0.0);
        EXPECT_EQ(first.accuracy, 1.0 - data.pi0);
        EXPECT_EQ(first.d, 0.0);
        EXPECT_EQ(first.delta, 0.0);
        EXPECT_EQ(first.kappa, 0.0);
        EXPECT_EQ(last.pi, 1.0);
        EXPECT_EQ(last.accuracy, data.pi0);
        EXPECT_EQ(last.d, 0.0);
        EXPECT_EQ(last.delta, 0.0);
        EXPECT_EQ(last.kappa, 0.0);
    }
}

TEST(Sweep, PiNonDecreasingAndDataColumnsConstant)
{
    const Fixture f = random_fixture(2, 500, 40);
    const SweepTable table = sweep(f.scores, f.labels, f.groups, SweepGrid::parse("unique"));
    const DatasetSummary data = summarize(f.labels, f.groups);
    for (std::size_t k = 0; k < table.rows.size(); ++k) {
        if (k > 0) {
            EXPECT_GE(table.rows[k].pi, table.rows[k - 1].pi);
            EXPECT_LT(table.rows[k].threshold, table.rows[k - 1].threshold);
        }
        EXPECT_EQ(table.rows[k].d_data, data.d0);
        EXPECT_EQ(table.rows[k].delta_data, data.delta0);
        EXPECT_EQ(table.rows[k].pi_data, data.pi0);
    }
    // 40 score levels give at most 41 distinct acceptance counts
    std::set<double> pis;
    for (const auto& r : table.rows) {
        pis.insert(r.pi);
    }
    EXPECT_EQ(pis.size(), table.rows.size());
}

TEST(Sweep, RowsAreProjectionsOfDecisions)
{
    const Fixture f = random_fixture(3, 200);
    const SweepTable table = sweep(f.scores, f.labels, f.groups, SweepGrid::parse("uniform:21"));
    for (const auto& row : table.rows) {
        BinaryVector dec(f.scores.size());
        for (std::size_t i = 0; i < dec.size(); ++i) {
            dec[i] = f.scores[i] > row.threshold ? 1 : 0;
        }
        const MetricBundle m = evaluate(f.labels, dec, f.groups);
        EXPECT_EQ(row.pi, m.pi);
        EXPECT_EQ(row.accuracy, m.accuracy);
        EXPECT_EQ(row.kappa, m.kappa);
        EXPECT_EQ(row.d, m.d);
        EXPECT_EQ(row.d_max, m.d_max);
        EXPECT_EQ(row.delta, m.delta);
    }
}

TEST(Sweep, MisalignedInput)
{
    const Fixture f = random_fixture(4, 20);
    const BinaryVector short_labels(5, 1);
    EXPECT_THROW(sweep(f.scores, short_labels, f.groups, SweepGrid{}), DataError);
}

TEST(CompareSweeps, IdenticalTablesHaveNoDifferences)
{
    const Fixture f = random_fixture(5, 300);
    SweepTable a = sweep(f.scores, f.labels, f.groups, SweepGrid::parse("uniform:51"), {"a", "m1", 42});
    SweepTable b = a;
    b.metadata.classifier = "b";
    const SweepComparison cmp = compare_sweeps({a, b});
    EXPECT_EQ(cmp.classifiers, (std::vector<std::string>{"a", "b"}));
    for (const auto& row : cmp.rows) {
        ASSERT_TRUE(row.matches[1].has_value());
    }
    const auto diffs = cmp.max_differences();
    EXPECT_EQ(diffs[1].first, 0.0);
    EXPECT_EQ(diffs[1].second, 0.0);
}

TEST(CompareSweeps, Errors)
{
    const Fixture f = random_fixture(6, 100);
    const SweepTable a = sweep(f.scores, f.labels, f.groups, SweepGrid{}, {"a", "m1", 1});
    SweepTable b = a;
    b.metadata.manifest = "m2";
    EXPECT_THROW(compare_sweeps({a, b}), DataError);
    EXPECT_THROW(compare_sweeps({a}), DataError);
}

TEST(CompareSweeps, UnmatchedRowsBeyondTolerance)
{
    SweepTable a;
    a.metadata = {"a", "m", 0};
    a.rows = {SweepRow{1.0, 0.0}, SweepRow{0.5, 0.5}, SweepRow{0.0, 1.0}};
    SweepTable b;
    b.metadata = {"b", "m", 0};
    b.rows = {SweepRow{1.0, 0.0}, SweepRow{0.5, 0.52}, SweepRow{0.0, 1.0}};
    const SweepComparison cmp = compare_sweeps({a, b});
    EXPECT_TRUE(cmp.rows[0].matches[1].has_value());
    EXPECT_FALSE(cmp.rows[1].matches[1].has_value());
}

TEST(DatFile, SweepRoundTripIsExact)
{
    const Fixture f = random_fixture(7, 150);
    const SweepTable table = sweep(f.scores, f.labels, f.groups, SweepGrid{}, {"logistic_nos", "abcd", 42});
    std::stringstream buf;
    write_dat(to_dat(table), buf);
    const SweepTable back = sweep_from_dat(read_dat(buf));
    EXPECT_EQ(back.metadata.classifier, "logistic_nos");
    EXPECT_EQ(back.metadata.manifest, "abcd");
    EXPECT_EQ(back.metadata.seed, 42U);
    ASSERT_EQ(back.rows.size(), table.rows.size());
    for (std::size_t k = 0; k < table.rows.size(); ++k) {
        EXPECT_EQ(back.rows[k].threshold, table.rows[k].threshold);
        EXPECT_EQ(back.rows[k].kappa, table.rows[k].kappa);
        EXPECT_EQ(back.rows[k].delta, table.rows[k].delta);
    }
}

TEST(DatFile, HeaderNamesRowFields)
{
    std::stringstream buf;
    write_dat(to_dat(SweepTable{}), buf);
    std::string line;
    std::getline(buf, line);
    while (line.front() == '#') {
        std::getline(buf, line);
    }
    EXPECT_EQ(line, "threshold pi accuracy kappa d d_max delta d_data delta_data pi_data");
}

TEST(DatFile, FrontierWritesNanForUnreachable)
{
    std::vector<FrontierPoint> pts(2);
    pts[0] = {0.2, true, 0.2, 0.3, 0.9, 0.8, 0.5, 3};
    pts[1].target_d = -1.0;
    std::stringstream buf;
    write_dat(frontier_to_dat(pts, OracleStrategy::increase_protected, "mm"), buf);
    const DatTable t = read_dat(buf);
    EXPECT_EQ(t.meta("strategy"), "increase_protected");
    EXPECT_EQ(t.rows[0][t.column("flips")], 3.0);
    EXPECT_TRUE(std::isnan(t.rows[1][t.column("kappa")]));
}

TEST(DatFile, MalformedInput)
{
    std::istringstream ragged("a b\n1 2\n3\n");
    EXPECT_THROW(read_dat(ragged), DataError);
    std::istringstream bad("a\nxyz\n");
    EXPECT_THROW(read_dat(bad), DataError);
    std::istringstream empty("# kind sweep\n");
    EXPECT_THROW(read_dat(empty), DataError);
    DatTable t;
    t.columns = {"a"};
    EXPECT_THROW((void)t.column("b"), DataError);
}
