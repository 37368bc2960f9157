#include "fairtrade/error.hpp"
#include "fairtrade/svg_chart.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace fairtrade;

namespace {

std::size_t count(const std::string& text, const std::string& needle)
{
    std::size_t n = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) {
        ++n;
    }
    return n;
}

LineChart two_series()
{
    LineChart c{"Accuracy", "pi", "A", 0, 1, 0, 1, {}};
    c.series.push_back({"logistic", {0, 0.5, 1}, {0.75, 0.85, 0.25}});
    c.series.push_back({"nb", {0, 0.5, 1}, {0.75, 0.8, 0.25}});
    return c;
}

} // namespace

TEST(Svg, Deterministic)
{
    EXPECT_EQ(render_svg(two_series()), render_svg(two_series()));
}

TEST(Svg, OneCurveAndLegendEntryPerSeries)
{
    const std::string svg = render_svg(two_series());
    EXPECT_EQ(svg.rfind("<svg", 0), 0U);
    EXPECT_EQ(count(svg, "<polyline"), 2U);
    EXPECT_NE(svg.find(">logistic</text>"), std::string::npos);
    EXPECT_NE(svg.find(">nb</text>"), std::string::npos);
    EXPECT_NE(svg.find("#0072BD"), std::string::npos);
    EXPECT_NE(svg.find("#D95319"), std::string::npos);
}

TEST(Svg, NanSplitsSeries)
{
    LineChart c{"t", "x", "y", 0, 1, 0, 1, {}};
    c.series.push_back({"s", {0, 0.25, 0.5, 0.75, 1}, {0.1, 0.2, std::nan(""), 0.3, 0.4}});
    EXPECT_EQ(count(render_svg(c), "<polyline"), 2U);
}

TEST(Svg, DashedSeriesIsBlack)
{
    LineChart c = two_series();
    c.series.push_back({"ref", {0, 1}, {0.5, 0.5}, true});
    const std::string svg = render_svg(c);
    EXPECT_EQ(count(svg, "stroke-dasharray"), 2U);
}

TEST(Svg, EscapesText)
{
    LineChart c = two_series();
    c.title = "A & <B>";
    const std::string svg = render_svg(c);
    EXPECT_NE(svg.find("A &amp; &lt;B&gt;"), std::string::npos);
}

TEST(Svg, Errors)
{
    LineChart empty{"t", "x", "y", 0, 1, 0, 1, {}};
    EXPECT_THROW(render_svg(empty), DataError);
    empty.series.push_back({"s", {std::nan("")}, {1.0}});
    EXPECT_THROW(render_svg(empty), DataError);
    LineChart flat = two_series();
    flat.x_max = flat.x_min;
    EXPECT_THROW(render_svg(flat), DataError);
    LineChart ragged = two_series();
    ragged.series[0].y.pop_back();
    EXPECT_THROW(render_svg(ragged), DataError);
}

TEST(PaddedRange, PadsFiniteSpan)
{
    const std::vector<Series> s = {{"a", {0.0, 2.0, std::nan("")}, {1.0, 1.0, 1.0}}};
    const auto [lo, hi] = padded_range(s, true);
    EXPECT_DOUBLE_EQ(lo, -0.1);
    EXPECT_DOUBLE_EQ(hi, 2.1);
    const auto [ylo, yhi] = padded_range(s, false);
    EXPECT_DOUBLE_EQ(ylo, 0.95);
    EXPECT_DOUBLE_EQ(yhi, 1.05);
    EXPECT_EQ(padded_range({}, true), std::make_pair(0.0, 1.0));
}
