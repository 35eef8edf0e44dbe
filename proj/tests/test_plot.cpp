#include <gtest/gtest.h>

#include "hdea/plot.hpp"

using namespace hdea;

namespace {

std::size_t count(const std::string& haystack, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = haystack.find(needle); pos != std::string::npos; pos = haystack.find(needle, pos + 1)) ++n;
    return n;
}

ComparisonSummary summary_with(std::vector<std::size_t> ks, bool both = true) {
    ComparisonSummary s;
    s.n = 50;
    for (auto k : ks) {
        KComparison row;
        row.k = k;
        const double base = 0.6 + 0.01 * static_cast<double>(k);
        row.hdea = CellStats{100, base + 0.01, base + 0.05, base - 0.03};
        if (both) row.hea = CellStats{100, base, base + 0.04, base - 0.04};
        row.comparable = both;
        s.rows.push_back(row);
    }
    return s;
}

} // namespace

TEST(Plot, TwoSeriesSixPoints) {
    const auto svg = render_svg(make_plot_spec(summary_with({0, 2, 4, 6, 8, 10})));
    EXPECT_EQ(count(svg, "<polyline"), 2u);
    EXPECT_EQ(count(svg, "class=\"errorbar\""), 12u);
    EXPECT_NE(svg.find("HD-EA"), std::string::npos);
    EXPECT_NE(svg.find("H-EA"), std::string::npos);
    EXPECT_EQ(svg.rfind("</svg>\n"), svg.size() - 7);
}

TEST(Plot, SingleKStillRenders) {
    const auto svg = render_svg(make_plot_spec(summary_with({4})));
    EXPECT_EQ(count(svg, "<polyline"), 2u);
    EXPECT_EQ(count(svg, "class=\"errorbar\""), 2u);
    EXPECT_EQ(svg.find("nan"), std::string::npos);
    EXPECT_EQ(svg.find("inf"), std::string::npos);
}

TEST(Plot, RenderingIsDeterministic) {
    const auto s = summary_with({0, 4, 10});
    EXPECT_EQ(render_svg(make_plot_spec(s)), render_svg(make_plot_spec(s)));
}

TEST(Plot, MissingAlgorithmDropsItsSeries) {
    const auto spec = make_plot_spec(summary_with({0, 4}, false));
    ASSERT_EQ(spec.series.size(), 1u);
    EXPECT_EQ(spec.series[0].label, "HD-EA");
}

TEST(Plot, EmptySummaryThrows) {
    EXPECT_THROW(make_plot_spec(ComparisonSummary{}), ParameterError);
}
