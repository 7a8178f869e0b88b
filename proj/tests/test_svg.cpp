#include <gtest/gtest.h>

#include <regex>

#include "qlens/bundle.hpp"
#include "qlens/examples.hpp"
#include "qlens/svg.hpp"

using namespace qlens;

namespace {

std::size_t count(const std::string& haystack, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = haystack.find(needle); pos != std::string::npos; pos = haystack.find(needle, pos + 1)) ++n;
    return n;
}

struct Circle {
    double cx, cy, r;
};

std::vector<Circle> circles(const std::string& svg) {
    static const std::regex re(R"re(<circle cx="([-0-9.]+)" cy="([-0-9.]+)" r="([-0-9.]+)")re");
    std::vector<Circle> out;
    for (auto it = std::sregex_iterator(svg.begin(), svg.end(), re); it != std::sregex_iterator(); ++it)
        out.push_back({std::stod((*it)[1]), std::stod((*it)[2]), std::stod((*it)[3])});
    return out;
}

const AnalysisBundle& grover() {
    static const AnalysisBundle b = analyze(examples::load("grover2"));
    return b;
}

} // namespace

TEST(Svg, PostOracleStateHasFourCircles) {
    const std::string doc = svg::render_state(grover(), 5, 0.25);
    EXPECT_EQ(doc.rfind("<svg", 0), 0u);
    EXPECT_EQ(count(doc, "<circle"), 4u);
    EXPECT_EQ(count(doc, "class=\"stick-real\""), 4u);
    EXPECT_EQ(count(doc, "class=\"stick-imag\""), 4u);
    EXPECT_NE(doc.find("|11&gt;"), std::string::npos);

    // |11> has the negative amplitude, so its circle sits left of the origin.
    const auto cs = circles(doc);
    ASSERT_EQ(cs.size(), 4u);
    EXPECT_LT(cs[3].cx, 240.0);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_GT(cs[i].cx, 240.0);
    for (const auto& c : cs) EXPECT_NEAR(c.cy, 240.0, 1e-3);
}

TEST(Svg, FullScaleCentresAtOrigin) {
    for (const auto& c : circles(svg::render_state(grover(), 5, 1.0))) {
        EXPECT_NEAR(c.cx, 240.0, 1e-3);
        EXPECT_NEAR(c.cy, 240.0, 1e-3);
        EXPECT_NEAR(c.r, 0.5 * 200.0, 1e-3);
    }
}

TEST(Svg, RadiusScalesWithK) {
    const auto big = circles(svg::render_state(grover(), 2, 1.0));
    const auto small = circles(svg::render_state(grover(), 2, 0.25));
    ASSERT_EQ(big.size(), small.size());
    for (std::size_t i = 0; i < big.size(); ++i) EXPECT_NEAR(small[i].r * 4, big[i].r, 1e-3);
}

TEST(Svg, InitialStateSingleCircle) {
    EXPECT_EQ(count(svg::render_state(grover(), 0, 0.25), "<circle"), 1u);
}

TEST(Svg, TitleIsEscaped) {
    const std::string doc = svg::render_state(grover(), 0, 0.25);
    EXPECT_NE(doc.find("Grover search for |11&gt;"), std::string::npos);
}

TEST(Svg, Errors) {
    EXPECT_THROW(svg::render_state(grover(), 17, 0.25), RangeError);
    EXPECT_THROW(svg::render_state(grover(), 5, 0.0), BadScale);
    EXPECT_THROW(svg::export_svg(grover(), 5, 0.25, "/nonexistent-dir/x/out.svg"), IoError);
}

TEST(Svg, ExportWritesFile) {
    const auto path = std::filesystem::temp_directory_path() / "qlens-test-export.svg";
    svg::export_svg(grover(), 5, 0.25, path);
    std::ifstream in(path);
    std::stringstream buf;
    buf << in.rdbuf();
    EXPECT_EQ(buf.str(), svg::render_state(grover(), 5, 0.25));
    std::filesystem::remove(path);
}
