#include <doctest.h>

#include <cmath>

#include "lasym/contour.hpp"
#include "lasym/error.hpp"
#include "lasym/landau.hpp"

using namespace lasym;

namespace {

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1.0);
    return v;
}

}  // namespace

TEST_CASE("contours of the jet stream function sit on the level sets") {
    auto psi = [](double r, double th) { return landau_stream(2.0, r, th); };
    const auto rs = linspace(0.2, 6.0, 60);
    const auto ths = linspace(0.02, M_PI - 0.02, 60);
    const std::vector<double> levels{0.5, 1.0, 2.0};
    const auto sets = contour_levels(psi, rs, ths, levels, 1e-4);
    REQUIRE(sets.size() == 3);
    for (const auto& set : sets) {
        REQUIRE(!set.lines.empty());
        std::size_t npts = 0;
        for (const auto& line : set.lines) {
            for (std::size_t i = 0; i < line.xs.size(); ++i) {
                // map back to (r, theta)
                const double X = line.xs[i], Z = line.zs[i];
                const double r = std::hypot(X, Z);
                const double th = std::atan2(X, Z);
                CHECK(std::abs(psi(r, th) - set.level) <= 1e-3 * set.level);
                ++npts;
            }
        }
        CHECK(npts > 10);
    }
}

TEST_CASE("stokeslet stream contours are symmetric about the equator") {
    auto psi = [](double r, double th) {
        const double s = std::sin(th);
        return r * s * s / (8.0 * M_PI);
    };
    const auto rs = linspace(0.2, 8.0, 50);
    const auto ths = linspace(0.02, M_PI - 0.02, 51);
    const auto sets = contour_levels(psi, rs, ths, {0.05}, 1e-4);
    REQUIRE(sets.size() == 1);
    // mirror symmetry: for every vertex (X, Z) there is one near (X, -Z)
    double worst = 0.0;
    for (const auto& line : sets[0].lines)
        for (std::size_t i = 0; i < line.xs.size(); ++i) {
            const double X = line.xs[i], Z = line.zs[i];
            double best = 1e300;
            for (const auto& l2 : sets[0].lines)
                for (std::size_t j = 0; j < l2.xs.size(); ++j)
                    best = std::min(best, std::hypot(l2.xs[j] - X, l2.zs[j] + Z));
            worst = std::max(worst, best);
        }
    CHECK(worst < 0.15);
}

TEST_CASE("SVG emission contains one group per level") {
    auto psi = [](double r, double th) { return landau_stream(2.0, r, th); };
    const auto sets = contour_levels(psi, linspace(0.2, 4.0, 30),
                                     linspace(0.05, M_PI - 0.05, 30), {0.5, 1.0});
    const std::string svg = contours_to_svg(sets);
    CHECK(svg.find("<svg") != std::string::npos);
    std::size_t groups = 0, pos = 0;
    while ((pos = svg.find("<g ", pos)) != std::string::npos) {
        ++groups;
        ++pos;
    }
    CHECK(groups == 2);
    CHECK(svg.find("polyline") != std::string::npos);
}

TEST_CASE("contour input validation") {
    const auto rs = linspace(1.0, 2.0, 5);
    const auto ths = linspace(0.1, 3.0, 5);
    CHECK_THROWS_AS(contour_levels(nullptr, rs, ths, {1.0}), ConfigError);
    CHECK_THROWS_AS(contour_levels([](double, double) { return 0.0; }, rs, ths, {}),
                    ConfigError);
}
