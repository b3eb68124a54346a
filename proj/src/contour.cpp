#include "lasym/contour.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>

#include "lasym/error.hpp"

namespace lasym {

namespace {

struct Pt {
    double r, th;
};

// Bisect f - level to tolerance along the segment [a, b] (f(a), f(b) must
// straddle the level).
Pt refine_edge(const std::function<double(double, double)>& f, Pt a, Pt b, double fa,
               double level, double tol) {
    for (int it = 0; it < 60; ++it) {
        const Pt m{0.5 * (a.r + b.r), 0.5 * (a.th + b.th)};
        const double fm = f(m.r, m.th) - level;
        if (std::abs(fm) <= tol) return m;
        if ((fm > 0.0) == (fa > 0.0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return {0.5 * (a.r + b.r), 0.5 * (a.th + b.th)};
}

struct Key {
    long long a, b;
    bool operator<(const Key& o) const { return a != o.a ? a < o.a : b < o.b; }
};

Key quantize(const Pt& p, double scale) {
    return {static_cast<long long>(std::llround(p.r / scale * 1e7)),
            static_cast<long long>(std::llround(p.th * 1e7))};
}

}  // namespace

std::vector<ContourSet> contour_levels(const std::function<double(double, double)>& f,
                                       const std::vector<double>& r_nodes,
                                       const std::vector<double>& theta_nodes,
                                       const std::vector<double>& levels, double edge_tol) {
    if (!f) throw ConfigError("contour_levels: missing evaluator");
    if (r_nodes.size() < 2 || theta_nodes.size() < 2)
        throw ConfigError("contour_levels: grid too small");
    if (levels.empty()) throw ConfigError("contour_levels: empty level list");

    const std::size_t nr = r_nodes.size(), nt = theta_nodes.size();
    std::vector<double> vals(nr * nt);
    for (std::size_t i = 0; i < nr; ++i)
        for (std::size_t j = 0; j < nt; ++j) vals[i * nt + j] = f(r_nodes[i], theta_nodes[j]);
    const double r_scale = r_nodes.back();

    std::vector<ContourSet> out;
    for (double level : levels) {
        ContourSet set;
        set.level = level;
        const double tol = edge_tol * std::max(std::abs(level), 1e-12);

        std::vector<std::array<Pt, 2>> segs;
        auto edge_point = [&](Pt a, Pt b, double fa, double fb) {
            return refine_edge(f, a, b, fa, level, tol);
        };

        for (std::size_t i = 0; i + 1 < nr; ++i) {
            for (std::size_t j = 0; j + 1 < nt; ++j) {
                const Pt c00{r_nodes[i], theta_nodes[j]}, c10{r_nodes[i + 1], theta_nodes[j]};
                const Pt c01{r_nodes[i], theta_nodes[j + 1]},
                    c11{r_nodes[i + 1], theta_nodes[j + 1]};
                const double f00 = vals[i * nt + j] - level, f10 = vals[(i + 1) * nt + j] - level;
                const double f01 = vals[i * nt + j + 1] - level,
                             f11 = vals[(i + 1) * nt + j + 1] - level;
                const int code = (f00 > 0.0) | ((f10 > 0.0) << 1) | ((f01 > 0.0) << 2) |
                                 ((f11 > 0.0) << 3);
                if (code == 0 || code == 15) continue;

                // Crossing points on the four cell edges (present when the
                // endpoint signs differ).
                Pt e_bottom{}, e_top{}, e_left{}, e_right{};
                const bool bottom = (f00 > 0) != (f10 > 0);
                const bool top = (f01 > 0) != (f11 > 0);
                const bool left = (f00 > 0) != (f01 > 0);
                const bool right = (f10 > 0) != (f11 > 0);
                if (bottom) e_bottom = edge_point(c00, c10, f00, f10);
                if (top) e_top = edge_point(c01, c11, f01, f11);
                if (left) e_left = edge_point(c00, c01, f00, f01);
                if (right) e_right = edge_point(c10, c11, f10, f11);

                auto add = [&](Pt a, Pt b) { segs.push_back({a, b}); };
                switch (code) {
                    case 1: case 14: add(e_bottom, e_left); break;
                    case 2: case 13: add(e_bottom, e_right); break;
                    case 3: case 12: add(e_left, e_right); break;
                    case 4: case 11: add(e_left, e_top); break;
                    case 5: case 10: add(e_bottom, e_top); break;
                    case 7: case 8: add(e_right, e_top); break;
                    case 6: case 9: {
                        // Saddle: split by the cell-center sample.
                        const double fc = f(0.5 * (c00.r + c10.r), 0.5 * (c00.th + c01.th)) -
                                          level;
                        if ((fc > 0.0) == (f00 > 0.0)) {
                            add(e_bottom, e_right);
                            add(e_left, e_top);
                        } else {
                            add(e_bottom, e_left);
                            add(e_right, e_top);
                        }
                        break;
                    }
                    default: break;
                }
            }
        }

        // Stitch segments into polylines by shared endpoints.
        std::multimap<Key, std::size_t> by_end;
        for (std::size_t s = 0; s < segs.size(); ++s) {
            by_end.emplace(quantize(segs[s][0], r_scale), s);
            by_end.emplace(quantize(segs[s][1], r_scale), s);
        }
        std::vector<bool> used(segs.size(), false);
        for (std::size_t s0 = 0; s0 < segs.size(); ++s0) {
            if (used[s0]) continue;
            used[s0] = true;
            std::vector<Pt> chain{segs[s0][0], segs[s0][1]};
            for (int dir = 0; dir < 2; ++dir) {
                for (;;) {
                    const Pt& tip = dir == 0 ? chain.back() : chain.front();
                    const Key k = quantize(tip, r_scale);
                    std::size_t next = segs.size();
                    for (auto [it, end] = by_end.equal_range(k); it != end; ++it)
                        if (!used[it->second]) {
                            next = it->second;
                            break;
                        }
                    if (next == segs.size()) break;
                    used[next] = true;
                    const Pt& a = segs[next][0];
                    const Pt& b = segs[next][1];
                    const Key ka = quantize(a, r_scale);
                    const bool a_is_tip = !(ka < k) && !(k < ka);
                    const Pt& add_pt = a_is_tip ? b : a;
                    if (dir == 0)
                        chain.push_back(add_pt);
                    else
                        chain.insert(chain.begin(), add_pt);
                }
            }
            Polyline line;
            for (const Pt& pt : chain) {
                line.xs.push_back(pt.r * std::sin(pt.th));
                line.zs.push_back(pt.r * std::cos(pt.th));
            }
            set.lines.push_back(std::move(line));
        }
        out.push_back(std::move(set));
    }
    return out;
}

std::string contours_to_svg(const std::vector<ContourSet>& sets, int width, int height) {
    double xmin = 0.0, xmax = 1e-9, zmin = -1e-9, zmax = 1e-9;
    for (const auto& set : sets)
        for (const auto& line : set.lines)
            for (std::size_t i = 0; i < line.xs.size(); ++i) {
                xmin = std::min(xmin, line.xs[i]);
                xmax = std::max(xmax, line.xs[i]);
                zmin = std::min(zmin, line.zs[i]);
                zmax = std::max(zmax, line.zs[i]);
            }
    const double pad = 0.03 * std::max(xmax - xmin, zmax - zmin);
    xmin -= pad;
    xmax += pad;
    zmin -= pad;
    zmax += pad;
    const double sx = width / (zmax - zmin), sy = height / (xmax - xmin);
    const double scale = std::min(sx, sy);

    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b"};
    std::string svg;
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" height=\"%d\" "
                  "viewBox=\"0 0 %d %d\">\n",
                  width, height, width, height);
    svg += buf;
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (std::size_t li = 0; li < sets.size(); ++li) {
        std::snprintf(buf, sizeof(buf),
                      "<g fill=\"none\" stroke=\"%s\" stroke-width=\"1.2\" data-level=\"%.9g\">\n",
                      palette[li % 6], sets[li].level);
        svg += buf;
        for (const auto& line : sets[li].lines) {
            svg += "<polyline points=\"";
            for (std::size_t i = 0; i < line.xs.size(); ++i) {
                // Z runs left-right (jet axis), X bottom-up.
                const double px = (line.zs[i] - zmin) * scale;
                const double py = height - (line.xs[i] - xmin) * scale;
                std::snprintf(buf, sizeof(buf), i ? " %.3f,%.3f" : "%.3f,%.3f", px, py);
                svg += buf;
            }
            svg += "\"/>\n";
        }
        svg += "</g>\n";
    }
    svg += "</svg>\n";
    return svg;
}

}  // namespace lasym
