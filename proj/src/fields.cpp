#include "lasym/fields.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "lasym/error.hpp"

namespace lasym {

namespace {

// Window start for a 4-point stencil around t in ascending nodes, clamped.
int window4(const std::vector<double>& nodes, double t) {
    const int n = static_cast<int>(nodes.size());
    int hi = static_cast<int>(std::lower_bound(nodes.begin(), nodes.end(), t) - nodes.begin());
    int i0 = hi - 2;
    return std::clamp(i0, 0, n - 4);
}

// Lagrange weights for 4 abscissae at t.
void lagrange4(const double* ts, double t, double* w) {
    for (int i = 0; i < 4; ++i) {
        double num = 1.0, den = 1.0;
        for (int j = 0; j < 4; ++j) {
            if (j == i) continue;
            num *= t - ts[j];
            den *= ts[i] - ts[j];
        }
        w[i] = num / den;
    }
}

struct LocalCoords {
    double r, mu, phi;
};

LocalCoords local_coords(const GradedGrid& g, const Vec3& x) {
    const Vec3 d = x - g.center;
    LocalCoords lc;
    lc.r = norm(d);
    lc.mu = lc.r > 0.0 ? std::clamp(d.z / lc.r, -1.0, 1.0) : 1.0;
    lc.phi = std::atan2(d.y, d.x);
    if (lc.phi < 0.0) lc.phi += 2.0 * M_PI;
    return lc;
}

}  // namespace

template <typename T>
T SampledField<T>::value(const Vec3& x) const {
    const GradedGrid& g = *grid;
    LocalCoords lc = local_coords(g, x);

    // Beyond the outermost node: power-law continuation along the ray.
    double tail_scale = 1.0;
    const double r_out = g.r_nodes.back();
    if (lc.r > r_out) {
        tail_scale = std::pow(lc.r / r_out, -tail.exponent);
        lc.r = r_out;
    } else if (lc.r < g.r_nodes.front()) {
        lc.r = g.r_nodes.front();
    }

    const int nr = static_cast<int>(g.r_nodes.size());
    const int nt = g.n_theta;
    const int np = g.n_phi;

    const double logr = std::log(lc.r);
    const int i0 = window4(g.log_r_nodes_, logr);
    double wr[4];
    lagrange4(&g.log_r_nodes_[i0], logr, wr);

    const int t0 = window4(g.cos_theta_nodes, lc.mu);
    double wt[4];
    lagrange4(&g.cos_theta_nodes[t0], lc.mu, wt);

    // Periodic phi window.
    const double dphi = g.phi_weight;
    int p0 = static_cast<int>(std::floor((lc.phi - g.phi_nodes[0]) / dphi));
    double ps[4], wp[4];
    int pidx[4];
    for (int k = 0; k < 4; ++k) {
        const int raw = p0 - 1 + k;
        pidx[k] = ((raw % np) + np) % np;
        ps[k] = g.phi_nodes[0] + raw * dphi;
    }
    lagrange4(ps, lc.phi, wp);

    T acc{};
    for (int a = 0; a < 4; ++a) {
        const int ir = std::min(i0 + a, nr - 1);
        for (int b = 0; b < 4; ++b) {
            const int it = std::min(t0 + b, nt - 1);
            const double wab = wr[a] * wt[b];
            for (int c = 0; c < 4; ++c) {
                acc += values[g.node_index(ir, it, pidx[c])] * (wab * wp[c]);
            }
        }
    }
    detail::scale_in_place(acc, tail_scale);
    return acc;
}

template <typename T>
T SampledField<T>::value_linear(const Vec3& x) const {
    const GradedGrid& g = *grid;
    LocalCoords lc = local_coords(g, x);

    double tail_scale = 1.0;
    const double r_out = g.r_nodes.back();
    if (lc.r > r_out) {
        tail_scale = std::pow(lc.r / r_out, -tail.exponent);
        lc.r = r_out;
    } else if (lc.r < g.r_nodes.front()) {
        lc.r = g.r_nodes.front();
    }

    const int nr = static_cast<int>(g.r_nodes.size());
    const int nt = g.n_theta;
    const int np = g.n_phi;

    const double logr = std::log(lc.r);
    int ir = static_cast<int>(std::lower_bound(g.log_r_nodes_.begin(), g.log_r_nodes_.end(),
                                               logr) -
                              g.log_r_nodes_.begin()) -
             1;
    ir = std::clamp(ir, 0, nr - 2);
    const double fr = std::clamp((logr - g.log_r_nodes_[ir]) /
                                     (g.log_r_nodes_[ir + 1] - g.log_r_nodes_[ir]),
                                 0.0, 1.0);

    int it = static_cast<int>(std::lower_bound(g.cos_theta_nodes.begin(),
                                               g.cos_theta_nodes.end(), lc.mu) -
                              g.cos_theta_nodes.begin()) -
             1;
    it = std::clamp(it, 0, nt - 2);
    const double ft = std::clamp(
        (lc.mu - g.cos_theta_nodes[it]) / (g.cos_theta_nodes[it + 1] - g.cos_theta_nodes[it]),
        0.0, 1.0);

    const double dphi = g.phi_weight;
    int p0 = static_cast<int>(std::floor((lc.phi - g.phi_nodes[0]) / dphi));
    const double fp = (lc.phi - (g.phi_nodes[0] + p0 * dphi)) / dphi;
    const int ipa = ((p0 % np) + np) % np;
    const int ipb = (ipa + 1) % np;

    T acc{};
    const double w[2][2][2] = {
        {{(1 - fr) * (1 - ft) * (1 - fp), (1 - fr) * (1 - ft) * fp},
         {(1 - fr) * ft * (1 - fp), (1 - fr) * ft * fp}},
        {{fr * (1 - ft) * (1 - fp), fr * (1 - ft) * fp}, {fr * ft * (1 - fp), fr * ft * fp}}};
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c)
                acc += values[g.node_index(ir + a, it + b, c == 0 ? ipa : ipb)] * w[a][b][c];
    detail::scale_in_place(acc, tail_scale);
    return acc;
}

template <typename T>
T SampledField<T>::integral() const {
    T acc{};
    for (std::size_t i = 0; i < values.size(); ++i) acc += values[i] * grid->weight[i];
    return acc;
}

template <typename T>
double SampledField<T>::l1_norm() const {
    double acc = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i)
        acc += detail::magnitude(values[i]) * grid->weight[i];
    return acc;
}

template <typename T>
double SampledField<T>::max_magnitude() const {
    double m = 0.0;
    for (const T& v : values) m = std::max(m, detail::magnitude(v));
    return m;
}

template <typename T>
void SampledField<T>::fit_tail(double fallback_exponent) {
    const GradedGrid& g = *grid;
    const int nr = static_cast<int>(g.r_nodes.size());
    // Shell maxima over the outer 30% of the log range.
    const double cut = g.r_min * std::pow(g.r_max / g.r_min, 0.7);
    std::vector<double> rs, ms;
    for (int ir = 0; ir < nr; ++ir) {
        if (g.r_nodes[ir] < cut) continue;
        double m = 0.0;
        for (int it = 0; it < g.n_theta; ++it)
            for (int ip = 0; ip < g.n_phi; ++ip)
                m = std::max(m, detail::magnitude(values[g.node_index(ir, it, ip)]));
        if (m > 0.0) {
            rs.push_back(g.r_nodes[ir]);
            ms.push_back(m);
        }
    }
    double expo = fallback_exponent;
    if (rs.size() >= 4 && rs.back() / rs.front() > 2.0) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < rs.size(); ++i) {
            const double X = std::log(rs[i]), Y = std::log(ms[i]);
            sx += X;
            sy += Y;
            sxx += X * X;
            sxy += X * Y;
        }
        const double n = static_cast<double>(rs.size());
        const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        const double fitted = -slope;
        if (std::isfinite(fitted) && fitted > 0.0 && fitted < 8.0) expo = fitted;
    }
    tail.exponent = expo;
    // Constant from the outermost shell so the bound holds there.
    double c = 0.0;
    for (int ir = std::max(0, nr - 2); ir < nr; ++ir)
        for (int it = 0; it < g.n_theta; ++it)
            for (int ip = 0; ip < g.n_phi; ++ip)
                c = std::max(c, detail::magnitude(values[g.node_index(ir, it, ip)]) *
                                    std::pow(g.r_nodes[ir], expo));
    tail.constant = c;
}

template <typename T>
SampledField<T>& SampledField<T>::operator+=(const SampledField& o) {
    for (std::size_t i = 0; i < values.size(); ++i) values[i] += o.values[i];
    tail.exponent = std::min(tail.exponent, o.tail.exponent);
    tail.constant += o.tail.constant;
    support_radius = std::max(support_radius, o.support_radius);
    return *this;
}

template <typename T>
SampledField<T>& SampledField<T>::operator-=(const SampledField& o) {
    for (std::size_t i = 0; i < values.size(); ++i) values[i] -= o.values[i];
    tail.exponent = std::min(tail.exponent, o.tail.exponent);
    tail.constant += o.tail.constant;
    support_radius = std::max(support_radius, o.support_radius);
    return *this;
}

template <typename T>
SampledField<T>& SampledField<T>::operator*=(double s) {
    for (auto& v : values) detail::scale_in_place(v, s);
    tail.constant *= std::abs(s);
    return *this;
}

template struct SampledField<double>;
template struct SampledField<Vec3>;
template struct SampledField<Mat3>;

template <typename T>
WeightedSupNorm weighted_sup_norm(const SampledField<T>& field, double alpha) {
    if (!(alpha > 1.0) || !(alpha <= 2.0))
        throw ConfigError("weighted_sup_norm: alpha must lie in (1, 2]");
    if (field.empty()) throw ConfigError("weighted_sup_norm: empty field");
    const GradedGrid& g = *field.grid;
    WeightedSupNorm out;
    for (std::size_t i = 0; i < field.size(); ++i) {
        const double r = norm(g.point(i));
        out.grid_value = std::max(out.grid_value,
                                  std::pow(1.0 + r, alpha) * detail::magnitude(field.values[i]));
    }
    if (field.tail.constant > 0.0) {
        // sup over r >= r_max of (1+r)^alpha C r^-e: attained at r_max when
        // e >= alpha, otherwise unbounded (boundary value still reported).
        out.tail_value = field.tail.constant * std::pow(1.0 + g.r_max, alpha) *
                         std::pow(g.r_max, -field.tail.exponent);
        if (field.tail.exponent < alpha - 1e-12) out.unbounded = true;
    }
    return out;
}

template WeightedSupNorm weighted_sup_norm(const SampledField<double>&, double);
template WeightedSupNorm weighted_sup_norm(const SampledField<Vec3>&, double);
template WeightedSupNorm weighted_sup_norm(const SampledField<Mat3>&, double);

// --- CSV ------------------------------------------------------------------

namespace {

void write_csv(const std::string& path, const char* header, const GradedGrid& g,
               const std::function<int(std::size_t, char*, std::size_t)>& row) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open for writing: " + path);
    out << header << '\n';
    char buf[512];
    for (std::size_t i = 0; i < g.node_count(); ++i) {
        row(i, buf, sizeof(buf));
        out << buf;
    }
}

int fmt_vec(char* buf, std::size_t n, const Vec3& p, const double* vals, int count) {
    int off = std::snprintf(buf, n, "%.17g,%.17g,%.17g", p.x, p.y, p.z);
    for (int k = 0; k < count; ++k)
        off += std::snprintf(buf + off, n - off, ",%.17g", vals[k]);
    off += std::snprintf(buf + off, n - off, "\n");
    return off;
}

}  // namespace

void write_vector_csv(const std::string& path, const SampledVectorField& field) {
    const GradedGrid& g = *field.grid;
    write_csv(path, "x,y,z,vx,vy,vz", g, [&](std::size_t i, char* buf, std::size_t n) {
        const Vec3& v = field.values[i];
        const double vals[3] = {v.x, v.y, v.z};
        return fmt_vec(buf, n, g.point(i), vals, 3);
    });
}

void write_scalar_csv(const std::string& path, const SampledScalarField& field) {
    const GradedGrid& g = *field.grid;
    write_csv(path, "x,y,z,s", g, [&](std::size_t i, char* buf, std::size_t n) {
        const double vals[1] = {field.values[i]};
        return fmt_vec(buf, n, g.point(i), vals, 1);
    });
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string tok;
    std::istringstream ss(line);
    while (std::getline(ss, tok, ',')) out.push_back(tok);
    return out;
}

// Index of t in the deduplicated ascending axis (tolerance-matched).
int axis_index(const std::vector<double>& axis, double t, double tol) {
    auto it = std::lower_bound(axis.begin(), axis.end(), t - tol);
    if (it == axis.end() || std::abs(*it - t) > tol) return -1;
    return static_cast<int>(it - axis.begin());
}

std::vector<double> dedup_axis(std::vector<double> v, double tol) {
    std::sort(v.begin(), v.end());
    std::vector<double> out;
    for (double t : v)
        if (out.empty() || t - out.back() > tol) out.push_back(t);
    return out;
}

}  // namespace

FlowSnapshot read_flow_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open: " + path);
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("empty CSV: " + path);
    const auto header = split_csv_line(line);
    bool has_p = false;
    if (header.size() == 7 && header[6] == "p") {
        has_p = true;
    } else if (header.size() != 6) {
        throw ConfigError("unrecognized CSV header in " + path);
    }

    std::vector<Vec3> pts;
    std::vector<Vec3> vel;
    std::vector<double> pre;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto cols = split_csv_line(line);
        if (cols.size() != header.size())
            throw ConfigError("ragged CSV row in " + path);
        double c[7] = {};
        for (std::size_t k = 0; k < cols.size(); ++k) c[k] = std::stod(cols[k]);
        pts.push_back({c[0], c[1], c[2]});
        vel.push_back({c[3], c[4], c[5]});
        if (has_p) pre.push_back(c[6]);
    }
    if (pts.empty()) throw ConfigError("CSV has no data rows: " + path);

    // Recover the (r, mu, phi) product structure.
    std::vector<double> rs, mus, phis;
    rs.reserve(pts.size());
    double r_scale = 0.0;
    for (const Vec3& p : pts) r_scale = std::max(r_scale, norm(p));
    const double rtol = 1e-9 * r_scale, atol = 1e-9;
    for (const Vec3& p : pts) {
        const double r = norm(p);
        rs.push_back(r);
        mus.push_back(p.z / r);
        phis.push_back(std::atan2(p.y, p.x) < 0 ? std::atan2(p.y, p.x) + 2 * M_PI
                                                : std::atan2(p.y, p.x));
    }
    const auto r_axis = dedup_axis(rs, rtol);
    const auto mu_axis = dedup_axis(mus, atol);
    const auto phi_axis = dedup_axis(phis, atol);
    const std::size_t expect = r_axis.size() * mu_axis.size() * phi_axis.size();
    if (expect != pts.size())
        throw ConfigError("CSV cloud is not a full spherical product grid: " + path);

    auto grid = std::make_shared<GradedGrid>();
    GradedGrid& g = *grid;
    g.r_min = r_axis.front();
    g.r_max = r_axis.back();
    g.requested_r_max = g.r_max;
    g.n_theta = static_cast<int>(mu_axis.size());
    g.n_phi = static_cast<int>(phi_axis.size());
    g.n_shells = static_cast<int>(r_axis.size() + 1) / 2;
    g.ratio = r_axis.size() > 1 ? r_axis[1] / r_axis[0] : 1.0;
    g.r_nodes = r_axis;
    g.cos_theta_nodes = mu_axis;
    g.phi_nodes = phi_axis;
    g.phi_weight = 2.0 * M_PI / g.n_phi;
    g.log_r_nodes_.resize(r_axis.size());
    for (std::size_t i = 0; i < r_axis.size(); ++i) g.log_r_nodes_[i] = std::log(r_axis[i]);

    // Approximate quadrature data (cell products); reconstructed snapshots
    // are interpolation sources, not volume rules.
    g.r_weights.assign(r_axis.size(), 0.0);
    g.shell_edges.assign(r_axis.size() + 1, 0.0);
    for (std::size_t i = 0; i + 1 < r_axis.size(); ++i)
        g.shell_edges[i + 1] = std::sqrt(r_axis[i] * r_axis[i + 1]);
    g.shell_edges[0] = r_axis.front() * r_axis.front() / g.shell_edges[1];
    g.shell_edges[r_axis.size()] =
        r_axis.back() * r_axis.back() / g.shell_edges[r_axis.size() - 1];
    for (std::size_t i = 0; i < r_axis.size(); ++i) {
        const double a = g.shell_edges[i], b = g.shell_edges[i + 1];
        g.r_weights[i] = (b * b * b - a * a * a) / 3.0;
    }
    g.mu_edges_.assign(mu_axis.size() + 1, 0.0);
    g.mu_edges_[0] = -1.0;
    g.mu_edges_[mu_axis.size()] = 1.0;
    for (std::size_t i = 1; i < mu_axis.size(); ++i)
        g.mu_edges_[i] = 0.5 * (mu_axis[i - 1] + mu_axis[i]);
    g.cos_theta_weights.assign(mu_axis.size(), 0.0);
    for (std::size_t i = 0; i < mu_axis.size(); ++i)
        g.cos_theta_weights[i] = g.mu_edges_[i + 1] - g.mu_edges_[i];

    const std::size_t n = pts.size();
    g.px.resize(n);
    g.py.resize(n);
    g.pz.resize(n);
    g.weight.resize(n);
    g.cell_diam_.assign(n, 0.0);

    FlowSnapshot snap;
    snap.grid = grid;
    snap.has_pressure = has_p;
    SampledVectorField u(grid);
    SampledScalarField p(grid);

    std::vector<char> seen(n, 0);
    for (std::size_t k = 0; k < n; ++k) {
        const int ir = axis_index(r_axis, rs[k], rtol);
        const int it = axis_index(mu_axis, mus[k], atol);
        const int ip = axis_index(phi_axis, phis[k], atol);
        if (ir < 0 || it < 0 || ip < 0)
            throw ConfigError("CSV point does not sit on the recovered axes: " + path);
        const std::size_t idx = g.node_index(ir, it, ip);
        if (seen[idx]) throw ConfigError("duplicate CSV grid point: " + path);
        seen[idx] = 1;
        g.px[idx] = pts[k].x;
        g.py[idx] = pts[k].y;
        g.pz[idx] = pts[k].z;
        g.weight[idx] = g.r_weights[ir] * g.cos_theta_weights[it] * g.phi_weight;
        u.values[idx] = vel[k];
        if (has_p) p.values[idx] = pre[k];
    }
    u.fit_tail(1.0);
    if (has_p) p.fit_tail(2.0);
    snap.velocity = std::move(u);
    snap.pressure = std::move(p);
    return snap;
}

}  // namespace lasym
