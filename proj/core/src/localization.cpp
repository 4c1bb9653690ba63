#include "trapmodes/localization.hpp"

#include "trapmodes/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace trapmodes::asymptotics {

using mesh::Point;

namespace {

struct Vertex {
    double x, y, u;
};

// Keep the part of a convex polygon with sign·(z - level) >= 0 (z is the
// second coordinate); u is carried linearly.
std::vector<Vertex> clip(const std::vector<Vertex>& poly, double level, double sign) {
    std::vector<Vertex> out;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vertex& a = poly[i];
        const Vertex& b = poly[(i + 1) % n];
        const double da = sign * (a.y - level), db = sign * (b.y - level);
        if (da >= 0) out.push_back(a);
        if ((da >= 0) != (db >= 0)) {
            const double t = da / (da - db);
            out.push_back({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y), a.u + t * (b.u - a.u)});
        }
    }
    return out;
}

// ∫ u² over a convex polygon by fan triangulation; the edge-midpoint rule is
// exact for the quadratic u².
double integrate_square(const std::vector<Vertex>& poly) {
    double sum = 0.0;
    for (std::size_t i = 1; i + 1 < poly.size(); ++i) {
        const Vertex& a = poly[0];
        const Vertex& b = poly[i];
        const Vertex& c = poly[i + 1];
        const double area = std::abs((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y)) / 2.0;
        const double m1 = (a.u + b.u) / 2, m2 = (b.u + c.u) / 2, m3 = (c.u + a.u) / 2;
        sum += area / 3.0 * (m1 * m1 + m2 * m2 + m3 * m3);
    }
    return sum;
}

}  // namespace

std::vector<Point> physical_nodes(const mesh::Mesh& m, double h, mesh::Frame frame) {
    if (frame == mesh::Frame::physical) return m.nodes;
    std::vector<Point> out;
    out.reserve(m.nodes.size());
    for (const auto& p : m.nodes) out.push_back(mesh::stretched_to_physical(h, p));
    return out;
}

std::vector<Point> stretched_nodes(const mesh::Mesh& m, double h, mesh::Frame frame) {
    if (frame == mesh::Frame::stretched) return m.nodes;
    std::vector<Point> out;
    out.reserve(m.nodes.size());
    for (const auto& p : m.nodes) out.push_back({p[0] / h, (1.0 - p[1]) / h});
    return out;
}

std::vector<double> band_masses(const mesh::Mesh& m, const std::vector<double>& nodal, double h, mesh::Frame frame,
                                const std::vector<double>& edges) {
    if (nodal.size() != m.nodes.size()) throw DomainError("band_masses: field length differs from the node count");
    for (std::size_t i = 1; i < edges.size(); ++i)
        if (!(edges[i] > edges[i - 1])) throw DomainError("band_masses: band edges must increase");
    const auto nodes = physical_nodes(m, h, frame);
    std::vector<double> mass(edges.size() + 1, 0.0);
    for (const auto& t : m.triangles) {
        std::vector<Vertex> rest;
        for (int a = 0; a < 3; ++a) rest.push_back({nodes[t[a]][0], nodes[t[a]][1], nodal[t[a]]});
        double zmin = rest[0].y, zmax = rest[0].y;
        for (const auto& v : rest) {
            zmin = std::min(zmin, v.y);
            zmax = std::max(zmax, v.y);
        }
        for (std::size_t b = 0; b < edges.size() && rest.size() >= 3; ++b) {
            if (zmin >= edges[b]) continue;
            if (zmax <= edges[b]) {
                mass[b] += integrate_square(rest);
                rest.clear();
                break;
            }
            mass[b] += integrate_square(clip(rest, edges[b], -1.0));
            rest = clip(rest, edges[b], 1.0);
        }
        if (rest.size() >= 3) mass[edges.size()] += integrate_square(rest);
    }
    double total = 0.0;
    for (double x : mass) total += x;
    if (!(total > 0.0)) throw DomainError("band_masses: field is identically zero");
    for (double& x : mass) x /= total;
    return mass;
}

std::array<double, 3> three_band_masses(const mesh::Mesh& m, const std::vector<double>& nodal, double h,
                                        mesh::Frame frame) {
    const auto b = band_masses(m, nodal, h, frame, {-1.0 / 3.0, 1.0 / 3.0});
    return {b[0], b[1], b[2]};
}

double interior_sup_ratio(const mesh::Mesh& m, const std::vector<double>& nodal, double h, mesh::Frame frame) {
    const auto nodes = physical_nodes(m, h, frame);
    double inner = 0.0, all = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const double a = std::abs(nodal[i]);
        all = std::max(all, a);
        if (std::abs(nodes[i][1]) <= 1.0 / 3.0) inner = std::max(inner, a);
    }
    if (!(all > 0.0)) throw DomainError("interior_sup_ratio: field is identically zero");
    return inner / all;
}

void align_sign(std::vector<double>& nodal) {
    if (nodal.empty()) return;
    const auto peak =
        std::max_element(nodal.begin(), nodal.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });
    if (*peak < 0)
        for (double& x : nodal) x = -x;
}

FieldSampler::FieldSampler(const std::vector<Point>& nodes, const std::vector<mesh::Triangle>& triangles,
                           const std::vector<double>& nodal)
    : nodes_(nodes), tris_(triangles), nodal_(nodal) {
    if (nodal_.size() != nodes_.size()) throw DomainError("FieldSampler: field length differs from the node count");
    if (tris_.empty()) throw DomainError("FieldSampler: empty mesh");
    double x1 = -std::numeric_limits<double>::infinity(), y1 = x1;
    x0_ = y0_ = std::numeric_limits<double>::infinity();
    for (const auto& p : nodes_) {
        x0_ = std::min(x0_, p[0]);
        y0_ = std::min(y0_, p[1]);
        x1 = std::max(x1, p[0]);
        y1 = std::max(y1, p[1]);
    }
    const double cells = std::max(1.0, std::sqrt(double(tris_.size()) / 2.0));
    const double w = std::max(x1 - x0_, 1e-300), hgt = std::max(y1 - y0_, 1e-300);
    const double side = std::sqrt(w * hgt / (cells * cells));
    nx_ = std::max(1, int(std::ceil(w / side)));
    ny_ = std::max(1, int(std::ceil(hgt / side)));
    dx_ = w / nx_;
    dy_ = hgt / ny_;
    cells_.assign(std::size_t(nx_) * ny_, {});
    for (std::size_t t = 0; t < tris_.size(); ++t) {
        double a0 = 1e300, a1 = -1e300, b0 = 1e300, b1 = -1e300;
        for (int v : tris_[t]) {
            a0 = std::min(a0, nodes_[v][0]);
            a1 = std::max(a1, nodes_[v][0]);
            b0 = std::min(b0, nodes_[v][1]);
            b1 = std::max(b1, nodes_[v][1]);
        }
        const int i0 = std::clamp(int((a0 - x0_) / dx_), 0, nx_ - 1), i1 = std::clamp(int((a1 - x0_) / dx_), 0, nx_ - 1);
        const int j0 = std::clamp(int((b0 - y0_) / dy_), 0, ny_ - 1), j1 = std::clamp(int((b1 - y0_) / dy_), 0, ny_ - 1);
        for (int i = i0; i <= i1; ++i)
            for (int j = j0; j <= j1; ++j) cells_[std::size_t(j) * nx_ + i].push_back(int(t));
    }
}

double FieldSampler::operator()(const Point& p) const {
    const int ci = std::clamp(int((p[0] - x0_) / dx_), 0, nx_ - 1);
    const int cj = std::clamp(int((p[1] - y0_) / dy_), 0, ny_ - 1);
    double best_gap = std::numeric_limits<double>::infinity();
    double best_value = 0.0;
    for (int ring = 0; ring <= std::max(nx_, ny_); ++ring) {
        for (int i = ci - ring; i <= ci + ring; ++i)
            for (int j = cj - ring; j <= cj + ring; ++j) {
                if (i < 0 || j < 0 || i >= nx_ || j >= ny_) continue;
                if (std::max(std::abs(i - ci), std::abs(j - cj)) != ring) continue;
                for (int t : cells_[std::size_t(j) * nx_ + i]) {
                    const auto& a = nodes_[tris_[t][0]];
                    const auto& b = nodes_[tris_[t][1]];
                    const auto& c = nodes_[tris_[t][2]];
                    const double det = (b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]);
                    double l1 = ((p[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (p[1] - a[1])) / det;
                    double l2 = ((b[0] - a[0]) * (p[1] - a[1]) - (p[0] - a[0]) * (b[1] - a[1])) / det;
                    double l0 = 1.0 - l1 - l2;
                    const double gap = std::max({0.0, -l0, -l1, -l2});
                    if (gap < best_gap) {
                        l0 = std::max(l0, 0.0);
                        l1 = std::max(l1, 0.0);
                        l2 = std::max(l2, 0.0);
                        const double s = l0 + l1 + l2;
                        best_gap = gap;
                        best_value = (l0 * nodal_[tris_[t][0]] + l1 * nodal_[tris_[t][1]] + l2 * nodal_[tris_[t][2]]) / s;
                    }
                }
            }
        if (best_gap == 0.0 || (ring >= 1 && best_gap < std::numeric_limits<double>::infinity())) break;
    }
    return best_value;
}

double boundary_layer_mismatch(const std::vector<Point>& nodes_a, const std::vector<mesh::Triangle>& tris_a,
                               const std::vector<double>& field_a, const std::vector<Point>& nodes_b,
                               const std::vector<mesh::Triangle>& tris_b, const std::vector<double>& field_b,
                               const mesh::ProfileSpec& H, const MismatchWindow& w) {
    if (w.n_eta < 2 || w.n_zeta < 2) throw DomainError("boundary_layer_mismatch: window needs at least 2x2 samples");
    const FieldSampler sa(nodes_a, tris_a, field_a), sb(nodes_b, tris_b, field_b);
    std::vector<double> va, vb, weight;
    for (int i = 0; i < w.n_eta; ++i) {
        const double eta = w.eta_lo + (w.eta_hi - w.eta_lo) * i / (w.n_eta - 1);
        const double z0 = -mesh::profile_eval(H, eta);
        if (!(w.zeta_max > z0)) throw DomainError("boundary_layer_mismatch: window top lies below the end");
        // Trapezoid weights on the mapped grid (Jacobian zeta_max - z0).
        const double we = (i == 0 || i == w.n_eta - 1) ? 0.5 : 1.0;
        for (int j = 0; j < w.n_zeta; ++j) {
            const double zeta = z0 + (w.zeta_max - z0) * j / (w.n_zeta - 1);
            const double wz = (j == 0 || j == w.n_zeta - 1) ? 0.5 : 1.0;
            va.push_back(sa({eta, zeta}));
            vb.push_back(sb({eta, zeta}));
            weight.push_back(we * wz * (w.zeta_max - z0));
        }
    }
    auto normalize = [&weight](std::vector<double>& v) {
        align_sign(v);
        double n2 = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) n2 += weight[i] * v[i] * v[i];
        if (!(n2 > 0.0)) throw DomainError("boundary_layer_mismatch: field vanishes on the window");
        const double s = 1.0 / std::sqrt(n2);
        for (double& x : v) x *= s;
    };
    normalize(va);
    normalize(vb);
    double d2 = 0.0;
    for (std::size_t i = 0; i < va.size(); ++i) d2 += weight[i] * (va[i] - vb[i]) * (va[i] - vb[i]);
    return std::min(2.0, std::sqrt(d2));
}

DecayFit mode_decay_rate(const mesh::Mesh& m, const std::vector<double>& nodal, double lo, double hi) {
    if (nodal.size() != m.nodes.size()) throw DomainError("mode_decay_rate: field length differs from the node count");
    if (!(hi > lo)) throw PreconditionError("mode_decay_rate: empty window");
    double eta_min = std::numeric_limits<double>::infinity(), eta_max = -eta_min;
    for (const auto& p : m.nodes) {
        eta_min = std::min(eta_min, p[0]);
        eta_max = std::max(eta_max, p[0]);
    }
    std::map<double, std::vector<std::pair<double, double>>> rows;
    for (std::size_t i = 0; i < m.nodes.size(); ++i) {
        const double zeta = m.nodes[i][1];
        if (zeta >= lo && zeta <= hi) rows[zeta].push_back({m.nodes[i][0], nodal[i]});
    }
    std::vector<double> zs, logs;
    for (auto& [zeta, row] : rows) {
        std::sort(row.begin(), row.end());
        if (row.size() < 2 || row.front().first != eta_min || row.back().first != eta_max) continue;
        double n2 = 0.0;
        for (std::size_t k = 0; k + 1 < row.size(); ++k) {
            const double a = row[k].second, b = row[k + 1].second;
            n2 += (row[k + 1].first - row[k].first) / 3.0 * (a * a + a * b + b * b);
        }
        if (!(n2 > 0.0)) continue;
        zs.push_back(zeta);
        logs.push_back(0.5 * std::log(n2));
    }
    if (zs.size() < 10)
        throw PreconditionError("mode_decay_rate: fewer than 10 complete grid rows in the decay window");
    const auto f = fit_linear(zs, logs);
    return {f.slope, f.intercept, f.r2, f.points, lo, hi};
}

DecayFit mode_decay_rate(const mesh::Mesh& m, const std::vector<double>& nodal, const mesh::ProfileSpec& H, double L) {
    const double c_H = mesh::profile_max_abs(H);
    return mode_decay_rate(m, nodal, c_H + 1.0, L - 1.0);
}

}  // namespace trapmodes::asymptotics
