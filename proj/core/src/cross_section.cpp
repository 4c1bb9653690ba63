#include "trapmodes/cross_section.hpp"

#include "trapmodes/error.hpp"
#include "trapmodes/fem.hpp"
#include "trapmodes/lanczos.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace trapmodes::problems {

using mesh::Point;

namespace {

constexpr double pi = std::numbers::pi;

double cross(const Point& o, const Point& a, const Point& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

bool segments_cross(const Point& p1, const Point& p2, const Point& q1, const Point& q2) {
    const double d1 = cross(q1, q2, p1), d2 = cross(q1, q2, p2);
    const double d3 = cross(p1, p2, q1), d4 = cross(p1, p2, q2);
    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) return true;
    auto on = [](const Point& a, const Point& b, const Point& c, double d) {
        return d == 0.0 && std::min(a[0], b[0]) <= c[0] && c[0] <= std::max(a[0], b[0]) &&
               std::min(a[1], b[1]) <= c[1] && c[1] <= std::max(a[1], b[1]);
    };
    return on(q1, q2, p1, d1) || on(q1, q2, p2, d2) || on(p1, p2, q1, d3) || on(p1, p2, q2, d4);
}

bool inside_triangle(const Point& p, const Point& a, const Point& b, const Point& c) {
    return cross(a, b, p) >= 0 && cross(b, c, p) >= 0 && cross(c, a, p) >= 0;
}

}  // namespace

const char* to_string(CrossSectionSpec::Kind k) {
    switch (k) {
        case CrossSectionSpec::Kind::interval: return "interval";
        case CrossSectionSpec::Kind::half_interval: return "half_interval";
        case CrossSectionSpec::Kind::polygon: return "polygon";
    }
    return "?";
}

double CrossSectionEigens::phi(int p, double eta) const {
    if (!analytic()) throw PreconditionError("phi: polygon eigenfunctions are FEM fields");
    if (p < 1) throw DomainError("phi: mode index starts at 1");
    if (spec.kind == CrossSectionSpec::Kind::interval) return std::sqrt(2.0) * std::sin(p * pi * eta);
    return 2.0 * std::sin((2 * p - 1) * pi * (eta - 0.5));
}

double CrossSectionEigens::dphi(int p, double eta) const {
    if (!analytic()) throw PreconditionError("dphi: polygon eigenfunctions are FEM fields");
    if (p < 1) throw DomainError("dphi: mode index starts at 1");
    if (spec.kind == CrossSectionSpec::Kind::interval) return std::sqrt(2.0) * p * pi * std::cos(p * pi * eta);
    const double w = (2 * p - 1) * pi;
    return 2.0 * w * std::cos(w * (eta - 0.5));
}

void validate_polygon(const std::vector<Point>& v) {
    const int n = int(v.size());
    if (n < 3) throw GeometryError("polygon needs at least 3 vertices");
    double area2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const Point& a = v[i];
        const Point& b = v[(i + 1) % n];
        area2 += a[0] * b[1] - b[0] * a[1];
        if (a == b) throw GeometryError("polygon has a repeated vertex");
    }
    if (!(area2 > 0.0)) throw GeometryError("polygon must be counterclockwise with positive area");
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            if (j == i + 1 || (i == 0 && j == n - 1)) continue;
            if (segments_cross(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n])) {
                std::ostringstream msg;
                msg << "polygon is not simple: edges " << i << " and " << j << " intersect";
                throw GeometryError(msg.str());
            }
        }
}

mesh::Mesh mesh_polygon(const std::vector<Point>& vertices, int refinements) {
    validate_polygon(vertices);
    mesh::Mesh m;
    m.nodes = vertices;
    std::vector<int> ring(vertices.size());
    for (std::size_t i = 0; i < ring.size(); ++i) ring[i] = int(i);
    while (ring.size() > 3) {
        const int r = int(ring.size());
        bool clipped = false;
        for (int i = 0; i < r && !clipped; ++i) {
            const int a = ring[(i + r - 1) % r], b = ring[i], c = ring[(i + 1) % r];
            if (!(cross(vertices[a], vertices[b], vertices[c]) > 0.0)) continue;
            bool empty = true;
            for (int q : ring)
                if (q != a && q != b && q != c && inside_triangle(vertices[q], vertices[a], vertices[b], vertices[c])) {
                    empty = false;
                    break;
                }
            if (!empty) continue;
            m.triangles.push_back({a, b, c});
            ring.erase(ring.begin() + i);
            clipped = true;
        }
        if (!clipped) throw GeometryError("ear clipping failed: no ear found");
    }
    m.triangles.push_back({ring[0], ring[1], ring[2]});
    for (std::size_t i = 0; i < vertices.size(); ++i)
        m.boundary.push_back({int(i), int((i + 1) % vertices.size()), mesh::BoundaryTag::lateral});
    m.resolution = {1, 1};
    for (int r = 0; r < refinements; ++r) m = mesh::refine_uniform(m);
    mesh::validate_mesh(m);
    return m;
}

CrossSectionEigens cross_section_eigens(const CrossSectionSpec& spec, int k, int refinements) {
    if (k < 1) throw PreconditionError("cross_section_eigens: k must be at least 1");
    CrossSectionEigens out;
    out.spec = spec;
    if (spec.kind == CrossSectionSpec::Kind::interval) {
        for (int p = 1; p <= k; ++p) out.mu.push_back(p * p * pi * pi);
        return out;
    }
    if (spec.kind == CrossSectionSpec::Kind::half_interval) {
        for (int p = 1; p <= k; ++p) out.mu.push_back((2 * p - 1) * (2 * p - 1) * pi * pi);
        return out;
    }

    out.mesh = mesh_polygon(spec.vertices, refinements);
    const mesh::BoundaryConditions bc{{mesh::BoundaryTag::lateral, mesh::BcType::dirichlet}};
    const auto sys = fem::assemble_system<double>(out.mesh, bc);
    if (k > sys.n_free) throw PreconditionError("cross_section_eigens: k exceeds the free DOFs of the polygon mesh");
    eig::EigenOptions opt;
    opt.k = k;
    const auto sol = eig::smallest_eigenpairs<double>(sys.K, sys.M, opt);
    for (int p = 0; p < k; ++p) {
        out.mu.push_back(sol.eigenvalues[p]);
        out.residuals.push_back(sol.residuals[p]);
        auto nodal = fem::to_nodal(sys, sol.eigenvectors[p]);
        const auto peak = std::max_element(nodal.begin(), nodal.end(),
                                           [](double x, double y) { return std::abs(x) < std::abs(y); });
        if (*peak < 0)
            for (auto& x : nodal) x = -x;
        out.nodal.push_back(std::move(nodal));
    }
    return out;
}

}  // namespace trapmodes::problems
