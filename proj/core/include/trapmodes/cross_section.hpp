#pragma once

#include "trapmodes/mesh.hpp"

#include <vector>

namespace trapmodes::problems {

// Cross-section ω of the waveguide. The interval (0, 1) and its half (1/2, 1)
// are analytic; polygons are meshed and solved with P1 elements.
struct CrossSectionSpec {
    enum class Kind { interval, half_interval, polygon };
    Kind kind = Kind::interval;
    std::vector<mesh::Point> vertices;  // polygon only, counterclockwise

    static CrossSectionSpec interval() { return {}; }
    static CrossSectionSpec half_interval() { return {Kind::half_interval, {}}; }
    static CrossSectionSpec polygon(std::vector<mesh::Point> vertices) { return {Kind::polygon, std::move(vertices)}; }
};

const char* to_string(CrossSectionSpec::Kind k);

// Eigenpairs of the cross-section problem, L²(ω)-normalized.
//   interval:      Dirichlet at both ends, μ_p = p²π², φ_p = √2 sin(pπη)
//   half_interval: Dirichlet at η = 1/2, Neumann at η = 1,
//                  μ_p = (2p-1)²π², φ_p = 2 sin((2p-1)π(η - 1/2))
//   polygon:       Dirichlet on the whole boundary, FEM fields
struct CrossSectionEigens {
    CrossSectionSpec spec;
    std::vector<double> mu;

    // Polygon data: mesh and nodal eigenfunctions (zero on the boundary).
    mesh::Mesh mesh;
    std::vector<std::vector<double>> nodal;
    std::vector<double> residuals;

    bool analytic() const { return spec.kind != CrossSectionSpec::Kind::polygon; }
    double lo() const { return spec.kind == CrossSectionSpec::Kind::half_interval ? 0.5 : 0.0; }
    double hi() const { return 1.0; }

    // Analytic eigenfunction φ_p and its derivative (p is 1-based).
    double phi(int p, double eta) const;
    double dphi(int p, double eta) const;
};

// Ear-clipping triangulation followed by uniform refinement. Every boundary
// edge is tagged `lateral`.
mesh::Mesh mesh_polygon(const std::vector<mesh::Point>& vertices, int refinements);

// Throws GeometryError for self-intersecting, clockwise or degenerate polygons.
void validate_polygon(const std::vector<mesh::Point>& vertices);

CrossSectionEigens cross_section_eigens(const CrossSectionSpec& spec, int k, int refinements = 5);

}  // namespace trapmodes::problems
