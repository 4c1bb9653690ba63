#pragma once

#include "trapmodes/domain.hpp"

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

namespace trapmodes::mesh {

struct Resolution {
    int n_across = 2;
    int n_along = 2;
};

struct BoundaryEdge {
    int a = 0;
    int b = 0;
    BoundaryTag tag = BoundaryTag::lateral;
};

using Point = std::array<double, 2>;
using Triangle = std::array<int, 3>;

struct Mesh {
    std::vector<Point> nodes;
    std::vector<Triangle> triangles;  // counterclockwise
    std::vector<BoundaryEdge> boundary;
    Resolution resolution;
};

Mesh build_mesh(const DomainSpec& spec, Resolution resolution);
Mesh refine_uniform(const Mesh& mesh);

struct MeshStats {
    std::size_t n_nodes = 0;
    std::size_t n_triangles = 0;
    std::size_t n_boundary_edges = 0;
    double total_area = 0.0;
    double min_angle_deg = 0.0;
    double max_aspect_ratio = 0.0;  // longest edge / shortest altitude
};

MeshStats mesh_stats(const Mesh& mesh);

// Positive areas, edge-manifold, closed boundary loops, every boundary edge
// tagged exactly once, no duplicate nodes within 1e-12. Throws GeometryError.
void validate_mesh(const Mesh& mesh);

double signed_area(const Mesh& mesh, const Triangle& t);

// Text format:
//   nodes <N>
//   <x> <y>                (%.17g, one line per node)
//   triangles <T>
//   <i> <j> <k>            (0-based, counterclockwise)
//   boundary <E>
//   <i> <j> <tag>
void write_mesh(std::ostream& out, const Mesh& mesh);
Mesh read_mesh(std::istream& in);

// Node field: `field <name> <N>` followed by one %.17g value per node.
void write_field(std::ostream& out, const std::string& name, const std::vector<double>& nodal);

// Map stretched (η, ζ) to physical (y, z) for thin domains: y = hη, z = 1 - hζ.
Point stretched_to_physical(double h, const Point& p);

// Physical z of a node of a thin-domain mesh built in the given frame.
inline double physical_z(double h, Frame frame, const Point& p) {
    return frame == Frame::stretched ? 1.0 - h * p[1] : p[1];
}

}  // namespace trapmodes::mesh
