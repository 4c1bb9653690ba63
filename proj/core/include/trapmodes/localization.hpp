#pragma once

#include "trapmodes/fit.hpp"
#include "trapmodes/mesh.hpp"

#include <array>
#include <optional>
#include <vector>

namespace trapmodes::asymptotics {

// Thin-domain node coordinates converted to the given frame.
std::vector<mesh::Point> physical_nodes(const mesh::Mesh& m, double h, mesh::Frame frame);
std::vector<mesh::Point> stretched_nodes(const mesh::Mesh& m, double h, mesh::Frame frame);

// Fraction of ∫|u|² with physical z in each band. The P1 field is squared
// exactly: triangles are clipped at the band edges and integrated with the
// edge-midpoint rule, which is exact for quadratics.
std::vector<double> band_masses(const mesh::Mesh& m, const std::vector<double>& nodal, double h, mesh::Frame frame,
                                const std::vector<double>& band_edges);

// Three bands [-1,-1/3), [-1/3,1/3], (1/3,1] (outer bands unbounded so the
// curved ends are included).
std::array<double, 3> three_band_masses(const mesh::Mesh& m, const std::vector<double>& nodal, double h,
                                        mesh::Frame frame);

// max_{|z| <= 1/3} |u| / max |u| over nodes.
double interior_sup_ratio(const mesh::Mesh& m, const std::vector<double>& nodal, double h, mesh::Frame frame);

// P1 evaluation at arbitrary points: the containing triangle, or the
// nearest one (clamped barycentrics) for points just outside.
class FieldSampler {
public:
    FieldSampler(const std::vector<mesh::Point>& nodes, const std::vector<mesh::Triangle>& triangles,
                 const std::vector<double>& nodal);
    double operator()(const mesh::Point& p) const;

private:
    std::vector<mesh::Point> nodes_;
    std::vector<mesh::Triangle> tris_;
    std::vector<double> nodal_;
    double x0_ = 0.0, y0_ = 0.0, dx_ = 1.0, dy_ = 1.0;
    int nx_ = 1, ny_ = 1;
    std::vector<std::vector<int>> cells_;
};

struct MismatchWindow {
    double zeta_max = 4.0;  // window ζ ∈ [-H(η), zeta_max]
    double eta_lo = 0.0;
    double eta_hi = 1.0;
    int n_eta = 41;
    int n_zeta = 161;
};

// L² distance between two end profiles after sign alignment (largest |value|
// positive) and normalization on the window; result in [0, 2].
// Both fields are given in stretched coordinates (η, ζ).
double boundary_layer_mismatch(const std::vector<mesh::Point>& nodes_a, const std::vector<mesh::Triangle>& tris_a,
                               const std::vector<double>& field_a, const std::vector<mesh::Point>& nodes_b,
                               const std::vector<mesh::Triangle>& tris_b, const std::vector<double>& field_b,
                               const mesh::ProfileSpec& H, const MismatchWindow& window);

struct LocalizationMetrics {
    std::array<double, 3> band_mass{};
    double sup_ratio = 0.0;
    std::optional<double> mismatch;
};

struct DecayFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    int stations = 0;
    double window_lo = 0.0;
    double window_hi = 0.0;
};

// Cross-sectional L² norm of a semi-cylinder field on every complete grid
// row (nodes sharing one exact ζ) in [window_lo, window_hi], then the slope
// of log-norm against ζ. Needs at least 10 stations.
DecayFit mode_decay_rate(const mesh::Mesh& semicylinder, const std::vector<double>& nodal, double window_lo,
                         double window_hi);
// Default window [c_H + 1, L - 1] with c_H = max|H|.
DecayFit mode_decay_rate(const mesh::Mesh& semicylinder, const std::vector<double>& nodal, const mesh::ProfileSpec& H,
                         double L);

// Sign alignment used for all eigenfunction comparisons.
void align_sign(std::vector<double>& nodal);

}  // namespace trapmodes::asymptotics
