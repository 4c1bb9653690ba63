#pragma once

#include "trapmodes/cross_section.hpp"
#include "trapmodes/fem.hpp"
#include "trapmodes/lanczos.hpp"

#include <optional>
#include <string>
#include <vector>

namespace trapmodes::problems {

// Boundary-condition presets for thin domains:
//   mixed         Dirichlet lateral, Neumann ends
//   all_dirichlet / all_neumann as named
//   half_neumann  Dirichlet on the symmetry face, Neumann elsewhere
enum class ThinBc { mixed, all_dirichlet, all_neumann, half_neumann };
// Presets for semi-cylinders. The truncation face follows SolveOptions.
//   mixed         Dirichlet lateral, Neumann end
//   all_dirichlet Dirichlet lateral and end (cane-head problems)
//   half_mixed    Dirichlet symmetry face, Neumann lateral and end
enum class SemiBc { mixed, all_dirichlet, half_mixed };

const char* to_string(ThinBc b);
const char* to_string(SemiBc b);
ThinBc parse_thin_bc(const std::string& s);
SemiBc parse_semi_bc(const std::string& s);

struct SolveOptions {
    int k = 1;
    double tol = 1e-10;
    std::optional<double> shift;                    // default: 0, or -1 for pure Neumann pencils
    std::uint64_t seed = eig::default_seed;
    int max_restarts = 12;
    mesh::BcType truncation = mesh::BcType::dirichlet;
    mesh::BcType symmetry_along = mesh::BcType::neumann;  // face z = 0 of along_half cuts
    double trapped_margin = 1e-3;                   // relative to the cutoff
};

template <class Real>
struct SpectrumResult {
    mesh::DomainSpec spec;  // bc filled in
    mesh::Resolution resolution;
    mesh::Mesh mesh;
    fem::AssembledSystem<Real> system;
    eig::EigenSolution<Real> solution;
    double lambda_scale = 1.0;  // physical λ = lambda_scale × computed eigenvalue
    double wall_seconds = 0.0;

    std::vector<double> physical_eigenvalues() const;
};

template <class Real>
struct SemicylinderResult {
    SpectrumResult<Real> spectrum;
    double cutoff = 0.0;               // μ₁ (or μ₁ of the half cross-section)
    double margin = 0.0;               // absolute margin below the cutoff
    std::vector<bool> trapped;         // per eigenvalue
    std::string caveat;
};

mesh::BoundaryConditions thin_conditions(const mesh::DomainSpec& spec, ThinBc kind, const SolveOptions& opt);
mesh::BoundaryConditions semi_conditions(const mesh::DomainSpec& spec, SemiBc kind, const SolveOptions& opt);

// Mesh, assemble and solve a spec whose bc map is already complete.
template <class Real>
SpectrumResult<Real> solve_spectrum(const mesh::DomainSpec& spec, mesh::Resolution resolution, const SolveOptions& opt);

template <class Real>
SpectrumResult<Real> solve_thin(mesh::DomainSpec spec, ThinBc kind, mesh::Resolution resolution, const SolveOptions& opt);

template <class Real>
SemicylinderResult<Real> solve_semicylinder(mesh::DomainSpec spec, SemiBc kind, mesh::Resolution resolution,
                                            const SolveOptions& opt);

// All-Dirichlet curved trapezoid; the default shift is the strict lower
// bound π²/(h max H)² of the spectrum.
template <class Real>
SpectrumResult<Real> solve_trapezoid(mesh::DomainSpec spec, mesh::Resolution resolution, const SolveOptions& opt);

// Straight thin rectangle [0,h]×[-1,1], Dirichlet lateral, Neumann ends:
// λ = p²π²/h² + π²q²/4, u = A sin(pπy/h) cos(πq(z+1)/2) with ‖u‖ = 1.
// q = 0 (constant in z) is admitted since it satisfies the Neumann ends.
struct StraightReference {
    double h = 0.0;
    int p = 1;
    int q = 0;
    double mu = 0.0;
    double lambda = 0.0;
    double amplitude = 0.0;
    double eval(double y, double z) const;
};

StraightReference reference_straight(double h, int p, int q);

// Harmonic-oscillator limit of the thin trapezoid with profile H(z):
// λ_j ≈ π² H(0)⁻² h⁻² + Λ_j h⁻¹ with Λ_j = √B (2j + 1), b = -H''(0) from
// central differences. Expanding π²/(h H(z))² about z = 0 gives the
// oscillator coefficient B = π² b H(0)⁻³; B_without_pi = b H(0)⁻³ is the
// same expression with the π² dropped, kept for comparison.
struct TrapezoidLimit {
    double H0 = 0.0;
    double b = 0.0;
    double B = 0.0;
    double B_without_pi = 0.0;
    double Lambda_without_pi = 0.0;
    double leading = 0.0;  // π² H(0)⁻²
    double Lambda = 0.0;   // Λ_j
    int j = 0;
};

TrapezoidLimit reference_trapezoid_limit(const mesh::ProfileSpec& H_of_z, int j);

}  // namespace trapmodes::problems
