#pragma once

#include "trapmodes/conditions.hpp"
#include "trapmodes/fit.hpp"
#include "trapmodes/localization.hpp"
#include "trapmodes/problems.hpp"

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace trapmodes::asymptotics {

// Grids for thin domains and semi-cylinders in stretched units: n_across
// cells across, `density` rows per unit ζ (n_along = density × length).
// Keep density a multiple of 3 so density·2/h is an integer for the usual
// h values (0.2, 0.15, 0.1, 0.075, 0.05). With `richardson` every point is
// also solved at (2 n_across, 2 density) and λ = (4 λ_fine - λ_coarse)/3.
struct ResolutionPolicy {
    int n_across = 16;
    int density = 24;
    bool richardson = true;
};

mesh::Resolution grid_for(const ResolutionPolicy& policy, double length, int level);

// Extended-precision pass: each eigenvalue is re-solved in Wide arithmetic
// on the coarse grid, with the shift just below the double estimate. Thin
// domain and semi-cylinder grids coincide node for node near the profiled
// end, so their difference measures the exponentially small deviation
// directly, free of discretization error.
struct PrecisionOptions {
    bool enabled = true;
    double tol = 1e-60;
    double shift_gap = 1e-9;  // relative distance of the shift below λ₁
};

// Λ∞ ≈ Λ(L₂) - (Λ(L₁) - Λ(L₂)) r/(1 - r), r = exp(-2κ(L₂ - L₁)).
template <class Real>
Real extrapolate_truncation(const Real& at_L1, const Real& at_L2, double kappa, double L1, double L2);

struct ReferenceSpectrum {
    double L1 = 0.0;
    double L2 = 0.0;
    double cutoff = 0.0;
    int trapped_count = 0;
    std::vector<double> Lambda;          // Richardson + truncation-extrapolated
    std::vector<double> Lambda_coarse;   // coarse grid, truncation-extrapolated
    std::vector<double> mesh_error;      // |Λ_fine - Λ_coarse| / 3
    std::vector<Wide> Lambda_wide;       // coarse grid, Wide, extrapolated (trapped only)
    std::vector<double> kappa;           // √(cutoff - Λ_p), trapped only
    std::vector<bool> trapped;
    mesh::Mesh mesh;                     // coarse grid at L₂
    std::vector<std::vector<double>> nodal;  // coarse eigenvectors at L₂ (Wide when enabled)
};

ReferenceSpectrum reference_spectrum(const std::function<mesh::DomainSpec(double L)>& semi, problems::SemiBc bc,
                                     int k, const ResolutionPolicy& policy, double L1, double L2,
                                     const problems::SolveOptions& solve, const PrecisionOptions& precision);

struct SweepRecord {
    double h = 0.0;
    mesh::Resolution resolution;
    mesh::Resolution resolution_fine;
    std::vector<double> lambda;              // physical λ_p (Richardson when enabled)
    std::vector<double> normalized;          // h² λ_p
    std::vector<double> mesh_error;          // Richardson error estimate of h² λ_p
    std::vector<double> reference;           // Λ^(p)
    std::vector<double> deviation;           // |h² λ_p - Λ^(p)| from the Richardson values
    std::vector<double> deviation_congruent; // same grid, Wide; NaN when not computed
    std::vector<std::string> deviation_decimal;
    std::vector<double> residuals;
    std::vector<LocalizationMetrics> localization;
    bool mesh_error_dominates = false;       // p = 1: mesh error above the deviation
    double wall_seconds = 0.0;
    std::vector<std::string> notes;
};

struct SweepSpec {
    std::function<mesh::DomainSpec(double h)> thin;  // stretched-frame thin domain
    problems::ThinBc thin_bc = problems::ThinBc::mixed;
    std::function<mesh::DomainSpec(double L)> semi;  // reference; empty for none
    problems::SemiBc semi_bc = problems::SemiBc::mixed;
    std::optional<double> reference_constant;        // analytic Λ when there is no semi-cylinder
    std::vector<double> hs;
    int k = 1;
    ResolutionPolicy policy;
    problems::SolveOptions solve;
    PrecisionOptions precision;
    std::optional<std::pair<double, double>> truncation;  // (L₁, L₂); default below
    MismatchWindow window;
    std::function<void(const SweepRecord&)> on_record;    // called as each point completes
};

// Default truncation pair: L₂ = ceil(2/h_min) + 8, L₁ = L₂ - 4, so the
// truncation error e^{-2κL} stays below the thin-domain deviation.
std::pair<double, double> default_truncation(const std::vector<double>& hs);

struct SweepResult {
    std::vector<SweepRecord> records;
    std::optional<ReferenceSpectrum> reference;
    std::optional<ExponentialFit> fit;            // p = 1, Richardson deviations
    std::optional<ExponentialFit> fit_congruent;  // p = 1, Wide deviations
    std::optional<std::string> failure;           // set when a solve aborted the sweep
    std::vector<std::string> notes;
};

SweepResult sweep_h(const SweepSpec& spec);

// Thin cylinder with symmetric ends H₊ = H₋ = H: the gap λ₂ - λ₁ between
// the even and odd combinations of the two end modes.
struct SplittingSpec {
    mesh::ProfileSpec H_plus;
    mesh::ProfileSpec H_minus;
    std::vector<double> hs;
    ResolutionPolicy policy;
    problems::SolveOptions solve;
    PrecisionOptions precision;
    double reference_L = 12.0;
    bool full_domain_check = true;
};

struct SplittingPoint {
    double h = 0.0;
    double lambda_even = 0.0;      // λ₁ from the half domain with a Neumann cut
    double lambda_odd = 0.0;       // λ₂ from the half domain with a Dirichlet cut
    double gap = 0.0;              // physical λ₂ - λ₁
    std::string gap_decimal;
    double x = 0.0;                // 2 h⁻¹ √(π² - Λ₁)
    double y = 0.0;                // log(h² gap / 2)
    double residual = 0.0;         // largest relative residual of the two solves
    bool used = true;
    bool ordered = true;           // λ₁ < λ₂
    std::optional<double> full_lambda1;
    std::optional<double> full_lambda2;
    std::optional<double> full_rel_diff1;
    std::optional<double> full_rel_diff2;
    std::string note;
};

struct SplittingReport {
    double Lambda1 = 0.0;
    double kappa = 0.0;
    std::vector<SplittingPoint> points;
    std::optional<LinearFit> fit;  // y against x; slope near -1 expected
    double F_estimate = 0.0;       // exp(intercept)
    std::vector<std::string> notes;
};

SplittingReport splitting_analysis(const SplittingSpec& spec);

struct TrapezoidPolicy {
    int n_across = 32;
    double along_per_width = 24.0;  // n_along = along_per_width · 2/√h
    bool richardson = true;
};

struct TrapezoidPoint {
    double h = 0.0;
    mesh::Resolution resolution;
    mesh::Resolution resolution_fine;
    std::vector<double> lambda;       // per requested j
    std::vector<double> correction;   // (h² λ_j - π² H(0)⁻²) / h
    std::vector<double> predicted;    // Λ_j
    std::vector<double> rel_error;
    std::vector<double> predicted_without_pi;  // √(b H(0)⁻³) (2j + 1)
    std::vector<double> rel_error_without_pi;
    std::vector<double> mass_fraction;  // |z| <= 3√h
    double wall_seconds = 0.0;
};

struct TrapezoidReport {
    problems::TrapezoidLimit limit;  // j = 0
    std::vector<int> js;
    std::vector<TrapezoidPoint> points;
    std::vector<std::string> notes;
};

TrapezoidReport trapezoid_series(const mesh::ProfileSpec& H_of_z, const std::vector<double>& hs,
                                 const std::vector<int>& js, const TrapezoidPolicy& policy,
                                 const problems::SolveOptions& solve);

// Neumann thin domain, even profile: an eigenvalue λ_{N(h)} close to
// h⁻² Λ^∧ of the half semi-cylinder, with N(h) growing as h → 0.
struct NeumannHalfSpec {
    mesh::ProfileSpec H;
    mesh::ProfileSpec H_minus = mesh::ProfileSpec::zero();
    std::vector<double> hs;
    ResolutionPolicy policy;
    problems::SolveOptions solve;
    PrecisionOptions precision;
    std::optional<std::pair<double, double>> truncation;
};

struct NeumannHalfPoint {
    double h = 0.0;
    double lambda = 0.0;        // physical eigenvalue nearest h⁻² Λ^∧
    int N = 0;                  // its index in 0 = λ₀ < λ₁ <= ... of the full Neumann problem
    double deviation = 0.0;     // |λ_N - h⁻² Λ^∧| (Wide same-grid when enabled)
    double deviation_double = 0.0;
    std::string deviation_decimal;
    bool subset_ok = false;     // λ also found in the full-domain Neumann spectrum
};

struct NeumannHalfReport {
    bool prediction = false;
    conditions::ConditionReport condition;
    double Lambda_half = 0.0;
    double cutoff = 0.0;
    std::vector<NeumannHalfPoint> points;
    std::optional<ExponentialFit> fit;
    bool N_increasing = false;
    bool deviation_decreasing = false;
    std::vector<std::string> notes;
};

NeumannHalfReport neumann_half_localization(const NeumannHalfSpec& spec);

// Thin dumbbell against the cane-head semi-cylinder built from the + head
// (all Dirichlet). With equal heads the two end modes are degenerate up to
// the rounding of the far-end node coordinates, which swamps the deviation
// once the tunnelling splitting drops below it; the default − head is
// therefore smaller (its own mode sits higher).
struct DumbbellSpec {
    mesh::HeadSpec head{2.0, 2.0};
    mesh::HeadSpec head_minus{1.5, 1.5};
    std::vector<double> hs;
    ResolutionPolicy policy;
    problems::SolveOptions solve;
    PrecisionOptions precision;
    std::optional<std::pair<double, double>> truncation;
};

struct DumbbellReport {
    double head_ground_state = 0.0;  // π²(W⁻² + height⁻²)
    bool head_below_cutoff = false;
    double Lambda1 = 0.0;
    bool cane_trapped = false;
    SweepResult sweep;
    std::vector<std::string> notes;
};

DumbbellReport dumbbell_study(const DumbbellSpec& spec);

}  // namespace trapmodes::asymptotics
