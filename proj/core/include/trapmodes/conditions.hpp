#pragma once

#include "trapmodes/cross_section.hpp"

#include <functional>
#include <string>
#include <vector>

namespace trapmodes::conditions {

// Sufficient conditions for a trapped mode below the cutoff μ₁:
//   gradient_form   ∫ H (|∇φ₁|² - μ₁ φ₁²) < 0
//   laplacian_form  ∫ φ₁² ΔH < 0          (= 2 × gradient_form for C² profiles)
//   fourier_2d      ∫₀¹ H(η) cos(2πη) dη < 0   (interval cross-section)
//   symmetric_half  gradient_form on the half cross-section (1/2, 1)
//   epsilon_order   1/2 + ∫ H² (|∇φ₁|² - μ₁ φ₁²) < 0, the next order of the
//                   trial-function expansion when gradient_form vanishes
enum class ConditionId { gradient_form, laplacian_form, fourier_2d, symmetric_half, epsilon_order };
enum class Verdict { satisfied, not_satisfied };

const char* to_string(ConditionId id);
const char* to_string(Verdict v);

inline constexpr double inconclusive_band = 1e-10;

struct ConditionReport {
    ConditionId id = ConditionId::gradient_form;
    double value = 0.0;
    Verdict verdict = Verdict::not_satisfied;
    bool inconclusive = false;     // |value| <= inconclusive_band
    std::string quadrature;        // rule description
    int evaluations = 0;           // integrand evaluations or elements
    double error_estimate = 0.0;
    std::string inputs_digest;     // FNV-1a of the inputs
    std::vector<std::string> notes;
};

// Integrand sample for plotting (`--explain`).
struct IntegrandSample {
    std::vector<double> eta;
    std::vector<double> value;
};

ConditionReport condition_gradient_form(const problems::CrossSectionEigens& eigens, const mesh::ProfileSpec& H);
// Polygon cross-sections: H is a field on ω, integrated by the element
// midpoint rule on the eigenfunction mesh.
ConditionReport condition_gradient_form(const problems::CrossSectionEigens& eigens,
                                        const std::function<double(double, double)>& H);
ConditionReport condition_laplacian_form(const problems::CrossSectionEigens& eigens, const mesh::ProfileSpec& H);
ConditionReport condition_fourier_2d(const mesh::ProfileSpec& H);
ConditionReport condition_symmetric_half(const problems::CrossSectionEigens& half_eigens, const mesh::ProfileSpec& H);
ConditionReport condition_epsilon_order(const problems::CrossSectionEigens& eigens, const mesh::ProfileSpec& H);

IntegrandSample explain_integrand(ConditionId id, const problems::CrossSectionEigens& eigens, const mesh::ProfileSpec& H,
                                  int samples = 201);

// Quotient of the trial function W = exp(-εζ) φ₁(η) on the semi-cylinder
// ζ > -H(η):  Q(ε) = ∫ e^{2εH}(|∇φ₁|² + ε²φ₁²) / ∫ e^{2εH} φ₁².
struct RayleighScanResult {
    std::vector<double> epsilon;
    std::vector<double> quotient;
    double best_epsilon = 0.0;
    double best_quotient = 0.0;
    double cutoff = 0.0;
    Verdict verdict = Verdict::not_satisfied;  // satisfied iff some Q(ε) < μ₁
    double slope_at_zero = 0.0;                // 2 × gradient_form integral
    double second_order = 0.0;                 // epsilon_order combination
};

std::vector<double> default_epsilon_grid(int points = 40, double lo = 1e-3, double hi = 1.0);

double trial_quotient(const problems::CrossSectionEigens& eigens, const mesh::ProfileSpec& H, double epsilon);

RayleighScanResult rayleigh_scan(const problems::CrossSectionEigens& eigens, const mesh::ProfileSpec& H,
                                 const std::vector<double>& epsilon_grid);

}  // namespace trapmodes::conditions
