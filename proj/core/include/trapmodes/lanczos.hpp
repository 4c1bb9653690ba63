#pragma once

#include "trapmodes/ldlt.hpp"

#include <cstdint>
#include <vector>

namespace trapmodes::eig {

inline constexpr std::uint64_t default_seed = 20240917;

struct EigenOptions {
    int k = 1;
    double tol = 1e-10;       // relative residual ‖Kv − λMv‖ / (‖Kv‖ + |λ|‖Mv‖)
    double shift = 0.0;       // σ of the shift-invert operator (K − σM)⁻¹M
    std::uint64_t seed = default_seed;
    int max_basis = 0;        // Lanczos vectors per sweep; 0 picks from k
    int max_restarts = 12;
    bool verify_inertia = true;  // Sylvester count confirms nothing below λ_k was missed
    double pivot_tolerance = 1e-14;
};

template <class Real>
struct EigenSolution {
    Vec<Real> eigenvalues;                 // ascending
    std::vector<Vec<Real>> eigenvectors;   // free-DOF vectors, M-orthonormal
    std::vector<double> residuals;
    std::vector<int> cluster;              // equal ids: eigenvalues within relative 1e-8
    int iterations = 0;                    // Lanczos steps over all sweeps
    int restarts = 0;
    int factorizations = 0;
    double shift = 0.0;                    // shift actually used
    std::uint64_t seed = default_seed;
    bool inertia_verified = false;
    std::vector<double> residual_history;  // worst wanted residual estimate per convergence check
};

// k algebraically smallest eigenpairs of K v = λ M v by shift-invert
// Lanczos with full M-reorthogonalization, locking and restarts.
template <class Real>
EigenSolution<Real> smallest_eigenpairs(const SparseSym<Real>& K, const SparseSym<Real>& M, const EigenOptions& options);

template <class Real>
double relative_residual(const SparseSym<Real>& K, const SparseSym<Real>& M, const Vec<Real>& v, const Real& lambda);

// Cluster ids for an ascending list (relative gap 1e-8).
template <class Real>
std::vector<int> cluster_ids(const Vec<Real>& values, double rel = 1e-8);

}  // namespace trapmodes::eig
