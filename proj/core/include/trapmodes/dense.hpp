#pragma once

#include "trapmodes/sparse.hpp"

#include <vector>

namespace trapmodes::eig {

template <class Real>
using DenseMatrix = std::vector<Vec<Real>>;  // row-major, square

template <class Real>
struct DenseEigen {
    Vec<Real> values;          // ascending
    DenseMatrix<Real> vectors;  // vectors[j] is the eigenvector of values[j]
};

// Symmetric tridiagonal eigenproblem by implicit QL. offdiag[i] couples
// i and i+1 (size n-1).
template <class Real>
DenseEigen<Real> tridiagonal_eigen(const Vec<Real>& diag, const Vec<Real>& offdiag, bool want_vectors);

// Dense symmetric eigenproblem: Householder tridiagonalization + implicit QL.
template <class Real>
DenseEigen<Real> symmetric_eigen(DenseMatrix<Real> A, bool want_vectors);

// Generalized K x = λ M x for small systems: Cholesky of M, reduction to
// L⁻¹ K L⁻ᵀ, symmetric eigensolve. Eigenvectors are M-orthonormal.
template <class Real>
DenseEigen<Real> dense_generalized(const DenseMatrix<Real>& K, const DenseMatrix<Real>& M, bool want_vectors);

inline constexpr int dense_oracle_limit = 2000;

// Full spectrum of the sparse pencil; refuses n > dense_oracle_limit.
template <class Real>
Vec<Real> dense_oracle(const SparseSym<Real>& K, const SparseSym<Real>& M);

}  // namespace trapmodes::eig
