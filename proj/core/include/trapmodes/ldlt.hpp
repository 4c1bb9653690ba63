#pragma once

#include "trapmodes/sparse.hpp"

#include <vector>

namespace trapmodes::eig {

// Reverse Cuthill–McKee on the symmetric pattern; perm[new] = old.
std::vector<int> reverse_cuthill_mckee(int n, const std::vector<int>& row_ptr, const std::vector<int>& col);

template <class Real>
std::vector<int> reorder(const SparseSym<Real>& pattern) {
    return reverse_cuthill_mckee(pattern.n, pattern.row_ptr, pattern.col);
}

// Half-bandwidth of the pattern after applying perm (perm[new] = old).
int bandwidth(int n, const std::vector<int>& row_ptr, const std::vector<int>& col, const std::vector<int>& perm);

// Sparse LDLᵀ of P (A - σM) Pᵀ with 1×1 pivots (up-looking, elimination tree).
template <class Real>
class Factorization {
public:
    int size() const { return n_; }
    const std::vector<int>& permutation() const { return perm_; }
    const Vec<Real>& diagonal() const { return d_; }
    Real shift() const { return sigma_; }
    std::size_t factor_nnz() const { return li_.size(); }

    // Number of negative pivots = number of eigenvalues of the pencil below σ.
    int negative_pivots() const;

    Vec<Real> solve(const Vec<Real>& b) const;
    void solve_in_place(Vec<Real>& x, Vec<Real>& work) const;

    // Entry L(i, j) of the unit lower factor in permuted numbering (tests).
    Real l_entry(int i, int j) const;

    template <class R>
    friend Factorization<R> factorize(const SparseSym<R>& A, const R& sigma, const SparseSym<R>* M,
                                      const std::vector<int>* perm, double pivot_tolerance);

private:
    int n_ = 0;
    Real sigma_ = Real(0);
    std::vector<int> perm_;
    std::vector<int> lp_;
    std::vector<int> li_;
    Vec<Real> lx_;
    Vec<Real> d_;
};

// Factor A - σM (M may be null for σ = 0). Pivots with |d| below
// pivot_tolerance · max|A - σM| raise SingularMatrixError naming the step.
// A null perm computes the RCM ordering.
template <class Real>
Factorization<Real> factorize(const SparseSym<Real>& A, const Real& sigma, const SparseSym<Real>* M,
                              const std::vector<int>* perm = nullptr, double pivot_tolerance = 1e-14);

// Inertia count of A - σM: number of eigenvalues of (A, M) strictly below σ.
template <class Real>
int count_below(const SparseSym<Real>& A, const SparseSym<Real>& M, const Real& sigma);

extern template class Factorization<double>;
extern template class Factorization<Wide>;

}  // namespace trapmodes::eig
