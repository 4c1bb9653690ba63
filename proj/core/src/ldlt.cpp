#include "trapmodes/ldlt.hpp"

#include <sstream>

namespace trapmodes::eig {

template <class Real>
int Factorization<Real>::negative_pivots() const {
    int count = 0;
    for (const auto& d : d_)
        if (d < Real(0)) ++count;
    return count;
}

template <class Real>
void Factorization<Real>::solve_in_place(Vec<Real>& x, Vec<Real>& y) const {
    y.resize(n_);
    for (int k = 0; k < n_; ++k) y[k] = x[perm_[k]];
    for (int j = 0; j < n_; ++j) {
        const Real yj = y[j];
        if (yj == Real(0)) continue;
        for (int p = lp_[j]; p < lp_[j + 1]; ++p) y[li_[p]] -= lx_[p] * yj;
    }
    for (int j = 0; j < n_; ++j) y[j] /= d_[j];
    for (int j = n_ - 1; j >= 0; --j) {
        Real acc = y[j];
        for (int p = lp_[j]; p < lp_[j + 1]; ++p) acc -= lx_[p] * y[li_[p]];
        y[j] = acc;
    }
    for (int k = 0; k < n_; ++k) x[perm_[k]] = y[k];
}

template <class Real>
Vec<Real> Factorization<Real>::solve(const Vec<Real>& b) const {
    if (int(b.size()) != n_) throw DomainError("Factorization::solve: length mismatch");
    Vec<Real> x = b;
    Vec<Real> work;
    solve_in_place(x, work);
    return x;
}

template <class Real>
Real Factorization<Real>::l_entry(int i, int j) const {
    if (i == j) return Real(1);
    if (i < j) return Real(0);
    for (int p = lp_[j]; p < lp_[j + 1]; ++p)
        if (li_[p] == i) return lx_[p];
    return Real(0);
}

template <class Real>
Factorization<Real> factorize(const SparseSym<Real>& A, const Real& sigma, const SparseSym<Real>* M,
                              const std::vector<int>* perm, double pivot_tolerance) {
    const int n = A.n;
    SparseSym<Real> shifted = (M && sigma != Real(0)) ? combine(Real(1), A, Real(-sigma), *M) : A;
    if (M && M->n != n) throw DomainError("factorize: dimension mismatch");

    Factorization<Real> F;
    F.n_ = n;
    F.sigma_ = sigma;
    F.perm_ = perm ? *perm : reverse_cuthill_mckee(n, shifted.row_ptr, shifted.col);
    if (int(F.perm_.size()) != n) throw DomainError("factorize: permutation length mismatch");
    std::vector<int> inv(n);
    for (int k = 0; k < n; ++k) inv[F.perm_[k]] = k;

    // Upper triangle of the permuted matrix, stored by columns.
    std::vector<int> cp(n + 1, 0);
    for (int i = 0; i < n; ++i)
        for (int p = shifted.row_ptr[i]; p < shifted.row_ptr[i + 1]; ++p)
            ++cp[std::max(inv[i], inv[shifted.col[p]]) + 1];
    for (int k = 0; k < n; ++k) cp[k + 1] += cp[k];
    std::vector<int> ci(cp[n]);
    Vec<Real> cx(cp[n]);
    {
        std::vector<int> next(cp.begin(), cp.end() - 1);
        for (int i = 0; i < n; ++i)
            for (int p = shifted.row_ptr[i]; p < shifted.row_ptr[i + 1]; ++p) {
                const int a = inv[i], b = inv[shifted.col[p]];
                const int c = std::max(a, b);
                ci[next[c]] = std::min(a, b);
                cx[next[c]++] = shifted.val[p];
            }
    }

    // Symbolic: elimination tree and column counts.
    std::vector<int> parent(n), flag(n), lnz(n);
    for (int k = 0; k < n; ++k) {
        parent[k] = -1;
        flag[k] = k;
        lnz[k] = 0;
        for (int p = cp[k]; p < cp[k + 1]; ++p) {
            int i = ci[p];
            if (i >= k) continue;
            for (; flag[i] != k; i = parent[i]) {
                if (parent[i] == -1) parent[i] = k;
                ++lnz[i];
                flag[i] = k;
            }
        }
    }
    F.lp_.assign(n + 1, 0);
    for (int k = 0; k < n; ++k) F.lp_[k + 1] = F.lp_[k] + lnz[k];
    F.li_.resize(F.lp_[n]);
    F.lx_.assign(F.lp_[n], Real(0));
    F.d_.assign(n, Real(0));

    const Real threshold = Real(pivot_tolerance) * shifted.max_abs();
    Vec<Real> y(n, Real(0));
    std::vector<int> pattern(n);
    for (int k = 0; k < n; ++k) {
        int top = n;
        flag[k] = k;
        lnz[k] = 0;
        for (int p = cp[k]; p < cp[k + 1]; ++p) {
            int i = ci[p];
            y[i] += cx[p];
            int len = 0;
            for (; flag[i] != k; i = parent[i]) {
                pattern[len++] = i;
                flag[i] = k;
            }
            while (len > 0) pattern[--top] = pattern[--len];
        }
        Real dk = y[k];
        y[k] = Real(0);
        for (; top < n; ++top) {
            const int i = pattern[top];
            const Real yi = y[i];
            y[i] = Real(0);
            const int p2 = F.lp_[i] + lnz[i];
            for (int p = F.lp_[i]; p < p2; ++p) y[F.li_[p]] -= F.lx_[p] * yi;
            const Real lki = yi / F.d_[i];
            dk -= lki * yi;
            F.li_[p2] = k;
            F.lx_[p2] = lki;
            ++lnz[i];
        }
        if (!(abs_of(dk) >= threshold) || dk == Real(0)) {
            std::ostringstream msg;
            msg << "singular pivot at elimination step " << k << " of " << n << " (|d| = " << to_double(abs_of(dk))
                << ", shift = " << to_double(sigma) << ")";
            throw SingularMatrixError(msg.str(), k);
        }
        F.d_[k] = dk;
    }
    return F;
}

template <class Real>
int count_below(const SparseSym<Real>& A, const SparseSym<Real>& M, const Real& sigma) {
    return factorize(A, sigma, &M).negative_pivots();
}

#define TRAPMODES_LDLT_INSTANTIATE(R)                                                                                 \
    template class Factorization<R>;                                                                                  \
    template Factorization<R> factorize<R>(const SparseSym<R>&, const R&, const SparseSym<R>*,                         \
                                           const std::vector<int>*, double);                                         \
    template int count_below<R>(const SparseSym<R>&, const SparseSym<R>&, const R&);

TRAPMODES_LDLT_INSTANTIATE(double)
TRAPMODES_LDLT_INSTANTIATE(Wide)

}  // namespace trapmodes::eig
