#include "trapmodes/dense.hpp"

#include <algorithm>
#include <numeric>

namespace trapmodes::eig {

namespace {

template <class Real>
Real hypot_of(const Real& a, const Real& b) {
    const Real x = abs_of(a), y = abs_of(b);
    const Real big = std::max(x, y);
    if (big == Real(0)) return Real(0);
    const Real small = std::min(x, y) / big;
    return big * sqrt_of(Real(1) + small * small);
}

// Householder reduction to tridiagonal form (EISPACK tred2 ordering).
// On exit V holds the accumulated orthogonal transformation.
template <class Real>
void tred2(DenseMatrix<Real>& V, Vec<Real>& d, Vec<Real>& e) {
    const int n = int(V.size());
    for (int j = 0; j < n; ++j) d[j] = V[n - 1][j];
    for (int i = n - 1; i > 0; --i) {
        Real scale = Real(0), h = Real(0);
        for (int k = 0; k < i; ++k) scale += abs_of(d[k]);
        if (scale == Real(0)) {
            e[i] = d[i - 1];
            for (int j = 0; j < i; ++j) {
                d[j] = V[i - 1][j];
                V[i][j] = Real(0);
                V[j][i] = Real(0);
            }
        } else {
            for (int k = 0; k < i; ++k) {
                d[k] /= scale;
                h += d[k] * d[k];
            }
            Real f = d[i - 1];
            Real g = sqrt_of(h);
            if (f > Real(0)) g = -g;
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for (int j = 0; j < i; ++j) e[j] = Real(0);
            for (int j = 0; j < i; ++j) {
                f = d[j];
                V[j][i] = f;
                g = e[j] + V[j][j] * f;
                for (int k = j + 1; k <= i - 1; ++k) {
                    g += V[k][j] * d[k];
                    e[k] += V[k][j] * f;
                }
                e[j] = g;
            }
            f = Real(0);
            for (int j = 0; j < i; ++j) {
                e[j] /= h;
                f += e[j] * d[j];
            }
            const Real hh = f / (h + h);
            for (int j = 0; j < i; ++j) e[j] -= hh * d[j];
            for (int j = 0; j < i; ++j) {
                f = d[j];
                g = e[j];
                for (int k = j; k <= i - 1; ++k) V[k][j] -= (f * e[k] + g * d[k]);
                d[j] = V[i - 1][j];
                V[i][j] = Real(0);
            }
        }
        d[i] = h;
    }
    for (int i = 0; i < n - 1; ++i) {
        V[n - 1][i] = V[i][i];
        V[i][i] = Real(1);
        const Real h = d[i + 1];
        if (h != Real(0)) {
            for (int k = 0; k <= i; ++k) d[k] = V[k][i + 1] / h;
            for (int j = 0; j <= i; ++j) {
                Real g = Real(0);
                for (int k = 0; k <= i; ++k) g += V[k][i + 1] * V[k][j];
                for (int k = 0; k <= i; ++k) V[k][j] -= g * d[k];
            }
        }
        for (int k = 0; k <= i; ++k) V[k][i + 1] = Real(0);
    }
    for (int j = 0; j < n; ++j) {
        d[j] = V[n - 1][j];
        V[n - 1][j] = Real(0);
    }
    V[n - 1][n - 1] = Real(1);
    e[0] = Real(0);
}

// Implicit QL on the tridiagonal (d, e) with e[i] coupling i-1 and i.
template <class Real>
void tql2(Vec<Real>& d, Vec<Real>& e, DenseMatrix<Real>* V) {
    const int n = int(d.size());
    for (int i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = Real(0);
    Real f = Real(0), tst1 = Real(0);
    const Real eps = epsilon_of<Real>();
    for (int l = 0; l < n; ++l) {
        tst1 = std::max(tst1, abs_of(d[l]) + abs_of(e[l]));
        int m = l;
        while (m < n) {
            if (abs_of(e[m]) <= eps * tst1) break;
            ++m;
        }
        if (m == n) m = n - 1;
        if (m > l) {
            int iter = 0;
            do {
                if (++iter > 200)
                    throw ConvergenceError("tridiagonal QL iteration did not converge", {});
                Real g = d[l];
                Real p = (d[l + 1] - g) / (2 * e[l]);
                Real r = hypot_of(p, Real(1));
                if (p < Real(0)) r = -r;
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                const Real dl1 = d[l + 1];
                Real h = g - d[l];
                for (int i = l + 2; i < n; ++i) d[i] -= h;
                f += h;
                p = d[m];
                Real c = Real(1), c2 = c, c3 = c;
                const Real el1 = e[l + 1];
                Real s = Real(0), s2 = Real(0);
                for (int i = m - 1; i >= l; --i) {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = hypot_of(p, e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    if (V) {
                        auto& W = *V;
                        for (int k = 0; k < n; ++k) {
                            h = W[k][i + 1];
                            W[k][i + 1] = s * W[k][i] + c * h;
                            W[k][i] = c * W[k][i] - s * h;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
            } while (abs_of(e[l]) > eps * tst1);
        }
        d[l] += f;
        e[l] = Real(0);
    }
}

template <class Real>
DenseEigen<Real> sorted_result(const Vec<Real>& d, const DenseMatrix<Real>* V) {
    const int n = int(d.size());
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return d[a] < d[b]; });
    DenseEigen<Real> out;
    out.values.resize(n);
    for (int j = 0; j < n; ++j) out.values[j] = d[order[j]];
    if (V) {
        out.vectors.assign(n, Vec<Real>(n));
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) out.vectors[j][k] = (*V)[k][order[j]];
    }
    return out;
}

}  // namespace

template <class Real>
DenseEigen<Real> tridiagonal_eigen(const Vec<Real>& diag, const Vec<Real>& offdiag, bool want_vectors) {
    const int n = int(diag.size());
    if (n == 0) return {};
    Vec<Real> d = diag;
    Vec<Real> e(n, Real(0));
    for (int i = 1; i < n; ++i) e[i] = offdiag[i - 1];
    if (!want_vectors) {
        tql2<Real>(d, e, nullptr);
        return sorted_result<Real>(d, nullptr);
    }
    DenseMatrix<Real> V(n, Vec<Real>(n, Real(0)));
    for (int i = 0; i < n; ++i) V[i][i] = Real(1);
    tql2<Real>(d, e, &V);
    return sorted_result<Real>(d, &V);
}

template <class Real>
DenseEigen<Real> symmetric_eigen(DenseMatrix<Real> A, bool want_vectors) {
    const int n = int(A.size());
    if (n == 0) return {};
    Vec<Real> d(n), e(n);
    tred2<Real>(A, d, e);
    tql2<Real>(d, e, &A);
    return sorted_result<Real>(d, want_vectors ? &A : nullptr);
}

template <class Real>
DenseEigen<Real> dense_generalized(const DenseMatrix<Real>& K, const DenseMatrix<Real>& M, bool want_vectors) {
    const int n = int(K.size());
    DenseMatrix<Real> L(n, Vec<Real>(n, Real(0)));
    for (int j = 0; j < n; ++j) {
        Real s = M[j][j];
        for (int k = 0; k < j; ++k) s -= L[j][k] * L[j][k];
        if (!(s > Real(0))) throw NumericError("dense_generalized: mass matrix is not positive definite");
        L[j][j] = sqrt_of(s);
        for (int i = j + 1; i < n; ++i) {
            Real t = M[i][j];
            for (int k = 0; k < j; ++k) t -= L[i][k] * L[j][k];
            L[i][j] = t / L[j][j];
        }
    }
    // X = L⁻¹ K, then C = L⁻¹ Xᵀ (= L⁻¹ K L⁻ᵀ since K is symmetric).
    auto forward = [&](DenseMatrix<Real>& B) {
        for (int c = 0; c < n; ++c)
            for (int i = 0; i < n; ++i) {
                Real t = B[i][c];
                for (int k = 0; k < i; ++k) t -= L[i][k] * B[k][c];
                B[i][c] = t / L[i][i];
            }
    };
    DenseMatrix<Real> X = K;
    forward(X);
    DenseMatrix<Real> C(n, Vec<Real>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) C[i][j] = X[j][i];
    forward(C);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) C[i][j] = C[j][i] = (C[i][j] + C[j][i]) / 2;

    DenseEigen<Real> r = symmetric_eigen<Real>(std::move(C), want_vectors);
    if (want_vectors)
        for (auto& y : r.vectors)
            for (int i = n - 1; i >= 0; --i) {
                Real t = y[i];
                for (int k = i + 1; k < n; ++k) t -= L[k][i] * y[k];
                y[i] = t / L[i][i];
            }
    return r;
}

template <class Real>
Vec<Real> dense_oracle(const SparseSym<Real>& K, const SparseSym<Real>& M) {
    if (K.n > dense_oracle_limit)
        throw PreconditionError("dense_oracle refuses systems larger than " + std::to_string(dense_oracle_limit));
    return dense_generalized<Real>(K.dense(), M.dense(), false).values;
}

#define TRAPMODES_DENSE_INSTANTIATE(R)                                                                               \
    template DenseEigen<R> tridiagonal_eigen<R>(const Vec<R>&, const Vec<R>&, bool);                                \
    template DenseEigen<R> symmetric_eigen<R>(DenseMatrix<R>, bool);                                                \
    template DenseEigen<R> dense_generalized<R>(const DenseMatrix<R>&, const DenseMatrix<R>&, bool);                \
    template Vec<R> dense_oracle<R>(const SparseSym<R>&, const SparseSym<R>&);

TRAPMODES_DENSE_INSTANTIATE(double)
TRAPMODES_DENSE_INSTANTIATE(Wide)

}  // namespace trapmodes::eig
