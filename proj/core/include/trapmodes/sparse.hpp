#pragma once

#include "trapmodes/error.hpp"
#include "trapmodes/real.hpp"

#include <algorithm>
#include <cstddef>
#include <vector>

namespace trapmodes {

template <class Real>
using Vec = std::vector<Real>;

// Symmetric sparse matrix, upper triangle (j >= i) in row-compressed form,
// column indices sorted within each row.
template <class Real>
struct SparseSym {
    int n = 0;
    std::vector<int> row_ptr{0};
    std::vector<int> col;
    std::vector<Real> val;

    std::size_t nnz_stored() const { return col.size(); }

    void multiply(const Vec<Real>& x, Vec<Real>& y) const {
        y.assign(n, Real(0));
        for (int i = 0; i < n; ++i) {
            Real acc = Real(0);
            const Real xi = x[i];
            for (int p = row_ptr[i]; p < row_ptr[i + 1]; ++p) {
                const int j = col[p];
                acc += val[p] * x[j];
                if (j != i) y[j] += val[p] * xi;
            }
            y[i] += acc;
        }
    }

    Vec<Real> operator*(const Vec<Real>& x) const {
        Vec<Real> y;
        multiply(x, y);
        return y;
    }

    Real at(int i, int j) const {
        if (i > j) std::swap(i, j);
        auto first = col.begin() + row_ptr[i];
        auto last = col.begin() + row_ptr[i + 1];
        auto it = std::lower_bound(first, last, j);
        if (it == last || *it != j) return Real(0);
        return val[it - col.begin()];
    }

    Real max_abs() const {
        Real m = Real(0);
        for (const auto& v : val) m = std::max(m, abs_of(v));
        return m;
    }

    template <class T>
    SparseSym<T> cast() const {
        SparseSym<T> out;
        out.n = n;
        out.row_ptr = row_ptr;
        out.col = col;
        out.val.reserve(val.size());
        for (const auto& v : val) out.val.push_back(T(v));
        return out;
    }

    std::vector<Vec<Real>> dense() const {
        std::vector<Vec<Real>> d(n, Vec<Real>(n, Real(0)));
        for (int i = 0; i < n; ++i)
            for (int p = row_ptr[i]; p < row_ptr[i + 1]; ++p) {
                d[i][col[p]] = val[p];
                d[col[p]][i] = val[p];
            }
        return d;
    }

    static SparseSym from_dense(const std::vector<Vec<Real>>& a) {
        SparseSym s;
        s.n = int(a.size());
        for (int i = 0; i < s.n; ++i) {
            for (int j = i; j < s.n; ++j)
                if (a[i][j] != Real(0) || i == j) {
                    s.col.push_back(j);
                    s.val.push_back(a[i][j]);
                }
            s.row_ptr.push_back(int(s.col.size()));
        }
        return s;
    }
};

// alpha*A + beta*B over the union pattern.
template <class Real>
SparseSym<Real> combine(const Real& alpha, const SparseSym<Real>& A, const Real& beta, const SparseSym<Real>& B) {
    if (A.n != B.n) throw DomainError("combine: dimension mismatch");
    SparseSym<Real> C;
    C.n = A.n;
    C.row_ptr.reserve(A.n + 1);
    for (int i = 0; i < A.n; ++i) {
        int p = A.row_ptr[i], q = B.row_ptr[i];
        const int pe = A.row_ptr[i + 1], qe = B.row_ptr[i + 1];
        while (p < pe || q < qe) {
            const int ja = p < pe ? A.col[p] : A.n;
            const int jb = q < qe ? B.col[q] : B.n;
            if (ja == jb) {
                C.col.push_back(ja);
                C.val.push_back(alpha * A.val[p++] + beta * B.val[q++]);
            } else if (ja < jb) {
                C.col.push_back(ja);
                C.val.push_back(alpha * A.val[p++]);
            } else {
                C.col.push_back(jb);
                C.val.push_back(beta * B.val[q++]);
            }
        }
        C.row_ptr.push_back(int(C.col.size()));
    }
    return C;
}

template <class Real>
Real dot(const Vec<Real>& a, const Vec<Real>& b) {
    Real s = Real(0);
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

template <class Real>
Real norm2(const Vec<Real>& a) {
    return sqrt_of(dot(a, a));
}

template <class Real>
Vec<Real> cast_vector(const Vec<double>& v) {
    return Vec<Real>(v.begin(), v.end());
}

template <class Real>
Vec<double> to_double_vector(const Vec<Real>& v) {
    Vec<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = to_double(v[i]);
    return out;
}

}  // namespace trapmodes
