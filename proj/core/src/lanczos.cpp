#include "trapmodes/lanczos.hpp"

#include "trapmodes/dense.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>

namespace trapmodes::eig {

namespace {

template <class Real>
struct Pair {
    Real lambda;
    Vec<Real> v;
    double residual;
};

template <class Real>
class Solver {
public:
    Solver(const SparseSym<Real>& K, const SparseSym<Real>& M, const EigenOptions& opt)
        : K_(K), M_(M), opt_(opt), rng_(opt.seed) {}

    EigenSolution<Real> run();

private:
    Vec<Real> apply_M(const Vec<Real>& x) const { return M_ * x; }

    // Two passes of classical Gram–Schmidt in the M inner product against
    // the locked vectors and the current basis.
    void orthogonalize(Vec<Real>& w, const std::vector<Vec<Real>>& basis) const {
        for (int pass = 0; pass < 2; ++pass) {
            const Vec<Real> Mw = apply_M(w);
            for (const auto* set : {&locked_vectors_, &basis})
                for (const auto& q : *set) {
                    const Real c = dot(q, Mw);
                    for (std::size_t i = 0; i < w.size(); ++i) w[i] -= c * q[i];
                }
        }
    }

    Real m_norm(const Vec<Real>& w) const { return sqrt_of(dot(w, apply_M(w))); }

    Vec<Real> random_vector() {
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        Vec<Real> v(K_.n);
        for (auto& x : v) x = Real(u(rng_));
        return v;
    }

    Pair<Real> ritz_pair(const std::vector<Vec<Real>>& Q, const Vec<Real>& s) const {
        Vec<Real> v(K_.n, Real(0));
        for (std::size_t j = 0; j < s.size(); ++j) {
            const Real c = s[j];
            const auto& q = Q[j];
            for (int i = 0; i < K_.n; ++i) v[i] += c * q[i];
        }
        const Real nrm = m_norm(v);
        for (auto& x : v) x /= nrm;
        const Vec<Real> Kv = K_ * v;
        const Vec<Real> Mv = apply_M(v);
        const Real lambda = dot(v, Kv) / dot(v, Mv);
        Vec<Real> r(K_.n);
        for (int i = 0; i < K_.n; ++i) r[i] = Kv[i] - lambda * Mv[i];
        // The shift floors the scale so a null-space pair is judged against ‖σMv‖.
        const Real scale = std::max(abs_of(lambda), Real(std::abs(sigma_)));
        const Real denom = norm2(Kv) + scale * norm2(Mv);
        const double res = denom > Real(0) ? to_double(norm2(r) / denom) : 0.0;
        return {lambda, std::move(v), res};
    }

    void lock(Pair<Real> p) {
        // Re-orthogonalize against earlier locked vectors (clusters split across sweeps).
        orthogonalize(p.v, {});
        const Real nrm = m_norm(p.v);
        for (auto& x : p.v) x /= nrm;
        locked_vectors_.push_back(p.v);
        locked_.push_back(std::move(p));
    }

    void factor_at(double sigma) {
        fact_.emplace(factorize<Real>(K_, Real(sigma), &M_, perm_.empty() ? nullptr : &perm_, opt_.pivot_tolerance));
        if (perm_.empty()) perm_ = fact_->permutation();
        ++factorizations_;
    }

    // One Lanczos sweep; returns the Ritz vector combination to restart from.
    std::optional<Vec<Real>> sweep(const Vec<Real>& start, int wanted);

    const SparseSym<Real>& K_;
    const SparseSym<Real>& M_;
    EigenOptions opt_;
    std::mt19937_64 rng_;
    std::optional<Factorization<Real>> fact_;
    std::vector<int> perm_;
    double sigma_ = 0.0;
    std::vector<Pair<Real>> locked_;
    std::vector<Vec<Real>> locked_vectors_;
    int iterations_ = 0;
    int factorizations_ = 0;
    std::vector<double> history_;
    std::vector<double> best_residuals_;
};

template <class Real>
std::optional<Vec<Real>> Solver<Real>::sweep(const Vec<Real>& start, int wanted) {
    const int n = K_.n;
    const int room = n - int(locked_.size());
    const int m_max = std::min(room, opt_.max_basis > 0 ? opt_.max_basis : std::max(4 * wanted + 40, 80));

    std::vector<Vec<Real>> Q;
    Vec<Real> alpha, beta;
    Vec<Real> q = start;
    orthogonalize(q, Q);
    Real nrm = m_norm(q);
    if (!(nrm > Real(0))) return std::nullopt;
    for (auto& x : q) x /= nrm;
    Q.push_back(q);

    Vec<Real> work;
    int next_check = std::max(wanted, 2);
    for (int j = 0; j < m_max; ++j) {
        const Vec<Real> Mq = apply_M(Q[j]);
        Vec<Real> w = Mq;
        fact_->solve_in_place(w, work);
        const Real a = dot(Mq, w);
        alpha.push_back(a);
        for (int i = 0; i < n; ++i) {
            w[i] -= a * Q[j][i];
            if (j > 0) w[i] -= beta[j - 1] * Q[j - 1][i];
        }
        orthogonalize(w, Q);
        const Real b = m_norm(w);
        ++iterations_;

        const Real scale = abs_of(a) + (j > 0 ? beta[j - 1] : Real(0));
        const bool exhausted = !(b > epsilon_of<Real>() * 100 * std::max(scale, Real(1e-300)));
        const bool last = j + 1 == m_max || exhausted;
        if (j + 1 >= next_check || last) {
            next_check = j + 1 + std::max(2, (j + 1) / 6);
            Vec<Real> off(beta.begin(), beta.end());
            const auto T = tridiagonal_eigen<Real>(alpha, off, true);
            const int m = int(alpha.size());
            // Ritz values θ map to λ = σ + 1/θ; order by λ ascending.
            std::vector<int> idx;
            for (int i = 0; i < m; ++i)
                if (T.values[i] != Real(0)) idx.push_back(i);
            auto lambda_of = [&](int i) { return Real(sigma_) + Real(1) / T.values[i]; };
            std::sort(idx.begin(), idx.end(), [&](int x, int y) { return lambda_of(x) < lambda_of(y); });
            const int take = std::min<int>(wanted, int(idx.size()));
            double worst = 0.0;
            bool all_small = take == wanted;
            for (int t = 0; t < take; ++t) {
                const int i = idx[t];
                const double est = to_double(abs_of(b * T.vectors[i][m - 1]) / abs_of(T.values[i]));
                worst = std::max(worst, est);
                if (!(est < opt_.tol)) all_small = false;
            }
            history_.push_back(worst);
            if (all_small || last) {
                std::vector<Pair<Real>> accepted, pending;
                for (int t = 0; t < take; ++t) {
                    auto p = ritz_pair(Q, T.vectors[idx[t]]);
                    (p.residual <= opt_.tol ? accepted : pending).push_back(std::move(p));
                }
                if (pending.empty() || last) {
                    best_residuals_.clear();
                    for (const auto& p : pending) best_residuals_.push_back(p.residual);
                    for (auto& p : accepted) lock(std::move(p));
                    if (pending.empty()) return std::nullopt;
                    Vec<Real> restart(n, Real(0));
                    for (const auto& p : pending)
                        for (int i = 0; i < n; ++i) restart[i] += p.v[i];
                    return restart;
                }
            }
        }
        if (exhausted || j + 1 == m_max) break;
        beta.push_back(b);
        for (auto& x : w) x /= b;
        Q.push_back(std::move(w));
    }
    return std::nullopt;
}

template <class Real>
EigenSolution<Real> Solver<Real>::run() {
    const int n = K_.n;
    if (opt_.k < 1 || opt_.k > n) throw PreconditionError("smallest_eigenpairs: k must satisfy 1 <= k <= n_free");
    if (M_.n != n) throw DomainError("smallest_eigenpairs: K and M differ in size");

    sigma_ = opt_.shift;
    try {
        factor_at(sigma_);
    } catch (const SingularMatrixError&) {
        sigma_ = sigma_ / 2 - 1e-3 * std::max(1.0, std::abs(sigma_));
        factor_at(sigma_);
    }

    int target = opt_.k;
    int restarts = 0;
    std::optional<Vec<Real>> restart;
    bool verified = false;
    while (true) {
        while (int(locked_.size()) < target) {
            if (restarts > opt_.max_restarts) {
                std::ostringstream msg;
                msg << "Lanczos did not converge: " << locked_.size() << " of " << target << " pairs after "
                    << iterations_ << " steps";
                throw ConvergenceError(msg.str(), best_residuals_);
            }
            const Vec<Real> start = restart ? *restart : random_vector();
            restart = sweep(start, target - int(locked_.size()));
            ++restarts;
        }
        std::sort(locked_.begin(), locked_.end(), [](const auto& a, const auto& b) { return a.lambda < b.lambda; });
        if (!opt_.verify_inertia) break;

        // Sylvester check: every eigenvalue below λ_k - δ must already be locked.
        const Real lk = locked_[opt_.k - 1].lambda;
        double delta = 1e-8 * std::max(1.0, std::abs(to_double(lk)));
        int below = -1;
        double tau = 0.0;
        for (int attempt = 0; attempt < 4 && below < 0; ++attempt, delta *= 3.0) {
            tau = to_double(lk) - delta;
            try {
                below = factorize<Real>(K_, Real(tau), &M_, &perm_, opt_.pivot_tolerance).negative_pivots();
                ++factorizations_;
            } catch (const SingularMatrixError&) {
                below = -1;
            }
        }
        if (below < 0) break;
        int found = 0;
        for (const auto& p : locked_)
            if (to_double(p.lambda) < tau) ++found;
        if (below <= found) {
            verified = true;
            break;
        }
        target = int(locked_.size()) + (below - found);
        restart.reset();
    }

    EigenSolution<Real> out;
    for (int i = 0; i < opt_.k; ++i) {
        out.eigenvalues.push_back(locked_[i].lambda);
        out.eigenvectors.push_back(locked_[i].v);
        out.residuals.push_back(locked_[i].residual);
    }
    out.cluster = cluster_ids(out.eigenvalues);
    out.iterations = iterations_;
    out.restarts = restarts - 1;
    out.factorizations = factorizations_;
    out.shift = sigma_;
    out.seed = opt_.seed;
    out.inertia_verified = verified;
    out.residual_history = history_;
    return out;
}

}  // namespace

template <class Real>
EigenSolution<Real> smallest_eigenpairs(const SparseSym<Real>& K, const SparseSym<Real>& M, const EigenOptions& options) {
    Solver<Real> solver(K, M, options);
    return solver.run();
}

template <class Real>
double relative_residual(const SparseSym<Real>& K, const SparseSym<Real>& M, const Vec<Real>& v, const Real& lambda) {
    const Vec<Real> Kv = K * v;
    const Vec<Real> Mv = M * v;
    Vec<Real> r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) r[i] = Kv[i] - lambda * Mv[i];
    const Real denom = norm2(Kv) + abs_of(lambda) * norm2(Mv);
    return denom > Real(0) ? to_double(norm2(r) / denom) : 0.0;
}

template <class Real>
std::vector<int> cluster_ids(const Vec<Real>& values, double rel) {
    std::vector<int> ids(values.size(), 0);
    for (std::size_t i = 1; i < values.size(); ++i) {
        const Real gap = values[i] - values[i - 1];
        const Real scale = std::max(abs_of(values[i]), abs_of(values[i - 1]));
        ids[i] = ids[i - 1] + (gap > Real(rel) * scale ? 1 : 0);
    }
    return ids;
}

#define TRAPMODES_LANCZOS_INSTANTIATE(R)                                                                             \
    template EigenSolution<R> smallest_eigenpairs<R>(const SparseSym<R>&, const SparseSym<R>&, const EigenOptions&); \
    template double relative_residual<R>(const SparseSym<R>&, const SparseSym<R>&, const Vec<R>&, const R&);        \
    template std::vector<int> cluster_ids<R>(const Vec<R>&, double);

TRAPMODES_LANCZOS_INSTANTIATE(double)
TRAPMODES_LANCZOS_INSTANTIATE(Wide)

}  // namespace trapmodes::eig
