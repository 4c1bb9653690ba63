#include "trapmodes/conditions.hpp"

#include "trapmodes/error.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numbers>
#include <sstream>

namespace trapmodes::conditions {

using mesh::ProfileSpec;
using problems::CrossSectionEigens;
using problems::CrossSectionSpec;

namespace {

constexpr double pi = std::numbers::pi;
constexpr unsigned max_depth = 20;
constexpr double warn_error = 1e-10;

struct Quadrature {
    double value = 0.0;
    double error = 0.0;
    int evaluations = 0;
};

// Adaptive Gauss–Kronrod (61 points) on each piece between break points.
template <class F>
Quadrature integrate(F f, double lo, double hi, std::vector<double> breaks) {
    breaks.push_back(lo);
    breaks.push_back(hi);
    std::sort(breaks.begin(), breaks.end());
    Quadrature q;
    auto counted = [&](double x) {
        ++q.evaluations;
        return f(x);
    };
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const double a = std::max(lo, breaks[i]), b = std::min(hi, breaks[i + 1]);
        if (!(b > a)) continue;
        double err = 0.0;
        q.value += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(counted, a, b, max_depth, 1e-14, &err);
        q.error += err;
    }
    return q;
}

std::string digest(const std::string& text) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string inputs_of(const CrossSectionEigens& e, const ProfileSpec& H) {
    std::ostringstream s;
    s.precision(17);
    s << problems::to_string(e.spec.kind) << ';' << (e.mu.empty() ? 0.0 : e.mu[0]) << ';' << mesh::describe(H);
    return s.str();
}

void require_analytic(const CrossSectionEigens& e, const char* who) {
    if (!e.analytic()) throw PreconditionError(std::string(who) + " needs an analytic (interval) cross-section");
    if (e.mu.empty()) throw PreconditionError(std::string(who) + ": cross-section eigenpairs are empty");
}

void require_covers(const ProfileSpec& H, double lo, double hi) {
    if (H.domain_lo() > lo || H.domain_hi() < hi)
        throw DomainError("profile is not defined on the whole cross-section");
}

ConditionReport finish(ConditionId id, const Quadrature& q, const std::string& inputs) {
    ConditionReport r;
    r.id = id;
    r.value = q.value;
    r.error_estimate = q.error;
    r.evaluations = q.evaluations;
    r.quadrature = "adaptive Gauss-Kronrod 61, split at profile breaks";
    r.inputs_digest = digest(inputs);
    r.inconclusive = std::abs(q.value) <= inconclusive_band;
    r.verdict = (q.value < 0.0 && !r.inconclusive) ? Verdict::satisfied : Verdict::not_satisfied;
    if (r.inconclusive) r.notes.push_back("inconclusive: |value| <= 1e-10");
    if (q.error > warn_error) {
        std::ostringstream msg;
        msg << "accuracy warning: quadrature error estimate " << q.error << " exceeds 1e-10";
        r.notes.push_back(msg.str());
    }
    return r;
}

// |φ₁'|² - μ₁ φ₁² for the analytic first mode.
double phi_form(const CrossSectionEigens& e, double eta) {
    const double p = e.phi(1, eta), dp = e.dphi(1, eta);
    return dp * dp - e.mu[0] * p * p;
}

Quadrature gradient_quadrature(const CrossSectionEigens& e, const ProfileSpec& H) {
    return integrate([&](double x) { return mesh::profile_eval(H, x) * phi_form(e, x); }, e.lo(), e.hi(),
                     mesh::profile_breaks(H));
}

}  // namespace

const char* to_string(ConditionId id) {
    switch (id) {
        case ConditionId::gradient_form: return "gradient_form";
        case ConditionId::laplacian_form: return "laplacian_form";
        case ConditionId::fourier_2d: return "fourier_2d";
        case ConditionId::symmetric_half: return "symmetric_half";
        case ConditionId::epsilon_order: return "epsilon_order";
    }
    return "?";
}

const char* to_string(Verdict v) { return v == Verdict::satisfied ? "satisfied" : "not_satisfied"; }

ConditionReport condition_gradient_form(const CrossSectionEigens& e, const ProfileSpec& H) {
    require_analytic(e, "condition_gradient_form");
    require_covers(H, e.lo(), e.hi());
    return finish(ConditionId::gradient_form, gradient_quadrature(e, H), inputs_of(e, H));
}

ConditionReport condition_gradient_form(const CrossSectionEigens& e, const std::function<double(double, double)>& H) {
    if (e.analytic() || e.nodal.empty())
        throw PreconditionError("field form of condition_gradient_form needs a polygon cross-section");
    const auto& m = e.mesh;
    const auto& phi = e.nodal[0];
    const double mu = e.mu[0];
    Quadrature q;
    std::ostringstream inputs;
    inputs.precision(17);
    inputs << "polygon;" << mu;
    for (const auto& t : m.triangles) {
        const auto& a = m.nodes[t[0]];
        const auto& b = m.nodes[t[1]];
        const auto& c = m.nodes[t[2]];
        const double area2 = (b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]);
        // Gradient of the linear interpolant.
        const double gx = (phi[t[0]] * (b[1] - c[1]) + phi[t[1]] * (c[1] - a[1]) + phi[t[2]] * (a[1] - b[1])) / area2;
        const double gy = (phi[t[0]] * (c[0] - b[0]) + phi[t[1]] * (a[0] - c[0]) + phi[t[2]] * (b[0] - a[0])) / area2;
        const double xm = (a[0] + b[0] + c[0]) / 3.0, ym = (a[1] + b[1] + c[1]) / 3.0;
        const double pm = (phi[t[0]] + phi[t[1]] + phi[t[2]]) / 3.0;
        const double hv = H(xm, ym);
        if (!std::isfinite(hv)) throw NumericError("condition_gradient_form: H is not finite at an element midpoint");
        q.value += 0.5 * area2 * hv * (gx * gx + gy * gy - mu * pm * pm);
        ++q.evaluations;
        inputs << ';' << hv;
    }
    auto r = finish(ConditionId::gradient_form, q, inputs.str());
    r.quadrature = "element midpoint rule on the cross-section mesh";
    return r;
}

ConditionReport condition_laplacian_form(const CrossSectionEigens& e, const ProfileSpec& H) {
    require_analytic(e, "condition_laplacian_form");
    if (!H.is_smooth()) throw PreconditionError("condition_laplacian_form needs a twice differentiable profile");
    require_covers(H, e.lo(), e.hi());
    const auto q = integrate(
        [&](double x) {
            const double p = e.phi(1, x);
            return p * p * mesh::profile_d2(H, x);
        },
        e.lo(), e.hi(), {});
    auto r = finish(ConditionId::laplacian_form, q, inputs_of(e, H));
    if (e.spec.kind == CrossSectionSpec::Kind::interval) {
        const double twice = 2.0 * gradient_quadrature(e, H).value;
        std::ostringstream msg;
        msg.precision(6);
        msg << "identity check: 2 x gradient_form = " << twice << ", difference " << std::abs(twice - q.value);
        r.notes.push_back(msg.str());
    }
    return r;
}

ConditionReport condition_fourier_2d(const ProfileSpec& H) {
    require_covers(H, 0.0, 1.0);
    const auto q = integrate([&](double x) { return mesh::profile_eval(H, x) * std::cos(2.0 * pi * x); }, 0.0, 1.0,
                             mesh::profile_breaks(H));
    if (H.kind != ProfileSpec::Kind::fourier) return finish(ConditionId::fourier_2d, q, mesh::describe(H));
    Quadrature exact;
    exact.value = H.a.empty() ? 0.0 : H.a[0] / 2.0;
    exact.evaluations = q.evaluations;
    exact.error = 0.0;
    auto r = finish(ConditionId::fourier_2d, exact, mesh::describe(H));
    r.quadrature = "closed form a1/2";
    std::ostringstream msg;
    msg << "quadrature cross-check differs by " << std::abs(q.value - exact.value);
    r.notes.push_back(msg.str());
    return r;
}

ConditionReport condition_symmetric_half(const CrossSectionEigens& e, const ProfileSpec& H) {
    if (e.spec.kind != CrossSectionSpec::Kind::half_interval || e.mu.empty())
        throw PreconditionError("condition_symmetric_half needs the half-interval cross-section");
    require_covers(H, 0.0, 1.0);
    const int samples = 1000;
    for (int i = 0; i <= samples; ++i) {
        const double x = 0.5 * i / samples;
        if (std::abs(mesh::profile_eval(H, x) - mesh::profile_eval(H, 1.0 - x)) > 1e-10)
            throw PreconditionError("condition_symmetric_half: H is not even about η = 1/2");
    }
    auto r = finish(ConditionId::symmetric_half, gradient_quadrature(e, H), inputs_of(e, H));
    r.id = ConditionId::symmetric_half;
    return r;
}

ConditionReport condition_epsilon_order(const CrossSectionEigens& e, const ProfileSpec& H) {
    require_analytic(e, "condition_epsilon_order");
    require_covers(H, e.lo(), e.hi());
    auto q = integrate(
        [&](double x) {
            const double v = mesh::profile_eval(H, x);
            return v * v * phi_form(e, x);
        },
        e.lo(), e.hi(), mesh::profile_breaks(H));
    q.value += 0.5;
    auto r = finish(ConditionId::epsilon_order, q, inputs_of(e, H));
    const double g = gradient_quadrature(e, H).value;
    if (std::abs(g) > inconclusive_band)
        r.notes.push_back("gradient_form is nonzero; it dominates and this order does not decide the verdict");
    return r;
}

IntegrandSample explain_integrand(ConditionId id, const CrossSectionEigens& e, const ProfileSpec& H, int samples) {
    if (samples < 2) throw DomainError("explain_integrand: need at least 2 samples");
    IntegrandSample s;
    double lo = 0.0, hi = 1.0;
    if (id != ConditionId::fourier_2d) {
        require_analytic(e, "explain_integrand");
        lo = e.lo();
        hi = e.hi();
    }
    for (int i = 0; i < samples; ++i) {
        const double x = lo + (hi - lo) * i / (samples - 1);
        const double v = mesh::profile_eval(H, x);
        double y = 0.0;
        switch (id) {
            case ConditionId::gradient_form:
            case ConditionId::symmetric_half: y = v * phi_form(e, x); break;
            case ConditionId::laplacian_form: {
                const double p = e.phi(1, x);
                y = p * p * mesh::profile_d2(H, x);
                break;
            }
            case ConditionId::fourier_2d: y = v * std::cos(2.0 * pi * x); break;
            case ConditionId::epsilon_order: y = v * v * phi_form(e, x); break;
        }
        s.eta.push_back(x);
        s.value.push_back(y);
    }
    return s;
}

std::vector<double> default_epsilon_grid(int points, double lo, double hi) {
    if (points < 2 || !(lo > 0.0) || !(hi > lo)) throw DomainError("epsilon grid needs 0 < lo < hi and >= 2 points");
    std::vector<double> g;
    for (int i = 0; i < points; ++i) g.push_back(lo * std::pow(hi / lo, double(i) / (points - 1)));
    return g;
}

double trial_quotient(const CrossSectionEigens& e, const ProfileSpec& H, double eps) {
    require_analytic(e, "trial_quotient");
    if (!(eps > 0.0)) throw DomainError("trial_quotient: ε must be positive");
    const auto breaks = mesh::profile_breaks(H);
    const auto num = integrate(
        [&](double x) {
            const double p = e.phi(1, x), dp = e.dphi(1, x);
            return std::exp(2.0 * eps * mesh::profile_eval(H, x)) * (dp * dp + eps * eps * p * p);
        },
        e.lo(), e.hi(), breaks);
    const auto den = integrate(
        [&](double x) {
            const double p = e.phi(1, x);
            return std::exp(2.0 * eps * mesh::profile_eval(H, x)) * p * p;
        },
        e.lo(), e.hi(), breaks);
    return num.value / den.value;
}

RayleighScanResult rayleigh_scan(const CrossSectionEigens& e, const ProfileSpec& H, const std::vector<double>& grid) {
    require_analytic(e, "rayleigh_scan");
    require_covers(H, e.lo(), e.hi());
    if (grid.empty()) throw DomainError("rayleigh_scan: empty ε grid");
    for (std::size_t i = 0; i < grid.size(); ++i)
        if (!(grid[i] > 0.0) || (i > 0 && !(grid[i] > grid[i - 1])))
            throw DomainError("rayleigh_scan: ε grid must be positive and ascending");
    RayleighScanResult r;
    r.cutoff = e.mu[0];
    r.epsilon = grid;
    for (double eps : grid) r.quotient.push_back(trial_quotient(e, H, eps));
    const auto best = std::min_element(r.quotient.begin(), r.quotient.end()) - r.quotient.begin();
    r.best_epsilon = grid[best];
    r.best_quotient = r.quotient[best];
    r.verdict = r.best_quotient < r.cutoff ? Verdict::satisfied : Verdict::not_satisfied;
    r.slope_at_zero = 2.0 * gradient_quadrature(e, H).value;
    r.second_order = condition_epsilon_order(e, H).value;
    return r;
}

}  // namespace trapmodes::conditions
