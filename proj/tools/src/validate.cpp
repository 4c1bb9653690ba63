#include "trapmodes_app/runner.hpp"

#include <trapmodes/dense.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace trapmodes::app {

namespace {

constexpr double pi = std::numbers::pi;

std::string sci(double v) {
    std::ostringstream s;
    s.precision(3);
    s << std::scientific << v;
    return s.str();
}

template <class F>
ValidationCheck guarded(const std::string& name, F&& f) {
    try {
        return f();
    } catch (const std::exception& e) {
        return {name, false, std::string("error: ") + e.what()};
    }
}

ValidationCheck dense_vs_lanczos() {
    const auto spec = [] {
        auto d = mesh::DomainSpec::distorted_cylinder(0.2, mesh::ProfileSpec::fourier(0.0, {-1.0}),
                                                      mesh::ProfileSpec::zero());
        d.frame = mesh::Frame::stretched;
        return d;
    }();
    problems::SolveOptions opt;
    opt.k = 5;
    const auto r = problems::solve_thin<double>(spec, problems::ThinBc::mixed, {8, 40}, opt);
    if (r.system.n_free > 500) return {"dense_vs_lanczos", false, "system exceeds 500 unknowns"};
    const auto all = eig::dense_oracle<double>(r.system.K, r.system.M);
    double worst = 0.0;
    for (int p = 0; p < 5; ++p)
        worst = std::max(worst, std::abs(r.solution.eigenvalues[p] - all[p]) / std::abs(all[p]));
    return {"dense_vs_lanczos", worst < 1e-10,
            "n = " + std::to_string(r.system.n_free) + ", max relative difference " + sci(worst)};
}

ValidationCheck rectangle_spectrum() {
    const double h = 0.2;
    problems::SolveOptions opt;
    opt.k = 3;
    auto solve = [&](int n) {
        return problems::solve_thin<double>(mesh::DomainSpec::straight_cylinder(h), problems::ThinBc::mixed, {n, n}, opt)
            .physical_eigenvalues();
    };
    // Richardson over two P1 grids removes the O(Δ²) term.
    const auto coarse = solve(40), fine = solve(80);
    std::vector<double> lam(3);
    for (int q = 0; q < 3; ++q) lam[q] = (4.0 * fine[q] - coarse[q]) / 3.0;
    double worst = 0.0;
    for (int q = 0; q < 3; ++q) {
        const double exact = problems::reference_straight(h, 1, q).lambda;
        worst = std::max(worst, std::abs(lam[q] - exact) / exact);
    }
    return {"rectangle_spectrum", worst < 1e-3, "h = 0.2, (p, q) = (1, 0..2), Richardson 40/80, max relative error " + sci(worst)};
}

ValidationCheck fit_recovery() {
    std::vector<std::pair<double, double>> pts;
    for (double h : {0.2, 0.15, 0.1, 0.075, 0.05}) pts.push_back({h, 2.0 * std::exp(-4.0 / h)});
    const auto f = asymptotics::fit_exponential(pts);
    const double err = std::max(std::abs(f.tau - 4.0) / 4.0, std::abs(f.c - 2.0) / 2.0);
    return {"fit_recovery", err < 1e-8 && f.r2 > 0.999999, "tau = " + format_double(f.tau) + ", c = " +
                                                              format_double(f.c) + ", relative error " + sci(err)};
}

ValidationCheck cross_section_mu() {
    const auto interval = problems::cross_section_eigens(problems::CrossSectionSpec::interval(), 3);
    double worst = 0.0;
    for (int p = 1; p <= 3; ++p) worst = std::max(worst, std::abs(interval.mu[p - 1] - p * p * pi * pi) / (p * p * pi * pi));
    const auto square = problems::cross_section_eigens(
        problems::CrossSectionSpec::polygon({{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}}), 1, 5);
    const double sq = std::abs(square.mu[0] - 2.0 * pi * pi) / (2.0 * pi * pi);
    return {"cross_section_mu", worst < 1e-14 && sq < 1e-2,
            "interval max relative error " + sci(worst) + ", unit square mu1 relative error " + sci(sq)};
}

ValidationCheck fourier_condition() {
    const auto r = conditions::condition_fourier_2d(mesh::ProfileSpec::fourier(0.0, {-1.0}));
    const double err = std::abs(r.value + 0.5);
    return {"fourier_condition", err < 1e-12 && r.verdict == conditions::Verdict::satisfied,
            "H = -cos(2 pi eta): value " + format_double(r.value) + ", expected -0.5"};
}

}  // namespace

std::vector<ValidationCheck> run_validation() {
    return {guarded("dense_vs_lanczos", dense_vs_lanczos), guarded("rectangle_spectrum", rectangle_spectrum),
            guarded("fit_recovery", fit_recovery), guarded("cross_section_mu", cross_section_mu),
            guarded("fourier_condition", fourier_condition)};
}

}  // namespace trapmodes::app
