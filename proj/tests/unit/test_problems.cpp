#include "support.hpp"

#include <trapmodes/asymptotics.hpp>
#include <trapmodes/error.hpp>
#include <trapmodes/fit.hpp>
#include <trapmodes/problems.hpp>

#include <doctest.h>

#include <algorithm>

using namespace trapmodes;
using namespace trapmodes::problems;
using mesh::DomainSpec;
using mesh::ProfileSpec;
using test_support::pi;

namespace {

const double pi2 = pi * pi;

SolveOptions with_k(int k) {
    SolveOptions o;
    o.k = k;
    return o;
}

double semi_lowest(const DomainSpec& spec, mesh::Resolution r, SemiBc bc = SemiBc::mixed) {
    return solve_semicylinder<double>(spec, bc, r, with_k(1)).spectrum.physical_eigenvalues()[0];
}

}  // namespace

TEST_CASE("interval cross-section") {
    const auto one = cross_section_eigens(CrossSectionSpec::interval(), 1);
    CHECK(one.mu[0] == doctest::Approx(pi2).epsilon(1e-15));
    for (double eta : {0.1, 0.5, 0.8}) CHECK(one.phi(1, eta) == doctest::Approx(std::sqrt(2.0) * std::sin(pi * eta)));
    const auto three = cross_section_eigens(CrossSectionSpec::interval(), 3);
    for (int p = 1; p <= 3; ++p) CHECK(three.mu[p - 1] == doctest::Approx(p * p * pi2).epsilon(1e-15));

    // Orthonormality by independent quadrature.
    for (int p = 1; p <= 3; ++p)
        for (int q = 1; q <= 3; ++q) {
            const double g = test_support::simpson([&](double x) { return three.phi(p, x) * three.phi(q, x); }, 0, 1);
            CHECK(std::abs(g - (p == q ? 1.0 : 0.0)) <= 1e-8);
        }
}

TEST_CASE("half interval cross-section") {
    const auto half = cross_section_eigens(CrossSectionSpec::half_interval(), 2);
    CHECK(half.mu[0] == doctest::Approx(pi2).epsilon(1e-15));
    CHECK(half.mu[1] == doctest::Approx(9 * pi2).epsilon(1e-15));
    CHECK(test_support::simpson([&](double x) { return half.phi(1, x) * half.phi(1, x); }, 0.5, 1.0) ==
          doctest::Approx(1.0).epsilon(1e-10));
    CHECK(half.phi(1, 0.5) == doctest::Approx(0.0));
    CHECK(std::abs(half.dphi(1, 1.0)) <= 1e-12);
}

TEST_CASE("unit square polygon converges at second order") {
    const auto sq = CrossSectionSpec::polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
    std::vector<double> err;
    for (int r : {3, 4, 5}) {
        const auto e = cross_section_eigens(sq, 2, r);
        err.push_back(e.mu[0] - 2 * pi2);
        CHECK(e.mu[0] > 0.0);
    }
    CHECK(err[0] / err[1] == doctest::Approx(4.0).epsilon(0.05));
    CHECK(err[1] / err[2] == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("polygon validation") {
    CHECK_THROWS_AS(validate_polygon({{0, 0}, {0, 1}, {1, 1}, {1, 0}}), GeometryError);
    CHECK_THROWS_AS(validate_polygon({{0, 0}, {1, 1}, {1, 0}, {0, 1}}), GeometryError);
    CHECK_THROWS_AS(validate_polygon({{0, 0}, {1, 0}}), GeometryError);
    CHECK_NOTHROW(validate_polygon({{0, 0}, {2, 0}, {2, 1}, {1, 0.4}, {0, 1}}));
}

TEST_CASE("straight thin cylinder, mixed") {
    const double h = 0.2;
    std::vector<double> err;
    for (int n : {16, 32, 64}) {
        const auto r = solve_thin<double>(DomainSpec::straight_cylinder(h), ThinBc::mixed, {n, n}, with_k(2));
        const auto l = r.physical_eigenvalues();
        CHECK(l[0] == doctest::Approx(pi2 / (h * h)).epsilon(2e-2));
        CHECK(l[1] == doctest::Approx(pi2 / (h * h) + pi2 / 4).epsilon(2e-2));
        err.push_back(l[1] - reference_straight(h, 1, 1).lambda);
    }
    CHECK(err[0] / err[1] == doctest::Approx(4.0).epsilon(0.05));
    CHECK(err[1] / err[2] == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("straight thin cylinder, all Neumann") {
    const double h = 0.2;
    const auto r = solve_thin<double>(DomainSpec::straight_cylinder(h), ThinBc::all_neumann, {4, 160}, with_k(4));
    const auto l = r.physical_eigenvalues();
    CHECK(std::abs(l[0]) <= 1e-9);
    const auto& v = r.solution.eigenvectors[0];
    for (double x : v) CHECK(x == doctest::Approx(v[0]).epsilon(1e-8));
    for (int p = 1; p <= 3; ++p) CHECK(l[p] == doctest::Approx(pi2 * p * p / 4).epsilon(1e-3));
}

TEST_CASE("stretched frame returns h^2 lambda") {
    const double h = 0.2;
    auto spec = DomainSpec::distorted_cylinder(h, ProfileSpec::fourier(0.0, {-1.0}), ProfileSpec::zero());
    const auto phys = solve_thin<double>(spec, ThinBc::mixed, {8, 80}, with_k(1));
    spec.frame = mesh::Frame::stretched;
    const auto str = solve_thin<double>(spec, ThinBc::mixed, {8, 80}, with_k(1));
    CHECK(str.lambda_scale == doctest::Approx(1.0 / (h * h)));
    CHECK(str.physical_eigenvalues()[0] == doctest::Approx(phys.physical_eigenvalues()[0]).epsilon(1e-9));
}

TEST_CASE("flat semi-cylinder has no trapped mode") {
    double prev = 1e300;
    for (double L : {4.0, 6.0, 8.0}) {
        const auto r = solve_semicylinder<double>(DomainSpec::semicylinder(ProfileSpec::zero(), L), SemiBc::mixed,
                                                  {16, int(24 * L)}, with_k(2));
        for (bool t : r.trapped) CHECK_FALSE(t);
        const double l = r.spectrum.physical_eigenvalues()[0];
        CHECK(l >= pi2 * (1 - 1e-3));
        CHECK(l < prev);
        CHECK(r.cutoff == doctest::Approx(pi2));
        prev = l;
    }
}

TEST_CASE("dented semi-cylinder traps a mode stable under truncation") {
    const auto H = ProfileSpec::fourier(0.0, {-1.0});
    const double l6 = semi_lowest(DomainSpec::semicylinder(H, 6.0), {16, 144});
    const double l8 = semi_lowest(DomainSpec::semicylinder(H, 8.0), {16, 192});
    CHECK(l8 < pi2 * (1 - 1e-3));
    CHECK(std::abs(l8 - l6) / l8 < 1e-6);
    const auto r = solve_semicylinder<double>(DomainSpec::semicylinder(H, 8.0), SemiBc::mixed, {16, 192}, with_k(1));
    CHECK(r.trapped[0]);
}

TEST_CASE("trapped eigenvalue decreases with L at rate 2 kappa") {
    const auto H = ProfileSpec::fourier(0.0, {-1.0});
    std::vector<double> Ls{2.5, 3.0, 3.5, 4.0}, lam;
    for (double L : Ls) lam.push_back(semi_lowest(DomainSpec::semicylinder(H, L), {8, int(24 * L)}));
    for (std::size_t i = 1; i < lam.size(); ++i) CHECK(lam[i] <= lam[i - 1]);
    std::vector<double> x, y;
    for (std::size_t i = 1; i < lam.size(); ++i) {
        x.push_back(Ls[i]);
        y.push_back(std::log(lam[i - 1] - lam[i]));
    }
    const double kappa = std::sqrt(pi2 - lam.back());
    const auto fit = asymptotics::fit_linear(x, y);
    CHECK(-fit.slope >= 0.9 * 2 * kappa);
}

TEST_CASE("cane head traps a Dirichlet mode") {
    auto spec = DomainSpec::semicylinder(ProfileSpec::zero(), 8.0);
    spec.head_plus = {2.0, 2.0};
    const double head_ground = pi2 * (1 / 4.0 + 1 / 4.0);
    CHECK(head_ground < pi2);
    const auto r = solve_semicylinder<double>(spec, SemiBc::all_dirichlet, {16, 192}, with_k(1));
    const double l = r.spectrum.physical_eigenvalues()[0];
    CHECK(l < pi2);
    // The cane contains the head square, so Dirichlet monotonicity bounds it from above.
    CHECK(l < head_ground);
    CHECK(r.trapped[0]);
}

TEST_CASE("half Neumann spectrum is a subset of the full Neumann spectrum") {
    const double h = 0.2;
    const auto full = solve_thin<double>(DomainSpec::straight_cylinder(h), ThinBc::all_neumann, {8, 40}, with_k(24))
                          .physical_eigenvalues();
    auto half_spec = DomainSpec::straight_cylinder(h);
    half_spec.cut = mesh::Cut::across_half;
    const auto half = solve_thin<double>(half_spec, ThinBc::half_neumann, {4, 40}, with_k(3)).physical_eigenvalues();
    for (double l : half) {
        double best = 1e300;
        for (double f : full) best = std::min(best, std::abs(f - l) / l);
        CHECK(best <= 1e-8);
    }
}

TEST_CASE("boundary presets") {
    const auto thin = DomainSpec::straight_cylinder(0.2);
    const auto m = thin_conditions(thin, ThinBc::mixed, {});
    CHECK(m.at(mesh::BoundaryTag::lateral) == mesh::BcType::dirichlet);
    CHECK(m.at(mesh::BoundaryTag::end_plus) == mesh::BcType::neumann);
    CHECK_THROWS_AS(thin_conditions(thin, ThinBc::half_neumann, {}), PreconditionError);
    CHECK(parse_thin_bc("all_dirichlet") == ThinBc::all_dirichlet);
    CHECK_THROWS_AS(parse_semi_bc("sideways"), ConfigError);
    CHECK_THROWS_AS(solve_semicylinder<double>(thin, SemiBc::mixed, {4, 8}, {}), PreconditionError);
}

TEST_CASE("reference_straight examples") {
    CHECK(reference_straight(0.1, 1, 1).lambda == doctest::Approx(100 * pi2 + pi2 / 4).epsilon(1e-15));
    CHECK(reference_straight(1.0, 1, 2).lambda == doctest::Approx(2 * pi2).epsilon(1e-15));
    for (int q : {0, 1, 2}) {
        const auto r = reference_straight(0.3, 1, q);
        // ‖u‖² over [0,h]×[-1,1] by tensor Simpson.
        const double norm = test_support::simpson(
            [&](double y) {
                return test_support::simpson([&](double z) { return r.eval(y, z) * r.eval(y, z); }, -1, 1, 400);
            },
            0, 0.3, 400);
        CHECK(norm == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("reference_trapezoid_limit") {
    const auto a = reference_trapezoid_limit(ProfileSpec::polynomial({1.0, 0.0, -0.5}, -1.0, 1.0), 0);
    CHECK(a.H0 == doctest::Approx(1.0));
    CHECK(a.b == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(a.leading == doctest::Approx(pi2));
    // Literal coefficient bH(0)⁻³ and the consistent π² bH(0)⁻³.
    CHECK(a.B_without_pi == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(a.Lambda_without_pi == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(a.B == doctest::Approx(pi2).epsilon(1e-6));
    CHECK(a.Lambda == doctest::Approx(pi).epsilon(1e-6));
    const auto a1 = reference_trapezoid_limit(ProfileSpec::polynomial({1.0, 0.0, -0.5}, -1.0, 1.0), 1);
    CHECK(a1.Lambda_without_pi == doctest::Approx(3.0).epsilon(1e-6));

    const auto b = reference_trapezoid_limit(ProfileSpec::polynomial({2.0, 0.0, -1.0}, -1.0, 1.0), 0);
    CHECK(b.b == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(b.B_without_pi == doctest::Approx(0.25).epsilon(1e-6));
    CHECK(b.Lambda_without_pi == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(b.leading == doctest::Approx(pi2 / 4));

    CHECK_THROWS_AS(reference_trapezoid_limit(ProfileSpec::polynomial({1.0}, -1.0, 1.0), 0), PreconditionError);
}

TEST_CASE("trapezoid default shift is a lower bound") {
    const double h = 0.1;
    const auto H = ProfileSpec::polynomial({1.0, 0.0, -0.5}, -1.0, 1.0);
    const auto r = solve_trapezoid<double>(DomainSpec::trapezoid(h, H), {16, 120}, with_k(2));
    const auto l = r.physical_eigenvalues();
    CHECK(l[0] > pi2 / (h * h));
    CHECK(l[1] > l[0]);
}
