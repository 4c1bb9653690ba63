#include "support.hpp"

#include <trapmodes/conditions.hpp>
#include <trapmodes/error.hpp>
#include <trapmodes/problems.hpp>

#include <doctest.h>

#include <random>

using namespace trapmodes;
using namespace trapmodes::conditions;
using mesh::ProfileSpec;
using problems::CrossSectionSpec;
using test_support::pi;
using test_support::simpson;

namespace {

const double pi2 = pi * pi;

const problems::CrossSectionEigens& interval() {
    static const auto e = problems::cross_section_eigens(CrossSectionSpec::interval(), 3);
    return e;
}

const problems::CrossSectionEigens& half() {
    static const auto e = problems::cross_section_eigens(CrossSectionSpec::half_interval(), 2);
    return e;
}

// ∫₀¹ H (φ'² − π²φ²) with φ = √2 sin πη, written out independently.
double gradient_oracle(const ProfileSpec& H) {
    return simpson([&](double x) { return mesh::profile_eval(H, x) * 2 * pi2 * std::cos(2 * pi * x); }, 0, 1);
}

ProfileSpec random_fourier(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1, 1);
    return ProfileSpec::fourier(u(rng), {u(rng), u(rng), u(rng)}, {u(rng), u(rng)});
}

}  // namespace

TEST_CASE("gradient form on the interval") {
    CHECK(condition_gradient_form(interval(), ProfileSpec::fourier(0, {1.0})).value ==
          doctest::Approx(pi2).epsilon(1e-10));
    const auto dent = condition_gradient_form(interval(), ProfileSpec::fourier(0, {-1.0}));
    CHECK(dent.value == doctest::Approx(-pi2).epsilon(1e-10));
    CHECK(dent.verdict == Verdict::satisfied);
    CHECK_FALSE(dent.inconclusive);
    CHECK_FALSE(dent.inputs_digest.empty());

    const auto flat = condition_gradient_form(interval(), ProfileSpec::fourier(0.7, {}));
    CHECK(std::abs(flat.value) <= 1e-12);
    CHECK(flat.inconclusive);
    CHECK(flat.verdict == Verdict::not_satisfied);
}

TEST_CASE("gradient form agrees with an independent quadrature") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 5; ++i) {
        const auto H = random_fourier(rng);
        CHECK(condition_gradient_form(interval(), H).value == doctest::Approx(gradient_oracle(H)).epsilon(1e-8));
    }
    const auto tent = ProfileSpec::table({0, 0.3, 1}, {0, 1, 0.2});
    CHECK(condition_gradient_form(interval(), tent).value == doctest::Approx(gradient_oracle(tent)).epsilon(1e-6));
}

TEST_CASE("laplacian form") {
    CHECK(condition_laplacian_form(interval(), ProfileSpec::fourier(0, {-1.0})).value ==
          doctest::Approx(-2 * pi2).epsilon(1e-10));
    CHECK(std::abs(condition_laplacian_form(interval(), ProfileSpec::polynomial({0.3, 2.0}, 0, 1)).value) <= 1e-12);
    CHECK_THROWS_AS(condition_laplacian_form(interval(), ProfileSpec::table({0, 0.5, 1}, {0, 1, 0})),
                    PreconditionError);

    // Twice the gradient form for smooth profiles.
    std::mt19937_64 rng(11);
    for (int i = 0; i < 5; ++i) {
        const auto H = random_fourier(rng);
        CHECK(condition_laplacian_form(interval(), H).value ==
              doctest::Approx(2 * condition_gradient_form(interval(), H).value).epsilon(1e-8).scale(1));
    }
}

TEST_CASE("fourier form") {
    CHECK(condition_fourier_2d(ProfileSpec::fourier(0, {-1.0})).value == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(std::abs(condition_fourier_2d(ProfileSpec::fourier(0, {}, {1.0})).value) <= 1e-12);
    CHECK(std::abs(condition_fourier_2d(ProfileSpec::fourier(0, {0.0, 1.0})).value) <= 1e-12);
    // Peak at the centre: ∫ tent·cos 2πη = -2/π².
    const auto tent = ProfileSpec::table({0, 0.5, 1}, {0, 1, 0});
    CHECK(condition_fourier_2d(tent).value == doctest::Approx(-2 / pi2).epsilon(1e-8));
    CHECK(condition_fourier_2d(tent).verdict == Verdict::satisfied);
}

TEST_CASE("symmetric half form") {
    const auto c = ProfileSpec::fourier(0, {1.0});
    CHECK(condition_symmetric_half(half(), c).value == doctest::Approx(-pi2).epsilon(1e-10));
    CHECK(condition_symmetric_half(half(), ProfileSpec::fourier(0, {-1.0})).value ==
          doctest::Approx(pi2).epsilon(1e-10));
    CHECK(std::abs(condition_symmetric_half(half(), ProfileSpec::fourier(2.0, {})).value) <= 1e-12);
    CHECK_THROWS_AS(condition_symmetric_half(half(), ProfileSpec::fourier(0, {}, {1.0})), PreconditionError);
    CHECK_THROWS_AS(condition_symmetric_half(interval(), c), PreconditionError);
}

TEST_CASE("epsilon order breaks the harmonic tie") {
    const auto linear = ProfileSpec::table({0, 1}, {0, 1});
    CHECK(std::abs(condition_gradient_form(interval(), linear).value) <= 1e-10);
    const auto r = condition_epsilon_order(interval(), linear);
    CHECK(r.value == doctest::Approx(1.5).epsilon(1e-8));
    CHECK(r.verdict == Verdict::not_satisfied);
}

TEST_CASE("conditions are linear in H") {
    std::mt19937_64 rng(3);
    const auto H = random_fourier(rng);
    auto scaled = H;
    scaled.a0 *= -2.5;
    for (auto& x : scaled.a) x *= -2.5;
    for (auto& x : scaled.b) x *= -2.5;
    CHECK(condition_gradient_form(interval(), scaled).value ==
          doctest::Approx(-2.5 * condition_gradient_form(interval(), H).value));
    CHECK(condition_fourier_2d(scaled).value == doctest::Approx(-2.5 * condition_fourier_2d(H).value));
}

TEST_CASE("gradient form on a polygon field") {
    const auto sq = problems::cross_section_eigens(CrossSectionSpec::polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}}), 1, 5);
    auto H = [](double x, double) { return std::cos(2 * pi * x); };
    // φ = 2 sin πx sin πy, μ = 2π².
    const double oracle = simpson(
        [&](double x) {
            return simpson(
                [&](double y) {
                    const double sx = std::sin(pi * x), cx = std::cos(pi * x);
                    const double sy = std::sin(pi * y), cy = std::cos(pi * y);
                    const double grad = 4 * pi2 * (cx * cx * sy * sy + sx * sx * cy * cy);
                    return H(x, y) * (grad - 2 * pi2 * 4 * sx * sx * sy * sy);
                },
                0, 1, 200);
        },
        0, 1, 200);
    CHECK(condition_gradient_form(sq, H).value == doctest::Approx(oracle).epsilon(2e-2));
    CHECK_THROWS_AS(condition_gradient_form(interval(), H), PreconditionError);
}

TEST_CASE("explain integrand integrates to the condition value") {
    const auto H = ProfileSpec::fourier(0.1, {-0.8, 0.3});
    const auto s = explain_integrand(ConditionId::gradient_form, interval(), H, 401);
    REQUIRE(s.eta.size() == 401);
    double trap = 0;
    for (std::size_t i = 1; i < s.eta.size(); ++i)
        trap += 0.5 * (s.value[i] + s.value[i - 1]) * (s.eta[i] - s.eta[i - 1]);
    CHECK(trap == doctest::Approx(condition_gradient_form(interval(), H).value).epsilon(1e-3));
    CHECK_THROWS_AS(explain_integrand(ConditionId::gradient_form, interval(), H, 1), DomainError);
}

TEST_CASE("trial quotient") {
    for (double eps : {0.01, 0.3, 1.0})
        CHECK(trial_quotient(interval(), ProfileSpec::zero(), eps) == doctest::Approx(pi2 + eps * eps).epsilon(1e-10));
    const auto scan = rayleigh_scan(interval(), ProfileSpec::fourier(0, {-1.0}), default_epsilon_grid());
    CHECK(scan.verdict == Verdict::satisfied);
    CHECK(scan.best_quotient < pi2);
    CHECK(scan.cutoff == doctest::Approx(pi2));
    CHECK(scan.slope_at_zero == doctest::Approx(-2 * pi2).epsilon(1e-8));
    CHECK_THROWS_AS(trial_quotient(interval(), ProfileSpec::zero(), 0.0), DomainError);
    CHECK_THROWS_AS(rayleigh_scan(interval(), ProfileSpec::zero(), {0.3, 0.1}), DomainError);
}

TEST_CASE("quotient slope at zero has the sign of the gradient form") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 5; ++i) {
        const auto H = random_fourier(rng);
        const double g = condition_gradient_form(interval(), H).value;
        const double e = 1e-4;
        const double fd = (trial_quotient(interval(), H, e) - pi2) / e;
        CHECK(fd == doctest::Approx(2 * g).epsilon(1e-2));
    }
}

TEST_CASE("a satisfied condition predicts a trapped mode") {
    for (const auto& H : {ProfileSpec::fourier(0, {-1.0}), ProfileSpec::fourier(0, {-0.5, 0.2})}) {
        REQUIRE(condition_gradient_form(interval(), H).verdict == Verdict::satisfied);
        problems::SolveOptions o;
        const auto r = problems::solve_semicylinder<double>(mesh::DomainSpec::semicylinder(H, 8.0),
                                                            problems::SemiBc::mixed, {16, 192}, o);
        CHECK(r.spectrum.physical_eigenvalues()[0] < pi2 * (1 - 1e-4));
    }
}
