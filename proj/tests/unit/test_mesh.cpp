#include "support.hpp"

#include <trapmodes/error.hpp>
#include <trapmodes/mesh.hpp>

#include <doctest.h>

#include <algorithm>
#include <set>
#include <sstream>

using namespace trapmodes;
using namespace trapmodes::mesh;
using test_support::pi;

namespace {

std::set<std::pair<long long, long long>> node_set(const Mesh& m) {
    std::set<std::pair<long long, long long>> s;
    for (const auto& p : m.nodes) s.insert({std::llround(p[0] * 1e9), std::llround(p[1] * 1e9)});
    return s;
}

Mesh unit_square_two_triangles() {
    Mesh m;
    m.nodes = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    m.triangles = {{0, 1, 2}, {0, 2, 3}};
    m.boundary = {{0, 1, BoundaryTag::lateral}, {1, 2, BoundaryTag::lateral}, {2, 3, BoundaryTag::lateral},
                  {3, 0, BoundaryTag::lateral}};
    return m;
}

double total_area(const Mesh& m) {
    double a = 0.0;
    for (const auto& t : m.triangles) a += signed_area(m, t);
    return a;
}

}  // namespace

TEST_CASE("profile_eval examples") {
    CHECK(profile_eval(ProfileSpec::fourier(0.0, {}), 0.5) == 0.0);
    CHECK(profile_eval(ProfileSpec::fourier(0.0, {-1.0}), 0.0) == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(profile_eval(ProfileSpec::table({0.0, 0.5, 1.0}, {0.0, 1.0, 0.0}), 0.25) == doctest::Approx(0.5));
    CHECK_THROWS_AS(profile_eval(ProfileSpec::fourier(0.0, {1.0}), 1.5), DomainError);
    CHECK_THROWS_AS(profile_eval(ProfileSpec::fourier(0.0, {1.0}), -0.1), DomainError);
}

TEST_CASE("fourier profiles evaluate the defining series") {
    const auto p = ProfileSpec::fourier(0.3, {0.5, -0.25}, {0.125});
    for (double eta : {0.0, 0.17, 0.5, 0.93, 1.0}) {
        const double expected = 0.3 + 0.5 * std::cos(2 * pi * eta) - 0.25 * std::cos(4 * pi * eta) +
                                0.125 * std::sin(2 * pi * eta);
        CHECK(profile_eval(p, eta) == doctest::Approx(expected).epsilon(1e-14));
    }
}

TEST_CASE("table profiles reject malformed nodes") {
    CHECK_THROWS_AS(validate_profile(ProfileSpec::table({0.0, 0.7, 0.6, 1.0}, {0, 0, 0, 0})), ConfigError);
    CHECK_THROWS_AS(validate_profile(ProfileSpec::table({0.1, 1.0}, {0, 0})), ConfigError);
    CHECK_THROWS_AS(validate_profile(ProfileSpec::table({0.0, 0.9}, {0, 0})), ConfigError);
}

TEST_CASE("straight cylinder mesh example") {
    const auto m = build_mesh(DomainSpec::straight_cylinder(0.5), {2, 4});
    CHECK(m.nodes.size() == 15);
    CHECK(m.triangles.size() == 16);
    validate_mesh(m);
    int lateral = 0;
    for (const auto& e : m.boundary) {
        if (e.tag != BoundaryTag::lateral) continue;
        ++lateral;
        const double y = m.nodes[e.a][0];
        CHECK((y == 0.0 || y == doctest::Approx(0.5)));
        CHECK(m.nodes[e.b][0] == doctest::Approx(y));
    }
    CHECK(lateral == 8);
    CHECK(mesh_stats(m).total_area == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("flat semi-cylinder mesh has the artificial face at zeta = L") {
    const auto m = build_mesh(DomainSpec::semicylinder(ProfileSpec::zero(), 3.0), {4, 12});
    validate_mesh(m);
    double lo_x = 1e9, hi_x = -1e9, lo_y = 1e9, hi_y = -1e9;
    for (const auto& p : m.nodes) {
        lo_x = std::min(lo_x, p[0]);
        hi_x = std::max(hi_x, p[0]);
        lo_y = std::min(lo_y, p[1]);
        hi_y = std::max(hi_y, p[1]);
    }
    CHECK(lo_x == 0.0);
    CHECK(hi_x == doctest::Approx(1.0));
    CHECK(lo_y == doctest::Approx(0.0));
    CHECK(hi_y == doctest::Approx(3.0));
    int artificial = 0;
    for (const auto& e : m.boundary)
        if (e.tag == BoundaryTag::artificial) {
            ++artificial;
            CHECK(m.nodes[e.a][1] == doctest::Approx(3.0).epsilon(1e-14));
            CHECK(m.nodes[e.b][1] == doctest::Approx(3.0).epsilon(1e-14));
        }
    CHECK(artificial == 4);
}

TEST_CASE("distorted ends follow the profile exactly") {
    const double h = 0.2;
    const auto Hp = ProfileSpec::fourier(0.0, {-1.0});
    const auto Hm = ProfileSpec::fourier(0.1, {0.0, 0.3});
    for (Resolution r : {Resolution{4, 20}, Resolution{7, 33}, Resolution{16, 96}}) {
        const auto m = build_mesh(DomainSpec::distorted_cylinder(h, Hp, Hm), r);
        validate_mesh(m);
        std::set<int> plus, minus;
        for (const auto& e : m.boundary) {
            if (e.tag == BoundaryTag::end_plus) plus.insert({e.a, e.b});
            if (e.tag == BoundaryTag::end_minus) minus.insert({e.a, e.b});
        }
        CHECK(int(plus.size()) == r.n_across + 1);
        for (int i : plus) {
            const auto& p = m.nodes[i];
            CHECK(std::abs(p[1] - (1.0 - h * std::cos(2 * pi * p[0] / h))) <= 1e-12);
        }
        for (int i : minus) {
            const auto& p = m.nodes[i];
            CHECK(std::abs(p[1] - (-1.0 - h * profile_eval(Hm, p[0] / h))) <= 1e-12);
        }
    }
}

TEST_CASE("stretched frame maps onto the physical frame") {
    const double h = 0.15;
    auto spec = DomainSpec::distorted_cylinder(h, ProfileSpec::fourier(0.0, {-1.0}), ProfileSpec::zero());
    const auto phys = build_mesh(spec, {6, 30});
    spec.frame = Frame::stretched;
    const auto str = build_mesh(spec, {6, 30});
    REQUIRE(phys.nodes.size() == str.nodes.size());
    for (std::size_t i = 0; i < phys.nodes.size(); ++i) {
        const auto q = stretched_to_physical(h, str.nodes[i]);
        CHECK(q[0] == doctest::Approx(phys.nodes[i][0]).epsilon(1e-12));
        CHECK(q[1] == doctest::Approx(phys.nodes[i][1]).epsilon(1e-12));
    }
}

TEST_CASE("every boundary edge carries exactly one tag") {
    const std::vector<DomainSpec> specs{
        DomainSpec::straight_cylinder(0.3),
        DomainSpec::distorted_cylinder(0.2, ProfileSpec::fourier(0.0, {-1.0}), ProfileSpec::fourier(0.0, {0.5})),
        DomainSpec::trapezoid(0.2, ProfileSpec::polynomial({1.0, 0.0, -0.5}, -1.0, 1.0)),
        DomainSpec::semicylinder(ProfileSpec::fourier(0.0, {-1.0}), 4.0),
        DomainSpec::half_semicylinder(ProfileSpec::fourier(0.0, {1.0}), 4.0),
        DomainSpec::dumbbell(0.2, {2.0, 2.0}, {1.5, 1.5}),
    };
    for (const auto& s : specs) {
        const auto m = build_mesh(s, {6, 24});
        validate_mesh(m);
        std::set<std::pair<int, int>> seen;
        for (const auto& e : m.boundary) CHECK(seen.insert({std::min(e.a, e.b), std::max(e.a, e.b)}).second);
    }
}

TEST_CASE("half domains tag the cut face as symmetry") {
    auto spec = DomainSpec::distorted_cylinder(0.2, ProfileSpec::fourier(0.0, {1.0}), ProfileSpec::fourier(0.0, {1.0}));
    spec.cut = Cut::across_half;
    const auto m = build_mesh(spec, {4, 20});
    validate_mesh(m);
    int sym = 0;
    for (const auto& e : m.boundary)
        if (e.tag == BoundaryTag::symmetry) {
            ++sym;
            CHECK(m.nodes[e.a][0] == doctest::Approx(0.1));
        }
    CHECK(sym == 20);
}

TEST_CASE("refine_uniform examples") {
    const auto sq = unit_square_two_triangles();
    validate_mesh(sq);
    const auto r = refine_uniform(sq);
    CHECK(r.triangles.size() == 8);
    CHECK(r.nodes.size() == 9);
    validate_mesh(r);
    CHECK(total_area(r) == doctest::Approx(1.0).epsilon(1e-12));

    const auto curved = build_mesh(
        DomainSpec::distorted_cylinder(0.2, ProfileSpec::fourier(0.0, {-1.0}), ProfileSpec::zero()), {5, 17});
    const auto rc = refine_uniform(curved);
    validate_mesh(rc);
    CHECK(std::abs(total_area(rc) - total_area(curved)) <= 1e-12);
}

TEST_CASE("refining twice reproduces the quadrupled structured grid") {
    const auto twice = refine_uniform(refine_uniform(build_mesh(DomainSpec::straight_cylinder(0.5), {2, 4})));
    const auto direct = build_mesh(DomainSpec::straight_cylinder(0.5), {8, 16});
    CHECK(node_set(twice) == node_set(direct));
    CHECK(twice.triangles.size() == direct.triangles.size());
}

TEST_CASE("mesh_stats examples") {
    const auto sq = build_mesh(DomainSpec::straight_cylinder(2.0), {4, 4});
    CHECK(mesh_stats(sq).min_angle_deg == doctest::Approx(45.0));
    CHECK(mesh_stats(build_mesh(DomainSpec::straight_cylinder(0.5), {3, 9})).total_area ==
          doctest::Approx(1.0).epsilon(1e-12));

    // Trapezoid area against h ∫H dz computed independently.
    const double h = 0.1;
    const auto H = ProfileSpec::polynomial({1.0, 0.0, -0.5}, -1.0, 1.0);
    const double exact = h * test_support::simpson([](double z) { return 1.0 - 0.5 * z * z; }, -1.0, 1.0);
    CHECK(exact == doctest::Approx(h * (2.0 - 1.0 / 3.0)).epsilon(1e-12));
    double prev = 0.0;
    for (int n : {8, 16, 32}) {
        const double err = std::abs(mesh_stats(build_mesh(DomainSpec::trapezoid(h, H), {4, n})).total_area - exact);
        CHECK(err < 1e-2 * exact);
        if (prev > 0.0) CHECK(prev / err == doctest::Approx(4.0).epsilon(0.05));
        prev = err;
    }
}

TEST_CASE("curved-end area") {
    const double h = 0.2;
    // Node sampling integrates trigonometric profiles of degree below n_across exactly.
    const auto dent = DomainSpec::distorted_cylinder(h, ProfileSpec::fourier(0.0, {-1.0}), ProfileSpec::zero());
    for (int n : {4, 8, 16}) CHECK(std::abs(mesh_stats(build_mesh(dent, {n, 40})).total_area - 2.0 * h) <= 1e-12);

    // A tent with its apex off the grid converges at second order.
    const auto tent = DomainSpec::distorted_cylinder(h, ProfileSpec::table({0.0, 0.5, 1.0}, {0.0, 1.0, 0.0}),
                                                     ProfileSpec::zero());
    const double exact = 2.0 * h + h * h * 0.5;
    std::vector<double> err;
    for (int n : {3, 9, 27}) err.push_back(std::abs(mesh_stats(build_mesh(tent, {n, 40})).total_area - exact));
    for (std::size_t i = 1; i < err.size(); ++i) CHECK(err[i - 1] / err[i] == doctest::Approx(9.0).epsilon(0.05));
}

TEST_CASE("mesh text format round-trips bit for bit") {
    const auto m = build_mesh(DomainSpec::semicylinder(ProfileSpec::fourier(0.0, {-1.0}), 3.0), {4, 12});
    std::ostringstream out;
    write_mesh(out, m);
    std::istringstream in(out.str());
    const auto back = read_mesh(in);
    REQUIRE(back.nodes.size() == m.nodes.size());
    for (std::size_t i = 0; i < m.nodes.size(); ++i) CHECK(back.nodes[i] == m.nodes[i]);
    CHECK(back.triangles == m.triangles);
    REQUIRE(back.boundary.size() == m.boundary.size());
    for (std::size_t i = 0; i < m.boundary.size(); ++i) CHECK(back.boundary[i].tag == m.boundary[i].tag);
    std::ostringstream again;
    write_mesh(again, back);
    CHECK(again.str() == out.str());
}

TEST_CASE("validate_mesh rejects broken meshes") {
    auto m = unit_square_two_triangles();
    std::swap(m.triangles[0][1], m.triangles[0][2]);
    CHECK_THROWS_AS(validate_mesh(m), GeometryError);

    auto dup = unit_square_two_triangles();
    dup.boundary.push_back({0, 1, BoundaryTag::end_plus});
    CHECK_THROWS_AS(validate_mesh(dup), GeometryError);

    auto open = unit_square_two_triangles();
    open.boundary.pop_back();
    CHECK_THROWS_AS(validate_mesh(open), GeometryError);
}

TEST_CASE("domain invariants") {
    CHECK_THROWS(validate_domain(DomainSpec::straight_cylinder(0.0)));
    CHECK_THROWS(validate_domain(DomainSpec::semicylinder(ProfileSpec::fourier(0.0, {-1.0}), 1.5)));
    // Ends that cross: 1 + hH₊ <= -1 - hH₋.
    CHECK_THROWS(validate_domain(
        DomainSpec::distorted_cylinder(1.0, ProfileSpec::fourier(-1.5, {}), ProfileSpec::fourier(-1.5, {}))));
    CHECK_THROWS_AS(build_mesh(DomainSpec::straight_cylinder(0.5), {1, 4}), Error);
}

TEST_CASE("domain config round-trips") {
    auto spec = DomainSpec::distorted_cylinder(0.15, ProfileSpec::fourier(0.0, {-1.0}, {0.25}),
                                               ProfileSpec::table({0.0, 0.5, 1.0}, {0.0, 0.3, 0.0}));
    spec.frame = Frame::stretched;
    spec.bc[BoundaryTag::lateral] = BcType::dirichlet;
    const auto text = domain_to_config(spec);
    CHECK(text.find("schema") != std::string::npos);
    const auto back = domain_from_config(text);
    CHECK(domain_to_config(back) == text);
    CHECK(back.frame == Frame::stretched);
    CHECK(profile_eval(back.H_minus, 0.25) == doctest::Approx(0.15));
}
