// Acceptance suite: one PASS/FAIL line per criterion.
//
// A criterion listed in `expected_failures` is still evaluated with its
// literal threshold; its failure is reported but does not fail the run, and
// an unexpected pass does.

#include <trapmodes/asymptotics.hpp>
#include <trapmodes/conditions.hpp>
#include <trapmodes/dense.hpp>
#include <trapmodes/localization.hpp>
#include <trapmodes/problems.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace trapmodes;
using mesh::DomainSpec;
using mesh::ProfileSpec;

namespace {

constexpr double pi = std::numbers::pi;
constexpr double pi2 = pi * pi;

const std::map<int, std::string> expected_failures = {
    {10, "the stated target 2j+1 omits a factor pi from the oscillator coefficient; the computed corrections "
         "agree with pi(2j+1) instead (see the README)"},
};

struct Outcome {
    bool passed = false;
    std::string detail;
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

ProfileSpec dent() { return ProfileSpec::fourier(0.0, {-1.0}); }

DomainSpec stretched(DomainSpec d) {
    d.frame = mesh::Frame::stretched;
    return d;
}

const std::vector<double> sweep_hs{0.2, 0.15, 0.1, 0.075, 0.05};

// Shared by criteria 6, 7 and 8.
const asymptotics::SweepResult& dent_sweep() {
    static const asymptotics::SweepResult result = [] {
        asymptotics::SweepSpec s;
        s.thin = [](double h) { return stretched(DomainSpec::distorted_cylinder(h, dent(), ProfileSpec::zero())); };
        s.semi = [](double L) { return DomainSpec::semicylinder(dent(), L); };
        s.hs = sweep_hs;
        return asymptotics::sweep_h(s);
    }();
    return result;
}

std::vector<double> richardson(const std::vector<double>& coarse, const std::vector<double>& fine) {
    std::vector<double> out(coarse.size());
    for (std::size_t i = 0; i < coarse.size(); ++i) out[i] = (4.0 * fine[i] - coarse[i]) / 3.0;
    return out;
}

std::vector<double> semi_lambda(const DomainSpec& spec, int k) {
    const asymptotics::ResolutionPolicy policy;
    problems::SolveOptions opt;
    opt.k = k;
    const auto c = problems::solve_semicylinder<double>(spec, problems::SemiBc::mixed,
                                                        asymptotics::grid_for(policy, spec.L, 0), opt);
    const auto f = problems::solve_semicylinder<double>(spec, problems::SemiBc::mixed,
                                                        asymptotics::grid_for(policy, spec.L, 1), opt);
    return richardson(c.spectrum.physical_eigenvalues(), f.spectrum.physical_eigenvalues());
}

// Independent oracle: Simpson's rule on a fine grid.
double simpson(const std::function<double(double)>& f, double a, double b, int n = 20000) {
    const double dx = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * dx);
    return s * dx / 3.0;
}

Outcome c1_rectangle() {
    const double h = 0.2;
    const double exact = pi2 / (h * h) + pi2 / 4.0;
    std::vector<double> err;
    for (int n : {20, 40, 80}) {
        problems::SolveOptions opt;
        opt.k = 2;
        const auto r = problems::solve_thin<double>(DomainSpec::straight_cylinder(h), problems::ThinBc::mixed, {n, n}, opt);
        err.push_back(std::abs(r.physical_eigenvalues()[1] - exact) / exact);
    }
    const double r1 = err[0] / err[1], r2 = err[1] / err[2];
    const bool ok = err[2] < 1e-3 && r1 >= 3.5 && r1 <= 4.5 && r2 >= 3.5 && r2 <= 4.5;
    return {ok, "rel error " + fmt("%.3e", err[2]) + " at 80x80, ratios " + fmt("%.3f", r1) + ", " + fmt("%.3f", r2)};
}

Outcome c2_oracle() {
    struct Case {
        std::string name;
        DomainSpec spec;
        mesh::Resolution res;
    };
    std::vector<Case> cases;
    {
        auto d = DomainSpec::straight_cylinder(0.2);
        d.bc = problems::thin_conditions(d, problems::ThinBc::mixed, {});
        cases.push_back({"straight rectangle", d, {8, 40}});
    }
    {
        auto d = stretched(DomainSpec::distorted_cylinder(0.2, dent(), ProfileSpec::zero()));
        d.bc = problems::thin_conditions(d, problems::ThinBc::mixed, {});
        cases.push_back({"distorted thin", d, {8, 40}});
    }
    {
        auto d = DomainSpec::semicylinder(dent(), 4.0);
        d.bc = problems::semi_conditions(d, problems::SemiBc::mixed, {});
        cases.push_back({"semi-cylinder", d, {8, 40}});
    }
    {
        auto d = DomainSpec::half_semicylinder(ProfileSpec::fourier(0.0, {1.0}), 4.0);
        d.bc = problems::semi_conditions(d, problems::SemiBc::half_mixed, {});
        cases.push_back({"half semi-cylinder", d, {6, 40}});
    }
    {
        auto d = DomainSpec::trapezoid(0.2, ProfileSpec::polynomial({1.0, 0.0, -0.5}, -1.0, 1.0));
        d.bc = {{mesh::BoundaryTag::lateral, mesh::BcType::dirichlet},
                {mesh::BoundaryTag::end_plus, mesh::BcType::dirichlet},
                {mesh::BoundaryTag::end_minus, mesh::BcType::dirichlet}};
        cases.push_back({"trapezoid", d, {8, 40}});
    }
    {
        auto d = stretched(DomainSpec::distorted_cylinder(0.2, dent(), ProfileSpec::zero()));
        d.bc = problems::thin_conditions(d, problems::ThinBc::all_neumann, {});
        cases.push_back({"all-Neumann thin", d, {6, 40}});
    }
    double worst = 0.0;
    int checked = 0;
    std::string names;
    for (const auto& c : cases) {
        problems::SolveOptions opt;
        opt.k = 5;
        const auto r = problems::solve_spectrum<double>(c.spec, c.res, opt);
        if (r.system.n_free > 500) continue;
        const auto all = eig::dense_oracle<double>(r.system.K, r.system.M);
        for (int p = 0; p < 5; ++p) {
            const double scale = std::max(std::abs(all[p]), 1.0);
            worst = std::max(worst, std::abs(r.solution.eigenvalues[p] - all[p]) / scale);
        }
        ++checked;
        names += (names.empty() ? "" : ", ") + c.name + " (" + std::to_string(r.system.n_free) + ")";
    }
    return {checked == int(cases.size()) && worst <= 1e-10,
            std::to_string(checked) + " meshes [" + names + "], max rel diff " + fmt("%.2e", worst)};
}

Outcome c3_existence() {
    const auto fourier = conditions::condition_fourier_2d(dent());
    const double L6 = semi_lambda(DomainSpec::semicylinder(dent(), 6.0), 1)[0];
    const double L8 = semi_lambda(DomainSpec::semicylinder(dent(), 8.0), 1)[0];
    const double change = std::abs(L8 - L6) / L8;
    const bool ok = std::abs(fourier.value + 0.5) < 1e-14 && L8 < pi2 * (1.0 - 1e-3) && change < 1e-6;
    return {ok, "fourier " + fmt("%.15g", fourier.value) + ", Lambda1(L=8) " + fmt("%.12f", L8) + ", L6->L8 change " +
                    fmt("%.2e", change)};
}

Outcome c4_no_false() {
    double lowest = 1e300;
    for (double L : {4.0, 6.0, 8.0}) lowest = std::min(lowest, semi_lambda(DomainSpec::semicylinder(ProfileSpec::zero(), L), 1)[0]);
    return {lowest >= pi2 * (1.0 - 1e-3), "lowest Lambda over L = 4, 6, 8: " + fmt("%.9f", lowest) + " (pi^2 = " +
                                              fmt("%.9f", pi2) + ")"};
}

Outcome c5_identity() {
    const auto eig = problems::cross_section_eigens(problems::CrossSectionSpec::interval(), 1);
    const std::vector<ProfileSpec> profiles{
        dent(),
        ProfileSpec::fourier(0.3, {0.5, -0.2}),
        ProfileSpec::fourier(0.0, {0.0, 1.0}, {0.4}),
        ProfileSpec::fourier(-0.1, {0.2, 0.1, -0.3}, {0.0, 0.5}),
        ProfileSpec::fourier(1.0, {}, {1.0}),
    };
    double worst = 0.0;
    for (const auto& H : profiles) {
        const double g = conditions::condition_gradient_form(eig, H).value;
        const double l = conditions::condition_laplacian_form(eig, H).value;
        worst = std::max(worst, std::abs(l - 2.0 * g));
    }
    return {worst <= 1e-9, "5 profiles, max |laplacian - 2 gradient| " + fmt("%.2e", worst)};
}

Outcome c6_asymptotics() {
    const auto& r = dent_sweep();
    if (r.failure) return {false, "sweep failed: " + *r.failure};
    bool decreasing = true;
    std::string devs;
    for (std::size_t i = 0; i < r.records.size(); ++i) {
        const double d = r.records[i].deviation_congruent[0];
        devs += (i ? ", " : "") + fmt("%.1e", d);
        if (i > 0 && !(d < r.records[i - 1].deviation_congruent[0])) decreasing = false;
    }
    if (!r.fit_congruent) return {false, "no fit"};
    const auto& f = *r.fit_congruent;
    return {decreasing && f.tau > 0 && f.r2 > 0.95, "deviations " + devs + "; tau " + fmt("%.3f", f.tau) + ", R^2 " +
                                                        fmt("%.6f", f.r2)};
}

Outcome c7_localization() {
    const auto& r = dent_sweep();
    if (r.records.size() != sweep_hs.size()) return {false, "sweep incomplete"};
    bool monotone = true;
    for (std::size_t i = 1; i < r.records.size(); ++i)
        if (!(r.records[i].localization[0].band_mass[1] < r.records[i - 1].localization[0].band_mass[1])) monotone = false;
    const double last = r.records.back().localization[0].band_mass[1];

    // Straight rectangle, (p, q) = (1, 1): the z-profile is cos(pi(z+1)/2).
    auto w = [](double z) { return std::pow(std::cos(pi / 2.0 * (z + 1.0)), 2); };
    const double oracle = simpson(w, -1.0 / 3.0, 1.0 / 3.0) / simpson(w, -1.0, 1.0);
    problems::SolveOptions opt;
    opt.k = 2;
    const auto s = problems::solve_thin<double>(DomainSpec::straight_cylinder(0.2), problems::ThinBc::mixed, {16, 96}, opt);
    const auto nodal = fem::to_nodal(s.system, s.solution.eigenvectors[1]);
    const double straight = asymptotics::three_band_masses(s.mesh, nodal, 0.2, mesh::Frame::physical)[1];
    const bool ok = monotone && last < 1e-3 && std::abs(straight - oracle) <= 0.01;
    return {ok, "middle band at h = 0.05: " + fmt("%.2e", last) + (monotone ? " (monotone)" : " (not monotone)") +
                    "; straight (1,1) mode " + fmt("%.4f", straight) + " vs oracle " + fmt("%.4f", oracle)};
}

Outcome c8_decay() {
    const auto& r = dent_sweep();
    if (!r.reference || r.reference->trapped_count == 0) return {false, "no trapped reference mode"};
    const auto& ref = *r.reference;
    const auto d = asymptotics::mode_decay_rate(ref.mesh, ref.nodal[0], dent(), ref.L2);
    const double expected = -std::sqrt(pi2 - ref.Lambda[0]);
    const double rel = std::abs(d.slope - expected) / std::abs(expected);
    return {rel < 0.05, "slope " + fmt("%.4f", d.slope) + " vs " + fmt("%.4f", expected) + " (" + fmt("%.2f", 100 * rel) +
                            "%)"};
}

Outcome c9_splitting() {
    asymptotics::SplittingSpec s;
    s.H_plus = dent();
    s.H_minus = dent();
    s.hs = {0.2, 0.15, 0.1, 0.075};
    const auto r = asymptotics::splitting_analysis(s);
    if (!r.fit) return {false, "no fit"};
    double worst = 0.0;
    int checked = 0;
    for (const auto& p : r.points)
        if (p.full_rel_diff1 && p.full_rel_diff2) {
            worst = std::max({worst, *p.full_rel_diff1, *p.full_rel_diff2});
            ++checked;
        }
    const bool ok = r.fit->slope >= -1.15 && r.fit->slope <= -0.85 && checked == int(s.hs.size()) && worst <= 1e-8;
    return {ok, "slope " + fmt("%.4f", r.fit->slope) + ", |F| estimate " + fmt("%.3g", r.F_estimate) +
                    ", half/full max rel diff " + fmt("%.2e", worst)};
}

Outcome c10_trapezoid() {
    const auto H = ProfileSpec::polynomial({1.0, 0.0, -0.5}, -1.0, 1.0);
    const auto r = asymptotics::trapezoid_series(H, {0.02}, {0, 1}, {}, {});
    const auto& p = r.points.at(0);
    bool ok = true;
    std::string detail;
    for (int j = 0; j < 2; ++j) {
        const double target = 2 * j + 1;
        const double rel = std::abs(p.correction[j] - target) / target;
        ok = ok && rel <= 0.05 && p.mass_fraction[j] > 0.99;
        detail += (j ? "; " : "") + std::string("j=") + std::to_string(j) + " correction " + fmt("%.4f", p.correction[j]) +
                  " vs " + fmt("%.0f", target) + " (pi(2j+1) = " + fmt("%.4f", pi * target) + "), mass " +
                  fmt("%.4f", p.mass_fraction[j]);
    }
    return {ok, detail};
}

Outcome c11_dumbbell() {
    asymptotics::DumbbellSpec s;
    s.hs = sweep_hs;
    const auto r = asymptotics::dumbbell_study(s);
    if (!r.sweep.fit_congruent) return {false, "no fit"};
    bool decreasing = true;
    for (std::size_t i = 1; i < r.sweep.records.size(); ++i)
        if (!(r.sweep.records[i].deviation_congruent[0] < r.sweep.records[i - 1].deviation_congruent[0])) decreasing = false;
    const auto& f = *r.sweep.fit_congruent;
    const bool ok = r.head_ground_state < pi2 && r.Lambda1 < pi2 && decreasing && f.tau > 0 && f.r2 > 0.9;
    return {ok, "head ground state " + fmt("%.4f", r.head_ground_state) + ", Lambda1 " + fmt("%.6f", r.Lambda1) +
                    ", tau " + fmt("%.3f", f.tau) + ", R^2 " + fmt("%.6f", f.r2)};
}

Outcome c12_neumann_half() {
    const auto half = problems::cross_section_eigens(problems::CrossSectionSpec::half_interval(), 1);
    asymptotics::NeumannHalfSpec s;
    s.H = ProfileSpec::fourier(0.0, {1.0});
    s.hs = {0.2, 0.1, 0.05};
    const auto r = asymptotics::neumann_half_localization(s);
    std::string ns;
    for (const auto& p : r.points) ns += (ns.empty() ? "" : ", ") + std::to_string(p.N);
    const bool ok = std::abs(half.mu[0] - pi2) < 1e-12 && r.prediction && r.N_increasing && r.deviation_decreasing &&
                    r.points.size() == 3;
    return {ok, "mu1 half " + fmt("%.12f", half.mu[0]) + ", Lambda^ " + fmt("%.6f", r.Lambda_half) + ", N = " + ns +
                    ", deviation at h = 0.05 " + fmt("%.2e", r.points.empty() ? NAN : r.points.back().deviation)};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"analytic rectangle spectrum", c1_rectangle},
        {"Lanczos matches dense oracle", c2_oracle},
        {"trapped mode below the cutoff", c3_existence},
        {"no trapped mode for a flat end", c4_no_false},
        {"condition identity", c5_identity},
        {"eigenvalue asymptotics", c6_asymptotics},
        {"localization", c7_localization},
        {"boundary-layer decay rate", c8_decay},
        {"eigenvalue splitting", c9_splitting},
        {"trapezoid oscillator series", c10_trapezoid},
        {"dumbbell localization", c11_dumbbell},
        {"Neumann half-domain", c12_neumann_half},
    };
    int unexpected = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = int(i) + 1;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const auto xf = expected_failures.find(id);
        std::string tag;
        if (xf != expected_failures.end()) {
            tag = o.passed ? " [expected to fail, passed]" : " [expected failure: " + xf->second + "]";
            if (o.passed) ++unexpected;
        } else if (!o.passed) {
            ++unexpected;
        }
        std::printf("%s %2d %s: %s (%.1f s)%s\n", o.passed ? "PASS" : "FAIL", id, criteria[i].first.c_str(),
                    o.detail.c_str(), s, tag.c_str());
        std::fflush(stdout);
    }
    std::printf("%d criteria, %d unexpected result(s)\n", int(criteria.size()), unexpected);
    return unexpected == 0 ? 0 : 1;
}
