#include "trapmodes_app/runner.hpp"

#include <trapmodes/error.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>
#include <type_traits>

#ifndef TRAPMODES_VERSION
#define TRAPMODES_VERSION "unknown"
#endif

namespace trapmodes::app {

namespace {

using asymptotics::SweepRecord;
using mesh::DomainSpec;

constexpr double pi = std::numbers::pi;

std::string num(double v) { return format_double(v); }
std::string num(int v) { return std::to_string(v); }
std::string flag(bool b) { return b ? "true" : "false"; }

Json number_array(const std::vector<double>& v) {
    Json a = Json::array();
    for (double x : v) a.push_back(json_number(x));
    return a;
}

Json fit_json(const asymptotics::ExponentialFit& f) {
    Json j;
    j["c"] = json_number(f.c);
    j["tau"] = json_number(f.tau);
    j["tau_stderr"] = json_number(f.tau_stderr);
    j["r2"] = json_number(f.r2);
    j["points_used"] = f.points_used;
    j["r2_threshold"] = asymptotics::exponential_r2_threshold;
    j["exponential"] = f.tau > 0.0 && f.r2 >= asymptotics::exponential_r2_threshold;
    j["notes"] = f.notes;
    return j;
}

Json fit_json(const asymptotics::LinearFit& f) {
    return {{"slope", json_number(f.slope)},
            {"slope_stderr", json_number(f.slope_stderr)},
            {"intercept", json_number(f.intercept)},
            {"r2", json_number(f.r2)},
            {"points", f.points}};
}

Json solver_json(const problems::SolveOptions& s) {
    Json j;
    j["k"] = s.k;
    j["tol"] = s.tol;
    j["shift"] = s.shift ? json_number(*s.shift) : Json(nullptr);
    j["seed"] = s.seed;
    j["max_restarts"] = s.max_restarts;
    j["truncation"] = mesh::to_string(s.truncation);
    return j;
}

Json policy_json(const asymptotics::ResolutionPolicy& p, const asymptotics::PrecisionOptions& w) {
    return {{"n_across", p.n_across},
            {"density", p.density},
            {"richardson", p.richardson},
            {"extended_precision", w.enabled},
            {"extended_tol", w.tol},
            {"shift_gap", w.shift_gap}};
}

Json condition_json(const conditions::ConditionReport& r) {
    Json j;
    j["id"] = conditions::to_string(r.id);
    j["value"] = json_number(r.value);
    j["verdict"] = conditions::to_string(r.verdict);
    j["inconclusive"] = r.inconclusive;
    j["quadrature"] = r.quadrature;
    j["evaluations"] = r.evaluations;
    j["error_estimate"] = json_number(r.error_estimate);
    j["inputs_digest"] = r.inputs_digest;
    j["notes"] = r.notes;
    return j;
}

Json reference_json(const asymptotics::ReferenceSpectrum& ref) {
    Json j;
    j["L1"] = ref.L1;
    j["L2"] = ref.L2;
    j["cutoff"] = ref.cutoff;
    j["trapped_count"] = ref.trapped_count;
    j["Lambda"] = number_array(ref.Lambda);
    j["Lambda_coarse"] = number_array(ref.Lambda_coarse);
    j["mesh_error"] = number_array(ref.mesh_error);
    Json wide = Json::array();
    for (const auto& w : ref.Lambda_wide) wide.push_back(to_decimal(w, 40));
    j["Lambda_extended"] = wide;
    j["kappa"] = number_array(ref.kappa);
    return j;
}

class Stepper {
public:
    Stepper(const RunOptions& o, std::vector<StepStatus>* steps) : opt_(o), steps_(steps) {}

    template <class F>
    auto run(const std::string& name, F&& f) {
        const auto t0 = std::chrono::steady_clock::now();
        if (opt_.verbose && opt_.log) *opt_.log << "[step] " << name << " ..." << std::endl;
        try {
            if constexpr (std::is_void_v<decltype(f())>) {
                f();
                record(name, "ok", t0, "");
            } else {
                auto out = f();
                record(name, "ok", t0, "");
                return out;
            }
        } catch (const std::exception& e) {
            record(name, "failed", t0, e.what());
            throw;
        }
    }

    void record(const std::string& name, const std::string& status, std::chrono::steady_clock::time_point t0,
                const std::string& message) {
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        record_seconds(name, status, s, message);
    }

    void record_seconds(const std::string& name, const std::string& status, double s, const std::string& message) {
        if (steps_) steps_->push_back({name, status, s, message});
        if (opt_.verbose && opt_.log)
            *opt_.log << "[step] " << name << ": " << status << " (" << s << " s)"
                      << (message.empty() ? "" : " " + message) << std::endl;
    }

private:
    const RunOptions& opt_;
    std::vector<StepStatus>* steps_;
};

DomainSpec stretched(DomainSpec d) {
    d.frame = mesh::Frame::stretched;
    return d;
}

// ---- experiments ----------------------------------------------------------

Artifacts cross_section(const ExperimentConfig& c, Stepper& step) {
    const auto eig = step.run("cross-section eigenpairs", [&] {
        return problems::cross_section_eigens(c.cross_section, c.solve.k, c.cross_section_refinements);
    });
    Artifacts a;
    a.summary["cross_section"] = problems::to_string(c.cross_section.kind);
    a.summary["k"] = c.solve.k;
    a.summary["mu"] = number_array(eig.mu);
    Table t{{"p", "mu", "mu_over_pi2", "analytic", "residual"}, {}};
    std::vector<double> analytic;
    for (int p = 1; p <= int(eig.mu.size()); ++p) {
        double exact = std::nan("");
        if (c.cross_section.kind == problems::CrossSectionSpec::Kind::interval) exact = p * p * pi * pi;
        if (c.cross_section.kind == problems::CrossSectionSpec::Kind::half_interval)
            exact = (2 * p - 1) * (2 * p - 1) * pi * pi;
        analytic.push_back(exact);
        const double res = p - 1 < int(eig.residuals.size()) ? eig.residuals[p - 1] : 0.0;
        t.rows.push_back({num(p), num(eig.mu[p - 1]), num(eig.mu[p - 1] / (pi * pi)), num(exact), num(res)});
    }
    if (!eig.analytic()) {
        a.summary["mesh_nodes"] = eig.mesh.nodes.size();
        a.summary["residuals"] = number_array(eig.residuals);
    }
    a.tables.push_back({"cross_section.csv", t});
    return a;
}

Artifacts condition(const ExperimentConfig& c, const RunOptions& o, Stepper& step) {
    Artifacts a;
    const auto eig = step.run("cross-section eigenpairs", [&] {
        return problems::cross_section_eigens(c.cross_section, 1, c.cross_section_refinements);
    });
    a.summary["cross_section"] = problems::to_string(c.cross_section.kind);
    a.summary["mu1"] = eig.mu[0];
    a.summary["profile"] = mesh::describe(c.H_plus);
    Json reports = Json::array();
    Table t{{"condition", "value", "verdict", "inconclusive", "quadrature", "error_estimate"}, {}};
    auto add = [&](const conditions::ConditionReport& r) {
        reports.push_back(condition_json(r));
        t.rows.push_back({conditions::to_string(r.id), num(r.value), conditions::to_string(r.verdict),
                          flag(r.inconclusive), r.quadrature, num(r.error_estimate)});
    };
    Json skipped = Json::array();
    auto attempt = [&](const char* name, auto&& f) {
        try {
            add(step.run(std::string("condition ") + name, f));
        } catch (const PreconditionError& e) {
            skipped.push_back({{"condition", name}, {"reason", e.what()}});
        }
    };
    if (eig.analytic()) {
        attempt("gradient_form", [&] { return conditions::condition_gradient_form(eig, c.H_plus); });
        attempt("laplacian_form", [&] { return conditions::condition_laplacian_form(eig, c.H_plus); });
        if (c.cross_section.kind == problems::CrossSectionSpec::Kind::interval)
            attempt("fourier_2d", [&] { return conditions::condition_fourier_2d(c.H_plus); });
        attempt("epsilon_order", [&] { return conditions::condition_epsilon_order(eig, c.H_plus); });
        attempt("symmetric_half", [&] {
            const auto half = problems::cross_section_eigens(problems::CrossSectionSpec::half_interval(), 1);
            return conditions::condition_symmetric_half(half, c.H_plus);
        });
        const auto scan = step.run("rayleigh scan", [&] { return conditions::rayleigh_scan(eig, c.H_plus, c.epsilon_grid); });
        Json s;
        s["cutoff"] = scan.cutoff;
        s["best_epsilon"] = scan.best_epsilon;
        s["best_quotient"] = scan.best_quotient;
        s["verdict"] = conditions::to_string(scan.verdict);
        s["slope_at_zero"] = scan.slope_at_zero;
        s["second_order"] = scan.second_order;
        a.summary["rayleigh_scan"] = s;
        Table st{{"epsilon", "quotient", "below_cutoff"}, {}};
        for (std::size_t i = 0; i < scan.epsilon.size(); ++i)
            st.rows.push_back({num(scan.epsilon[i]), num(scan.quotient[i]), flag(scan.quotient[i] < scan.cutoff)});
        a.tables.push_back({"rayleigh_scan.csv", st});
        Plot p{"Trial quotient against epsilon", "epsilon", "Q(epsilon) - mu1", {}};
        Series q{"Q - mu1", scan.epsilon, {}};
        for (double v : scan.quotient) q.y.push_back(v - scan.cutoff);
        p.series.push_back(q);
        a.plots.push_back({"rayleigh_scan.svg", p});
        if (o.explain) {
            for (auto id : {conditions::ConditionId::gradient_form, conditions::ConditionId::epsilon_order}) {
                const auto s2 = conditions::explain_integrand(id, eig, c.H_plus);
                Table et{{"eta", "integrand"}, {}};
                for (std::size_t i = 0; i < s2.eta.size(); ++i) et.rows.push_back({num(s2.eta[i]), num(s2.value[i])});
                a.tables.push_back({std::string("integrand_") + conditions::to_string(id) + ".csv", et});
            }
        }
    } else {
        // Polygon cross-sections take H as a function of the first coordinate.
        const auto H = c.H_plus;
        attempt("gradient_form", [&] {
            return conditions::condition_gradient_form(eig, [H](double y1, double) { return mesh::profile_eval(H, y1); });
        });
    }
    a.summary["conditions"] = reports;
    a.summary["skipped"] = skipped;
    a.tables.insert(a.tables.begin(), {"conditions.csv", t});
    return a;
}

Artifacts semicylinder(const ExperimentConfig& c, Stepper& step) {
    Artifacts a;
    const auto H = c.H_plus;
    auto semi = [&c, H](double L) {
        return c.semi_bc == problems::SemiBc::half_mixed ? DomainSpec::half_semicylinder(H, L)
                                                         : DomainSpec::semicylinder(H, L);
    };
    problems::SolveOptions opt = c.solve;
    Table t{{"L", "p", "Lambda", "Lambda_coarse", "mesh_error", "cutoff", "trapped", "residual"}, {}};
    Json per_L = Json::array();
    std::vector<double> first;
    for (double L : c.Ls) {
        const auto coarse = step.run("semi-cylinder L=" + num(L), [&] {
            return problems::solve_semicylinder<double>(semi(L), c.semi_bc, asymptotics::grid_for(c.policy, L, 0), opt);
        });
        std::vector<double> lam = coarse.spectrum.physical_eigenvalues(), lc = lam, err(lam.size(), std::nan(""));
        if (c.policy.richardson) {
            const auto fine = step.run("semi-cylinder L=" + num(L) + " fine", [&] {
                return problems::solve_semicylinder<double>(semi(L), c.semi_bc, asymptotics::grid_for(c.policy, L, 1),
                                                            opt);
            });
            const auto lf = fine.spectrum.physical_eigenvalues();
            for (std::size_t p = 0; p < lam.size(); ++p) {
                lam[p] = (4.0 * lf[p] - lc[p]) / 3.0;
                err[p] = std::abs(lf[p] - lc[p]) / 3.0;
            }
        }
        Json e;
        e["L"] = L;
        e["cutoff"] = coarse.cutoff;
        e["Lambda"] = number_array(lam);
        e["mesh_error"] = number_array(err);
        Json trapped = Json::array();
        for (std::size_t p = 0; p < lam.size(); ++p) {
            const bool tr = lam[p] < coarse.cutoff - coarse.margin;
            trapped.push_back(tr);
            t.rows.push_back({num(L), num(int(p) + 1), num(lam[p]), num(lc[p]), num(err[p]), num(coarse.cutoff),
                              flag(tr), num(coarse.spectrum.solution.residuals[p])});
        }
        e["trapped"] = trapped;
        if (!coarse.caveat.empty()) e["caveat"] = coarse.caveat;
        per_L.push_back(e);
        if (first.empty()) first = lam;
    }
    a.summary["profile"] = mesh::describe(H);
    a.summary["boundary"] = problems::to_string(c.semi_bc);
    a.summary["per_L"] = per_L;
    a.tables.push_back({"semicylinder.csv", t});

    if (c.Ls.size() >= 2) {
        const double L1 = c.Ls[c.Ls.size() - 2], L2 = c.Ls.back();
        const auto ref = step.run("truncation extrapolation", [&] {
            return asymptotics::reference_spectrum(semi, c.semi_bc, c.solve.k, c.policy, L1, L2, c.solve, c.precision);
        });
        a.summary["extrapolated"] = reference_json(ref);
        if (ref.trapped_count > 0) {
            try {
                const auto d = asymptotics::mode_decay_rate(ref.mesh, ref.nodal[0], H, L2);
                a.summary["decay"] = {{"slope", d.slope},
                                      {"expected", -ref.kappa[0]},
                                      {"relative_difference", std::abs(d.slope + ref.kappa[0]) / ref.kappa[0]},
                                      {"r2", d.r2},
                                      {"stations", d.stations},
                                      {"window", {d.window_lo, d.window_hi}}};
            } catch (const PreconditionError& e) {
                a.summary["decay"] = {{"skipped", e.what()}};
            }
        }
    }
    return a;
}

Json sweep_summary(const asymptotics::SweepResult& r) {
    Json j;
    if (r.reference) j["reference"] = reference_json(*r.reference);
    j["fit_richardson"] = r.fit ? fit_json(*r.fit) : Json(nullptr);
    j["fit_same_grid"] = r.fit_congruent ? fit_json(*r.fit_congruent) : Json(nullptr);
    Json recs = Json::array();
    for (const auto& x : r.records) {
        Json e;
        e["h"] = x.h;
        e["resolution"] = {x.resolution.n_across, x.resolution.n_along};
        e["h2_lambda"] = number_array(x.normalized);
        e["deviation"] = number_array(x.deviation);
        e["deviation_same_grid"] = number_array(x.deviation_congruent);
        e["deviation_same_grid_decimal"] = x.deviation_decimal;
        e["mesh_error"] = number_array(x.mesh_error);
        Json loc = Json::array();
        for (const auto& l : x.localization)
            loc.push_back({{"band_mass", {l.band_mass[0], l.band_mass[1], l.band_mass[2]}},
                           {"sup_ratio", l.sup_ratio},
                           {"mismatch", l.mismatch ? Json(*l.mismatch) : Json(nullptr)}});
        e["localization"] = loc;
        e["mesh_error_dominates"] = x.mesh_error_dominates;
        e["notes"] = x.notes;
        recs.push_back(e);
    }
    j["records"] = recs;
    j["notes"] = r.notes;
    if (r.failure) j["failure"] = *r.failure;
    return j;
}

Artifacts from_sweep(const asymptotics::SweepResult& r, const std::string& title) {
    Artifacts a;
    a.summary["sweep"] = sweep_summary(r);
    if (!r.records.empty()) {
        a.tables.push_back({"records.csv", sweep_table(r.records)});
        a.plots.push_back({"deviation.svg", sweep_plot(r.records, title)});
    }
    if (r.failure) {
        a.exit_code = exit_solve;
        a.failure = *r.failure;
    } else if (!r.fit_congruent && !r.fit) {
        a.exit_code = exit_fit;
        a.failure = "no exponential fit could be formed";
    }
    return a;
}

asymptotics::SweepSpec base_sweep(const ExperimentConfig& c, Stepper& step) {
    asymptotics::SweepSpec s;
    s.hs = c.hs;
    s.k = c.solve.k;
    s.policy = c.policy;
    s.solve = c.solve;
    s.precision = c.precision;
    s.truncation = c.truncation;
    s.on_record = [&step](const SweepRecord& r) { step.record_seconds("sweep h=" + num(r.h), "ok", r.wall_seconds, ""); };
    return s;
}

Artifacts thin_sweep(const ExperimentConfig& c, Stepper& step) {
    auto s = base_sweep(c, step);
    const auto Hp = c.H_plus, Hm = c.H_minus;
    s.thin = [Hp, Hm](double h) { return stretched(DomainSpec::distorted_cylinder(h, Hp, Hm)); };
    s.thin_bc = c.thin_bc;
    if (Hp.is_identically_zero()) {
        s.reference_constant = pi * pi;  // straight end: h²λ₁ tends to the cutoff
    } else {
        s.semi = [Hp](double L) { return DomainSpec::semicylinder(Hp, L); };
        s.semi_bc = c.semi_bc;
    }
    const auto r = step.run("thin-domain sweep", [&] { return asymptotics::sweep_h(s); });
    auto a = from_sweep(r, "Thin-domain deviation from the semi-cylinder limit");
    a.summary["profile_plus"] = mesh::describe(Hp);
    a.summary["profile_minus"] = mesh::describe(Hm);
    a.summary["boundary"] = problems::to_string(c.thin_bc);
    return a;
}

Artifacts trapezoid(const ExperimentConfig& c, Stepper& step) {
    const auto r = step.run("trapezoid series", [&] {
        return asymptotics::trapezoid_series(c.H_plus, c.hs, c.js, c.trapezoid, c.solve);
    });
    Artifacts a;
    a.summary["profile"] = mesh::describe(c.H_plus);
    a.summary["limit"] = {{"H0", r.limit.H0},
                          {"b", r.limit.b},
                          {"B", r.limit.B},
                          {"B_without_pi", r.limit.B_without_pi},
                          {"leading", r.limit.leading}};
    Table t{{"h", "j", "n_across", "n_along", "lambda", "correction", "predicted", "rel_error", "predicted_without_pi",
             "rel_error_without_pi", "mass_fraction"},
            {}};
    Json pts = Json::array();
    Plot p{"Trapezoid first-order corrections", "1/h", "(h^2 lambda - pi^2/H0^2)/h", {}};
    std::vector<Series> series(r.js.size());
    for (std::size_t k = 0; k < r.js.size(); ++k) series[k].label = "j = " + std::to_string(r.js[k]);
    for (const auto& x : r.points) {
        for (std::size_t k = 0; k < r.js.size(); ++k) {
            t.rows.push_back({num(x.h), num(r.js[k]), num(x.resolution.n_across), num(x.resolution.n_along),
                              num(x.lambda[k]), num(x.correction[k]), num(x.predicted[k]), num(x.rel_error[k]),
                              num(x.predicted_without_pi[k]), num(x.rel_error_without_pi[k]),
                              num(x.mass_fraction[k])});
            series[k].x.push_back(1.0 / x.h);
            series[k].y.push_back(x.correction[k]);
        }
        pts.push_back({{"h", x.h},
                       {"lambda", number_array(x.lambda)},
                       {"correction", number_array(x.correction)},
                       {"predicted", number_array(x.predicted)},
                       {"rel_error", number_array(x.rel_error)},
                       {"predicted_without_pi", number_array(x.predicted_without_pi)},
                       {"rel_error_without_pi", number_array(x.rel_error_without_pi)},
                       {"mass_fraction", number_array(x.mass_fraction)}});
    }
    p.series = series;
    a.summary["points"] = pts;
    a.summary["notes"] = r.notes;
    a.tables.push_back({"trapezoid.csv", t});
    a.plots.push_back({"trapezoid.svg", p});
    return a;
}

Artifacts splitting(const ExperimentConfig& c, Stepper& step) {
    asymptotics::SplittingSpec s;
    s.H_plus = c.H_plus;
    s.H_minus = c.H_minus;
    s.hs = c.hs;
    s.policy = c.policy;
    s.solve = c.solve;
    s.precision = c.precision;
    if (c.truncation) s.reference_L = c.truncation->second;
    const auto r = step.run("splitting analysis", [&] { return asymptotics::splitting_analysis(s); });
    Artifacts a;
    a.summary["profile"] = mesh::describe(c.H_plus);
    a.summary["Lambda1"] = r.Lambda1;
    a.summary["kappa"] = r.kappa;
    a.summary["fit"] = r.fit ? fit_json(*r.fit) : Json(nullptr);
    a.summary["F_estimate"] = r.F_estimate;
    a.summary["notes"] = r.notes;
    Table t{{"h", "lambda_1", "lambda_2", "gap", "gap_decimal", "x", "y", "used", "residual", "full_rel_diff_1",
             "full_rel_diff_2", "note"},
            {}};
    Json pts = Json::array();
    Series ser{"log(h^2 gap / 2)", {}, {}};
    for (const auto& p : r.points) {
        auto opt = [](const std::optional<double>& v) { return v ? num(*v) : std::string(); };
        t.rows.push_back({num(p.h), num(p.lambda_even), num(p.lambda_odd), num(p.gap), p.gap_decimal, num(p.x),
                          num(p.y), flag(p.used), num(p.residual), opt(p.full_rel_diff1), opt(p.full_rel_diff2),
                          p.note});
        pts.push_back({{"h", p.h},
                       {"lambda_1", p.lambda_even},
                       {"lambda_2", p.lambda_odd},
                       {"gap_decimal", p.gap_decimal},
                       {"x", p.x},
                       {"y", p.y},
                       {"used", p.used},
                       {"full_rel_diff_1", p.full_rel_diff1 ? Json(*p.full_rel_diff1) : Json(nullptr)},
                       {"full_rel_diff_2", p.full_rel_diff2 ? Json(*p.full_rel_diff2) : Json(nullptr)}});
        if (p.used) {
            ser.x.push_back(p.x);
            ser.y.push_back(p.y);
        }
    }
    a.summary["points"] = pts;
    a.tables.push_back({"splitting.csv", t});
    a.plots.push_back({"splitting.svg", Plot{"Eigenvalue splitting", "2 kappa / h", "log(h^2 (lambda2 - lambda1) / 2)", {ser}}});
    return a;
}

Artifacts dumbbell(const ExperimentConfig& c, Stepper& step) {
    asymptotics::DumbbellSpec s;
    s.head = c.head_plus;
    s.head_minus = c.head_minus;
    s.hs = c.hs;
    s.policy = c.policy;
    s.solve = c.solve;
    s.precision = c.precision;
    s.truncation = c.truncation;
    const auto r = step.run("dumbbell study", [&] { return asymptotics::dumbbell_study(s); });
    auto a = from_sweep(r.sweep, "Dumbbell deviation from the cane-head limit");
    a.summary["head_plus"] = {c.head_plus.width, c.head_plus.height};
    a.summary["head_minus"] = {c.head_minus.width, c.head_minus.height};
    a.summary["head_ground_state"] = r.head_ground_state;
    a.summary["head_below_cutoff"] = r.head_below_cutoff;
    a.summary["Lambda1"] = r.Lambda1;
    a.summary["cane_trapped"] = r.cane_trapped;
    a.summary["notes"] = r.notes;
    return a;
}

Artifacts neumann_half(const ExperimentConfig& c, Stepper& step) {
    asymptotics::NeumannHalfSpec s;
    s.H = c.H_plus;
    s.H_minus = c.H_minus;
    s.hs = c.hs;
    s.policy = c.policy;
    s.solve = c.solve;
    s.precision = c.precision;
    s.truncation = c.truncation;
    const auto r = step.run("neumann half-domain study", [&] { return asymptotics::neumann_half_localization(s); });
    Artifacts a;
    a.summary["profile"] = mesh::describe(c.H_plus);
    a.summary["condition"] = condition_json(r.condition);
    a.summary["prediction"] = r.prediction;
    a.summary["notes"] = r.notes;
    if (!r.prediction) return a;
    a.summary["Lambda_half"] = r.Lambda_half;
    a.summary["cutoff"] = r.cutoff;
    a.summary["N_increasing"] = r.N_increasing;
    a.summary["deviation_decreasing"] = r.deviation_decreasing;
    a.summary["fit"] = r.fit ? fit_json(*r.fit) : Json(nullptr);
    Table t{{"h", "lambda", "N", "deviation", "deviation_decimal", "deviation_double", "in_full_spectrum"}, {}};
    Json pts = Json::array();
    Series ser{"same-grid deviation", {}, {}};
    for (const auto& p : r.points) {
        t.rows.push_back({num(p.h), num(p.lambda), num(p.N), num(p.deviation), p.deviation_decimal,
                          num(p.deviation_double), flag(p.subset_ok)});
        pts.push_back({{"h", p.h},
                       {"lambda", p.lambda},
                       {"N", p.N},
                       {"deviation", json_number(p.deviation)},
                       {"deviation_decimal", p.deviation_decimal},
                       {"deviation_double", json_number(p.deviation_double)},
                       {"in_full_spectrum", p.subset_ok}});
        if (p.deviation > 0) {
            ser.x.push_back(1.0 / p.h);
            ser.y.push_back(std::log10(p.deviation));
        }
    }
    a.summary["points"] = pts;
    a.tables.push_back({"neumann_half.csv", t});
    a.plots.push_back({"deviation.svg", Plot{"Neumann half-domain deviation", "1/h", "log10 deviation", {ser}}});
    return a;
}

Artifacts validate(Stepper& step) {
    const auto checks = step.run("oracle suite", [] { return run_validation(); });
    Artifacts a;
    Json list = Json::array();
    Table t{{"check", "passed", "detail"}, {}};
    bool all = true;
    for (const auto& ch : checks) {
        list.push_back({{"check", ch.name}, {"passed", ch.passed}, {"detail", ch.detail}});
        t.rows.push_back({ch.name, flag(ch.passed), ch.detail});
        all = all && ch.passed;
    }
    a.summary["checks"] = list;
    a.summary["all_passed"] = all;
    a.tables.push_back({"validation.csv", t});
    if (!all) {
        a.exit_code = exit_validation;
        a.failure = "one or more oracle checks failed";
    }
    return a;
}

Artifacts export_mesh(const ExperimentConfig& c, Stepper& step, std::vector<std::pair<std::string, std::string>>& raw) {
    DomainSpec d = *c.domain;
    if (d.bc.empty()) {
        if (d.is_semicylinder()) d.bc = problems::semi_conditions(d, c.semi_bc, c.solve);
        else if (d.variant == mesh::Variant::trapezoid_2d) {
            for (auto tag : {mesh::BoundaryTag::lateral, mesh::BoundaryTag::end_plus, mesh::BoundaryTag::end_minus})
                d.bc[tag] = mesh::BcType::dirichlet;
        } else d.bc = problems::thin_conditions(d, c.thin_bc, c.solve);
    }
    const auto m = step.run("mesh", [&] { return mesh::build_mesh(d, c.resolution); });
    const auto sys = step.run("assemble", [&] { return fem::assemble_system<double>(m, d.bc); });
    std::ostringstream ms, ks, mm;
    mesh::write_mesh(ms, m);
    fem::write_matrix_market(ks, sys.K);
    fem::write_matrix_market(mm, sys.M);
    raw.push_back({"mesh.txt", ms.str()});
    raw.push_back({"K.mtx", ks.str()});
    raw.push_back({"M.mtx", mm.str()});
    const auto stats = mesh::mesh_stats(m);
    Artifacts a;
    a.summary["domain"] = mesh::domain_to_config(d);
    a.summary["nodes"] = m.nodes.size();
    a.summary["triangles"] = m.triangles.size();
    a.summary["free_dofs"] = sys.n_free;
    a.summary["min_angle_deg"] = stats.min_angle_deg;
    a.summary["max_aspect_ratio"] = stats.max_aspect_ratio;
    return a;
}

}  // namespace

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const GeometryError*>(&e) ||
        dynamic_cast<const PreconditionError*>(&e) || dynamic_cast<const DomainError*>(&e))
        return exit_config;
    if (dynamic_cast<const FitError*>(&e)) return exit_fit;
    if (dynamic_cast<const IoError*>(&e)) return exit_io;
    return exit_solve;
}

Table sweep_table(const std::vector<SweepRecord>& records) {
    if (records.empty()) throw PreconditionError("sweep_table: no records");
    Table t{{"h", "p", "n_across", "n_along", "lambda", "h2_lambda", "mesh_error", "reference", "deviation",
             "deviation_same_grid", "deviation_same_grid_decimal", "band_mass_lower", "band_mass_middle",
             "band_mass_upper", "sup_ratio", "mismatch", "residual", "mesh_error_dominates"},
            {}};
    for (const auto& r : records)
        for (std::size_t p = 0; p < r.lambda.size(); ++p) {
            const auto& loc = r.localization[p];
            t.rows.push_back({num(r.h), num(int(p) + 1), num(r.resolution.n_across), num(r.resolution.n_along),
                              num(r.lambda[p]), num(r.normalized[p]), num(r.mesh_error[p]), num(r.reference[p]),
                              num(r.deviation[p]), num(r.deviation_congruent[p]), r.deviation_decimal[p],
                              num(loc.band_mass[0]), num(loc.band_mass[1]), num(loc.band_mass[2]), num(loc.sup_ratio),
                              loc.mismatch ? num(*loc.mismatch) : std::string(),
                              p < r.residuals.size() ? num(r.residuals[p]) : std::string(),
                              flag(r.mesh_error_dominates)});
        }
    return t;
}

Plot sweep_plot(const std::vector<SweepRecord>& records, const std::string& title) {
    Plot p{title, "1/h", "log10 deviation", {}};
    Series same{"same grid, extended precision", {}, {}}, rich{"Richardson", {}, {}};
    for (const auto& r : records) {
        if (r.deviation_congruent[0] > 0) {
            same.x.push_back(1.0 / r.h);
            same.y.push_back(std::log10(r.deviation_congruent[0]));
        }
        if (r.deviation[0] > 0) {
            rich.x.push_back(1.0 / r.h);
            rich.y.push_back(std::log10(r.deviation[0]));
        }
    }
    if (!same.x.empty()) p.series.push_back(same);
    p.series.push_back(rich);
    return p;
}

void emit_report(OutputWriter& writer, const Artifacts& a, const Formats& f) {
    if (f.json) writer.write("result.json", a.summary.dump(2) + "\n");
    if (f.csv)
        for (const auto& [name, table] : a.tables) {
            if (table.rows.empty()) throw PreconditionError("emit_report: table '" + name + "' has no records");
            writer.write(name, to_csv(table));
        }
    if (f.svg)
        for (const auto& [name, plot] : a.plots) writer.write(name, to_svg(plot));
}

Artifacts run_experiment(const ExperimentConfig& c, const RunOptions& o, std::vector<StepStatus>* steps) {
    Stepper step(o, steps);
    std::vector<std::pair<std::string, std::string>> raw;
    Artifacts a;
    switch (c.kind) {
        case ExperimentKind::cross_section: a = cross_section(c, step); break;
        case ExperimentKind::condition: a = condition(c, o, step); break;
        case ExperimentKind::semicylinder: a = semicylinder(c, step); break;
        case ExperimentKind::thin_sweep: a = thin_sweep(c, step); break;
        case ExperimentKind::trapezoid: a = trapezoid(c, step); break;
        case ExperimentKind::splitting: a = splitting(c, step); break;
        case ExperimentKind::dumbbell: a = dumbbell(c, step); break;
        case ExperimentKind::neumann_half: a = neumann_half(c, step); break;
        case ExperimentKind::validate: a = validate(step); break;
        case ExperimentKind::export_mesh: a = export_mesh(c, step, raw); break;
    }
    Json head;
    head["experiment"] = to_string(c.kind);
    head["name"] = c.name;
    head["schema"] = c.schema;
    head["code_version"] = TRAPMODES_VERSION;
    head["config_sha256"] = sha256_hex(c.text);
    head["solver"] = solver_json(c.solve);
    head["resolution_policy"] = policy_json(c.policy, c.precision);
    for (auto& [key, value] : a.summary.items()) head[key] = value;
    a.summary = head;
    if (!raw.empty()) {
        Json names = Json::array();
        for (const auto& entry : raw) names.push_back(entry.first);
        a.summary["exports"] = names;
        a.raw = std::move(raw);
    }
    return a;
}

RunOutcome run_config(const ExperimentConfig& c, const RunOptions& o) {
    RunOutcome out;
    out.manifest.experiment = to_string(c.kind);
    out.manifest.code_version = TRAPMODES_VERSION;
    out.manifest.config_digest = sha256_hex(c.text);
    out.manifest.started_utc = utc_now();
    const std::string dir = o.out_dir.empty() ? c.out_dir : o.out_dir;

    std::optional<OutputWriter> writer;
    try {
        writer.emplace(dir);
    } catch (const std::exception& e) {
        out.exit_code = exit_io;
        out.error = e.what();
        out.manifest.status = "failed";
        out.manifest.exit_code = out.exit_code;
        return out;
    }
    writer->write("config.ini", c.text);

    Formats formats;
    formats.svg = o.plots || c.plots;
    try {
        const Artifacts a = run_experiment(c, o, &out.manifest.steps);
        emit_report(*writer, a, formats);
        for (const auto& [name, bytes] : a.raw) writer->write(name, bytes);
        out.exit_code = a.exit_code;
        out.error = a.failure;
    } catch (const std::exception& e) {
        out.exit_code = exit_code_for(e);
        out.error = e.what();
    }
    out.manifest.status = out.exit_code == exit_ok ? "ok" : "failed";
    out.manifest.exit_code = out.exit_code;
    out.manifest.finished_utc = utc_now();
    try {
        writer->write_manifest(out.manifest);
        out.manifest.files = writer->files();
    } catch (const std::exception& e) {
        out.exit_code = exit_io;
        out.error = e.what();
    }
    return out;
}

}  // namespace trapmodes::app
