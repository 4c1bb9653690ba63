#include "trapmodes/asymptotics.hpp"

#include "trapmodes/error.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace trapmodes::asymptotics {

using mesh::DomainSpec;
using problems::SemiBc;
using problems::SolveOptions;
using problems::ThinBc;

namespace {

constexpr double pi = std::numbers::pi;
constexpr double nan = std::numeric_limits<double>::quiet_NaN();

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Eigenvalues in stretched units (h² λ for thin domains). Stretched-frame
// solves already produce them; rescaling would add rounding for h like 0.15.
template <class Real>
std::vector<Real> normalized_values(const problems::SpectrumResult<Real>& r, double h) {
    std::vector<Real> out(r.solution.eigenvalues.begin(), r.solution.eigenvalues.end());
    if (r.spec.frame == mesh::Frame::physical)
        for (auto& v : out) v *= Real(h) * Real(h);
    return out;
}

SolveOptions wide_options(const SolveOptions& base, const PrecisionOptions& p, int k, double lowest) {
    SolveOptions o = base;
    o.k = k;
    o.tol = p.tol;
    o.shift = lowest - p.shift_gap * std::max(1.0, std::abs(lowest));
    return o;
}

template <class Real>
std::vector<std::vector<double>> nodal_vectors(const problems::SpectrumResult<Real>& r, int count) {
    std::vector<std::vector<double>> out;
    for (int p = 0; p < count && p < int(r.solution.eigenvectors.size()); ++p) {
        auto v = fem::to_nodal(r.system, r.solution.eigenvectors[p]);
        align_sign(v);
        out.push_back(std::move(v));
    }
    return out;
}

std::string format_note(const std::string& prefix, double value) {
    std::ostringstream s;
    s << prefix << value;
    return s.str();
}

}  // namespace

mesh::Resolution grid_for(const ResolutionPolicy& policy, double length, int level) {
    const int scale = level == 0 ? 1 : 2;
    const double along = policy.density * scale * length;
    return {policy.n_across * scale, std::max(2, int(std::lround(along)))};
}

template <class Real>
Real extrapolate_truncation(const Real& at_L1, const Real& at_L2, double kappa, double L1, double L2) {
    if (!(kappa > 0.0) || !(L2 > L1)) return at_L2;
    const double r = std::exp(-2.0 * kappa * (L2 - L1));
    return at_L2 - (at_L1 - at_L2) * Real(r / (1.0 - r));
}

template double extrapolate_truncation<double>(const double&, const double&, double, double, double);
template Wide extrapolate_truncation<Wide>(const Wide&, const Wide&, double, double, double);

std::pair<double, double> default_truncation(const std::vector<double>& hs) {
    if (hs.empty()) throw PreconditionError("default_truncation: empty h list");
    const double h_min = *std::min_element(hs.begin(), hs.end());
    const double L2 = std::ceil(2.0 / h_min) + 8.0;
    return {L2 - 4.0, L2};
}

ReferenceSpectrum reference_spectrum(const std::function<DomainSpec(double)>& semi, SemiBc bc, int k,
                                     const ResolutionPolicy& policy, double L1, double L2, const SolveOptions& solve,
                                     const PrecisionOptions& precision) {
    if (!(L2 > L1) || !(L1 > 0.0)) throw PreconditionError("reference_spectrum: need 0 < L1 < L2");
    ReferenceSpectrum ref;
    ref.L1 = L1;
    ref.L2 = L2;
    SolveOptions opt = solve;
    opt.k = k;

    std::vector<std::vector<double>> coarse, fine;
    problems::SemicylinderResult<double> last;
    for (double L : {L1, L2}) {
        auto r = problems::solve_semicylinder<double>(semi(L), bc, grid_for(policy, L, 0), opt);
        ref.cutoff = r.cutoff;
        coarse.push_back(normalized_values(r.spectrum, 1.0));
        if (policy.richardson) {
            auto f = problems::solve_semicylinder<double>(semi(L), bc, grid_for(policy, L, 1), opt);
            fine.push_back(normalized_values(f.spectrum, 1.0));
        }
        last = std::move(r);
    }
    const double margin = solve.trapped_margin * ref.cutoff;
    for (int p = 0; p < k; ++p) {
        const double guess = coarse[1][p];
        const double kappa = guess < ref.cutoff ? std::sqrt(ref.cutoff - guess) : 0.0;
        const double c = extrapolate_truncation(coarse[0][p], coarse[1][p], kappa, L1, L2);
        double value = c;
        double err = 0.0;
        if (policy.richardson) {
            const double f = extrapolate_truncation(fine[0][p], fine[1][p], kappa, L1, L2);
            value = (4.0 * f - c) / 3.0;
            err = std::abs(f - c) / 3.0;
        }
        ref.Lambda_coarse.push_back(c);
        ref.Lambda.push_back(value);
        ref.mesh_error.push_back(err);
        const bool trapped = value < ref.cutoff - margin;
        ref.trapped.push_back(trapped);
        ref.kappa.push_back(trapped ? std::sqrt(ref.cutoff - value) : 0.0);
        if (trapped) ++ref.trapped_count;
    }
    ref.mesh = last.spectrum.mesh;
    ref.nodal = nodal_vectors(last.spectrum, k);

    if (precision.enabled && ref.trapped_count > 0) {
        std::vector<std::vector<Wide>> wide;
        for (int i = 0; i < 2; ++i) {
            const double L = i == 0 ? L1 : L2;
            const auto o = wide_options(solve, precision, ref.trapped_count, coarse[i][0]);
            auto r = problems::solve_semicylinder<Wide>(semi(L), bc, grid_for(policy, L, 0), o);
            wide.push_back(normalized_values(r.spectrum, 1.0));
            if (i == 1) ref.nodal = nodal_vectors(r.spectrum, ref.trapped_count);
        }
        for (int p = 0; p < ref.trapped_count; ++p)
            ref.Lambda_wide.push_back(extrapolate_truncation(wide[0][p], wide[1][p], ref.kappa[p], L1, L2));
    }
    return ref;
}

SweepResult sweep_h(const SweepSpec& spec) {
    if (spec.hs.size() < 3) throw PreconditionError("sweep_h: need at least three h values");
    for (double h : spec.hs)
        if (!(h > 0.0)) throw PreconditionError("sweep_h: h must be positive");
    if (!spec.thin) throw PreconditionError("sweep_h: no thin-domain family given");
    if (spec.k < 1) throw PreconditionError("sweep_h: k must be at least 1");

    SweepResult out;
    const auto [L1, L2] = spec.truncation ? *spec.truncation : default_truncation(spec.hs);
    try {
        if (spec.semi)
            out.reference = reference_spectrum(spec.semi, spec.semi_bc, spec.k, spec.policy, L1, L2, spec.solve,
                                               spec.precision);
    } catch (const Error& e) {
        out.failure = std::string("reference solve: ") + e.what();
        return out;
    }

    for (double h : spec.hs) {
        const auto t0 = std::chrono::steady_clock::now();
        SweepRecord rec;
        rec.h = h;
        try {
            const DomainSpec thin = spec.thin(h);
            if (thin.frame != mesh::Frame::stretched)
                rec.notes.push_back("thin domain in the physical frame; same-grid comparison disabled");
            const double length = 2.0 / h;
            rec.resolution = grid_for(spec.policy, length, 0);
            SolveOptions opt = spec.solve;
            opt.k = spec.k;
            const auto coarse = problems::solve_thin<double>(thin, spec.thin_bc, rec.resolution, opt);
            const auto c = normalized_values(coarse, h);
            std::vector<double> f;
            if (spec.policy.richardson) {
                rec.resolution_fine = grid_for(spec.policy, length, 1);
                f = normalized_values(problems::solve_thin<double>(thin, spec.thin_bc, rec.resolution_fine, opt), h);
            }
            rec.residuals = coarse.solution.residuals;

            for (int p = 0; p < spec.k; ++p) {
                const double value = spec.policy.richardson ? (4.0 * f[p] - c[p]) / 3.0 : c[p];
                rec.normalized.push_back(value);
                rec.lambda.push_back(value / (h * h));
                rec.mesh_error.push_back(spec.policy.richardson ? std::abs(f[p] - c[p]) / 3.0 : nan);
                double ref = nan;
                if (out.reference && p < int(out.reference->Lambda.size())) ref = out.reference->Lambda[p];
                else if (spec.reference_constant) ref = *spec.reference_constant;
                rec.reference.push_back(ref);
                rec.deviation.push_back(std::abs(value - ref));
                rec.deviation_congruent.push_back(nan);
                rec.deviation_decimal.push_back("");
            }

            // Fields used for localization: Wide vectors when available.
            auto fields = nodal_vectors(coarse, spec.k);
            const bool same_grid = thin.frame == mesh::Frame::stretched;
            if (spec.precision.enabled && out.reference && out.reference->trapped_count > 0 && same_grid) {
                const int kw = std::min(spec.k, out.reference->trapped_count);
                const auto o = wide_options(spec.solve, spec.precision, kw, c[0]);
                const auto wide = problems::solve_thin<Wide>(thin, spec.thin_bc, rec.resolution, o);
                const auto w = normalized_values(wide, h);
                for (int p = 0; p < kw; ++p) {
                    const Wide d = abs_of(w[p] - out.reference->Lambda_wide[p]);
                    rec.deviation_congruent[p] = to_double(d);
                    rec.deviation_decimal[p] = to_decimal(d, 30);
                }
                auto wf = nodal_vectors(wide, kw);
                for (int p = 0; p < kw; ++p) fields[p] = std::move(wf[p]);
            }

            for (int p = 0; p < spec.k; ++p) {
                LocalizationMetrics lm;
                lm.band_mass = three_band_masses(coarse.mesh, fields[p], h, thin.frame);
                lm.sup_ratio = interior_sup_ratio(coarse.mesh, fields[p], h, thin.frame);
                if (out.reference && p < int(out.reference->nodal.size())) {
                    MismatchWindow w = spec.window;
                    w.zeta_max = std::min({w.zeta_max, L1 - 1.0, 1.0 / h});
                    const auto nodes = stretched_nodes(coarse.mesh, h, thin.frame);
                    lm.mismatch = boundary_layer_mismatch(nodes, coarse.mesh.triangles, fields[p],
                                                          out.reference->mesh.nodes, out.reference->mesh.triangles,
                                                          out.reference->nodal[p], thin.H_plus, w);
                }
                rec.localization.push_back(lm);
            }
            rec.mesh_error_dominates = spec.policy.richardson && rec.mesh_error[0] > rec.deviation[0];
        } catch (const Error& e) {
            std::ostringstream msg;
            msg << "solve at h = " << h << " failed: " << e.what();
            out.failure = msg.str();
            break;
        }
        rec.wall_seconds = seconds_since(t0);
        if (spec.on_record) spec.on_record(rec);
        out.records.push_back(std::move(rec));
    }

    if (out.records.size() >= 3) {
        std::vector<std::pair<double, double>> rich, cong;
        for (const auto& r : out.records) {
            rich.push_back({r.h, r.deviation[0]});
            if (std::isfinite(r.deviation_congruent[0])) cong.push_back({r.h, r.deviation_congruent[0]});
        }
        try {
            out.fit = fit_exponential(rich);
        } catch (const FitError& e) {
            out.notes.push_back(std::string("Richardson deviation fit: ") + e.what());
        }
        if (cong.size() >= 3) {
            try {
                out.fit_congruent = fit_exponential(cong);
            } catch (const FitError& e) {
                out.notes.push_back(std::string("same-grid deviation fit: ") + e.what());
            }
        }
    }
    int crossover = -1;
    for (std::size_t i = 0; i < out.records.size(); ++i)
        if (out.records[i].mesh_error_dominates) {
            crossover = int(i);
            break;
        }
    if (crossover >= 0)
        out.notes.push_back(format_note("mesh error exceeds the Richardson deviation from h = ",
                                        out.records[crossover].h));
    return out;
}

SplittingReport splitting_analysis(const SplittingSpec& spec) {
    if (mesh::describe(spec.H_plus) != mesh::describe(spec.H_minus))
        throw PreconditionError("splitting_analysis needs a symmetric spec (H_plus = H_minus)");
    if (spec.hs.size() < 3) throw PreconditionError("splitting_analysis: need at least three h values");

    SplittingReport rep;
    const mesh::ProfileSpec H = spec.H_plus;
    PrecisionOptions no_wide = spec.precision;
    no_wide.enabled = false;
    const auto ref = reference_spectrum([&H](double L) { return DomainSpec::semicylinder(H, L); }, SemiBc::mixed, 1,
                                        spec.policy, spec.reference_L - 4.0, spec.reference_L, spec.solve, no_wide);
    if (ref.trapped_count < 1) throw PreconditionError("splitting_analysis: the end profile has no trapped mode");
    rep.Lambda1 = ref.Lambda[0];
    rep.kappa = std::sqrt(pi * pi - rep.Lambda1);

    std::vector<double> xs, ys;
    for (double h : spec.hs) {
        SplittingPoint pt;
        pt.h = h;
        DomainSpec half = DomainSpec::distorted_cylinder(h, H, H);
        half.frame = mesh::Frame::stretched;
        half.cut = mesh::Cut::along_half;
        const auto grid = grid_for(spec.policy, 1.0 / h, 0);
        SolveOptions even = spec.solve, odd = spec.solve;
        even.k = odd.k = 1;
        even.symmetry_along = mesh::BcType::neumann;
        odd.symmetry_along = mesh::BcType::dirichlet;
        const auto re = problems::solve_thin<double>(half, ThinBc::mixed, grid, even);
        const auto ro = problems::solve_thin<double>(half, ThinBc::mixed, grid, odd);
        const double de = normalized_values(re, h)[0], dd = normalized_values(ro, h)[0];
        pt.lambda_even = de / (h * h);
        pt.lambda_odd = dd / (h * h);
        pt.residual = std::max(re.solution.residuals[0], ro.solution.residuals[0]);

        Wide gap = Wide(dd) - Wide(de);
        if (spec.precision.enabled) {
            const auto we = problems::solve_thin<Wide>(half, ThinBc::mixed, grid,
                                                       [&] {
                                                           auto o = wide_options(even, spec.precision, 1, de);
                                                           o.symmetry_along = mesh::BcType::neumann;
                                                           return o;
                                                       }());
            const auto wo = problems::solve_thin<Wide>(half, ThinBc::mixed, grid,
                                                       [&] {
                                                           auto o = wide_options(odd, spec.precision, 1, de);
                                                           o.symmetry_along = mesh::BcType::dirichlet;
                                                           return o;
                                                       }());
            gap = normalized_values(wo, h)[0] - normalized_values(we, h)[0];
            pt.residual = std::max(we.solution.residuals[0], wo.solution.residuals[0]);
        }
        pt.gap = to_double(gap) / (h * h);
        pt.gap_decimal = to_decimal(gap / Wide(h * h), 30);
        pt.ordered = gap > Wide(0);
        pt.x = 2.0 * rep.kappa / h;
        if (pt.ordered) pt.y = std::log(to_double(gap) / 2.0);
        if (!pt.ordered || to_double(gap) < 10.0 * pt.residual * std::abs(de)) {
            pt.used = false;
            pt.note = "gap below 10x the eigenvalue residual; excluded from the fit";
        }

        if (spec.full_domain_check) {
            DomainSpec full = DomainSpec::distorted_cylinder(h, H, H);
            full.frame = mesh::Frame::stretched;
            SolveOptions o = spec.solve;
            o.k = 2;
            const auto rf = problems::solve_thin<double>(full, ThinBc::mixed, grid_for(spec.policy, 2.0 / h, 0), o);
            const auto v = rf.physical_eigenvalues();
            pt.full_lambda1 = v[0];
            pt.full_lambda2 = v[1];
            pt.full_rel_diff1 = std::abs(v[0] - pt.lambda_even) / std::abs(pt.lambda_even);
            pt.full_rel_diff2 = std::abs(v[1] - pt.lambda_odd) / std::abs(pt.lambda_odd);
        }
        if (pt.used) {
            xs.push_back(pt.x);
            ys.push_back(pt.y);
        }
        rep.points.push_back(pt);
    }
    if (xs.size() < 3) throw FitError("splitting_analysis: fewer than three resolvable gaps");
    rep.fit = fit_linear(xs, ys);
    rep.F_estimate = std::exp(rep.fit->intercept);
    std::ostringstream msg;
    msg << "slope " << rep.fit->slope << " +/- " << rep.fit->slope_stderr << "; |F| estimate " << rep.F_estimate;
    rep.notes.push_back(msg.str());
    return rep;
}

TrapezoidReport trapezoid_series(const mesh::ProfileSpec& H, const std::vector<double>& hs, const std::vector<int>& js,
                                 const TrapezoidPolicy& policy, const SolveOptions& solve) {
    TrapezoidReport rep;
    rep.limit = problems::reference_trapezoid_limit(H, 0);
    if (js.empty()) throw PreconditionError("trapezoid_series: empty mode list");
    rep.js = js;
    const int k = *std::max_element(js.begin(), js.end()) + 1;
    for (double h : hs) {
        if (!(h > 0.0)) throw PreconditionError("trapezoid_series: h must be positive");
        const auto t0 = std::chrono::steady_clock::now();
        TrapezoidPoint pt;
        pt.h = h;
        const int along = 2 * int(std::ceil(policy.along_per_width / std::sqrt(h)));
        pt.resolution = {policy.n_across, along};
        SolveOptions o = solve;
        o.k = k;
        const auto spec = DomainSpec::trapezoid(h, H);
        const auto coarse = problems::solve_trapezoid<double>(spec, pt.resolution, o);
        const auto* field_source = &coarse;
        std::optional<problems::SpectrumResult<double>> fine;
        std::vector<double> lam = coarse.physical_eigenvalues();
        if (policy.richardson) {
            pt.resolution_fine = {2 * policy.n_across, 2 * along};
            fine = problems::solve_trapezoid<double>(spec, pt.resolution_fine, o);
            const auto lf = fine->physical_eigenvalues();
            for (int i = 0; i < k; ++i) lam[i] = (4.0 * lf[i] - lam[i]) / 3.0;
            field_source = &*fine;
        }
        const double band = 3.0 * std::sqrt(h);
        for (int j : js) {
            const auto lim = problems::reference_trapezoid_limit(H, j);
            pt.lambda.push_back(lam[j]);
            const double corr = (h * h * lam[j] - lim.leading) / h;
            pt.correction.push_back(corr);
            pt.predicted.push_back(lim.Lambda);
            pt.rel_error.push_back(std::abs(corr - lim.Lambda) / lim.Lambda);
            pt.predicted_without_pi.push_back(lim.Lambda_without_pi);
            pt.rel_error_without_pi.push_back(std::abs(corr - lim.Lambda_without_pi) / lim.Lambda_without_pi);
            auto nodal = fem::to_nodal(field_source->system, field_source->solution.eigenvectors[j]);
            const auto masses = band_masses(field_source->mesh, nodal, h, mesh::Frame::physical, {-band, band});
            pt.mass_fraction.push_back(masses[1]);
        }
        pt.wall_seconds = seconds_since(t0);
        rep.points.push_back(pt);
    }
    std::ostringstream msg;
    msg << "B = " << rep.limit.B << " (without the pi^2 factor: " << rep.limit.B_without_pi
        << "); successive corrections should differ by 2 sqrt(B) = " << 2.0 * std::sqrt(rep.limit.B);
    rep.notes.push_back(msg.str());
    return rep;
}

NeumannHalfReport neumann_half_localization(const NeumannHalfSpec& spec) {
    NeumannHalfReport rep;
    const auto half_section = problems::cross_section_eigens(problems::CrossSectionSpec::half_interval(), 1);
    rep.cutoff = half_section.mu[0];
    rep.condition = conditions::condition_symmetric_half(half_section, spec.H);
    if (rep.condition.verdict != conditions::Verdict::satisfied) {
        rep.prediction = false;
        rep.notes.push_back("no prediction: the symmetric-half condition is not satisfied");
        return rep;
    }
    if (spec.hs.size() < 3) throw PreconditionError("neumann_half_localization: need at least three h values");
    rep.prediction = true;
    const auto [L1, L2] = spec.truncation ? *spec.truncation : default_truncation(spec.hs);
    const mesh::ProfileSpec H = spec.H;
    const auto ref = reference_spectrum([&H](double L) { return DomainSpec::half_semicylinder(H, L); },
                                        SemiBc::half_mixed, 1, spec.policy, L1, L2, spec.solve, spec.precision);
    if (ref.trapped_count < 1) throw NumericError("neumann_half_localization: the half semi-cylinder has no trapped mode");
    rep.Lambda_half = ref.Lambda[0];

    for (double h : spec.hs) {
        NeumannHalfPoint pt;
        pt.h = h;
        DomainSpec half = DomainSpec::distorted_cylinder(h, spec.H, spec.H_minus);
        half.frame = mesh::Frame::stretched;
        half.cut = mesh::Cut::across_half;
        const auto grid = grid_for(spec.policy, 2.0 / h, 0);
        const double target = rep.Lambda_half;
        double best = nan;
        problems::SpectrumResult<double> r;
        for (int k : {2, 6}) {
            SolveOptions o = spec.solve;
            o.k = k;
            r = problems::solve_thin<double>(half, ThinBc::half_neumann, grid, o);
            const auto v = normalized_values(r, h);
            double gap = std::numeric_limits<double>::infinity();
            for (double x : v)
                if (std::abs(x - target) < gap) {
                    gap = std::abs(x - target);
                    best = x;
                }
            if (gap < 0.5 * (rep.cutoff - target)) break;
            best = nan;
        }
        if (!std::isfinite(best))
            throw NumericError("neumann_half_localization: no eigenvalue of the half problem near h^-2 Lambda");
        pt.lambda = best / (h * h);
        pt.deviation_double = std::abs(best - ref.Lambda_coarse[0]) / (h * h);
        pt.deviation = std::abs(best - rep.Lambda_half) / (h * h);
        if (spec.precision.enabled && !ref.Lambda_wide.empty()) {
            const auto o = wide_options(spec.solve, spec.precision, 1, best);
            const auto w = problems::solve_thin<Wide>(half, ThinBc::half_neumann, grid, o);
            const Wide d = abs_of(normalized_values(w, h)[0] - ref.Lambda_wide[0]) / Wide(h * h);
            pt.deviation = to_double(d);
            pt.deviation_decimal = to_decimal(d, 30);
        }

        // Index in the full Neumann spectrum: eigenvalues strictly below.
        DomainSpec full = DomainSpec::distorted_cylinder(h, spec.H, spec.H_minus);
        full.frame = mesh::Frame::stretched;
        full.bc = problems::thin_conditions(full, ThinBc::all_neumann, spec.solve);
        const mesh::Resolution full_grid{2 * grid.n_across, grid.n_along};
        const auto fm = mesh::build_mesh(full, full_grid);
        const auto fs = fem::assemble_system<double>(fm, full.bc);
        int below = -1;
        for (double rel : {1e-9, 2e-9, 5e-9}) {
            try {
                below = eig::count_below<double>(fs.K, fs.M, best * (1.0 - rel));
                const int upto = eig::count_below<double>(fs.K, fs.M, best * (1.0 + rel));
                pt.subset_ok = upto > below;
                break;
            } catch (const SingularMatrixError&) {
            }
        }
        if (below < 0) throw NumericError("neumann_half_localization: inertia count failed at every trial shift");
        pt.N = below;
        rep.points.push_back(pt);
    }
    rep.N_increasing = true;
    rep.deviation_decreasing = true;
    for (std::size_t i = 1; i < rep.points.size(); ++i) {
        const bool finer = rep.points[i].h < rep.points[i - 1].h;
        const auto& a = finer ? rep.points[i - 1] : rep.points[i];
        const auto& b = finer ? rep.points[i] : rep.points[i - 1];
        if (!(b.N > a.N)) rep.N_increasing = false;
        if (!(b.deviation < a.deviation)) rep.deviation_decreasing = false;
    }
    std::vector<std::pair<double, double>> pts;
    for (const auto& p : rep.points) pts.push_back({p.h, p.deviation});
    try {
        rep.fit = fit_exponential(pts);
    } catch (const FitError& e) {
        rep.notes.push_back(std::string("deviation fit: ") + e.what());
    }
    return rep;
}

DumbbellReport dumbbell_study(const DumbbellSpec& spec) {
    DumbbellReport rep;
    const auto head = spec.head;
    const auto head_minus = spec.head_minus;
    if (!head.present() || !head_minus.present())
        throw PreconditionError("dumbbell_study: head width and height must be positive");
    rep.head_ground_state = pi * pi * (1.0 / (head.width * head.width) + 1.0 / (head.height * head.height));
    rep.head_below_cutoff = rep.head_ground_state < pi * pi;
    if (!rep.head_below_cutoff)
        rep.notes.push_back("head ground state is not below the channel cutoff; no trapped mode is guaranteed");

    SweepSpec s;
    s.thin = [head, head_minus](double h) {
        auto d = DomainSpec::dumbbell(h, head, head_minus);
        d.frame = mesh::Frame::stretched;
        return d;
    };
    s.thin_bc = ThinBc::all_dirichlet;
    s.semi = [head](double L) {
        auto d = DomainSpec::semicylinder(mesh::ProfileSpec::zero(), L);
        d.head_plus = head;
        return d;
    };
    s.semi_bc = SemiBc::all_dirichlet;
    s.hs = spec.hs;
    s.k = 1;
    s.policy = spec.policy;
    s.solve = spec.solve;
    s.precision = spec.precision;
    s.truncation = spec.truncation;
    rep.sweep = sweep_h(s);
    if (rep.sweep.reference) {
        rep.Lambda1 = rep.sweep.reference->Lambda[0];
        rep.cane_trapped = rep.sweep.reference->trapped_count > 0;
    }
    return rep;
}

}  // namespace trapmodes::asymptotics
