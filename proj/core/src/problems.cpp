#include "trapmodes/problems.hpp"

#include "trapmodes/error.hpp"

#include <chrono>
#include <cmath>
#include <numbers>

namespace trapmodes::problems {

using mesh::BcType;
using mesh::BoundaryTag;
using mesh::DomainSpec;
using mesh::Variant;

namespace {

constexpr double pi = std::numbers::pi;

}  // namespace

const char* to_string(ThinBc b) {
    switch (b) {
        case ThinBc::mixed: return "mixed";
        case ThinBc::all_dirichlet: return "all_dirichlet";
        case ThinBc::all_neumann: return "all_neumann";
        case ThinBc::half_neumann: return "half_neumann";
    }
    return "?";
}

const char* to_string(SemiBc b) {
    switch (b) {
        case SemiBc::mixed: return "mixed";
        case SemiBc::all_dirichlet: return "all_dirichlet";
        case SemiBc::half_mixed: return "half_mixed";
    }
    return "?";
}

ThinBc parse_thin_bc(const std::string& s) {
    for (auto b : {ThinBc::mixed, ThinBc::all_dirichlet, ThinBc::all_neumann, ThinBc::half_neumann})
        if (s == to_string(b)) return b;
    throw ConfigError("unknown thin-domain boundary preset '" + s + "'");
}

SemiBc parse_semi_bc(const std::string& s) {
    for (auto b : {SemiBc::mixed, SemiBc::all_dirichlet, SemiBc::half_mixed})
        if (s == to_string(b)) return b;
    throw ConfigError("unknown semi-cylinder boundary preset '" + s + "'");
}

template <class Real>
std::vector<double> SpectrumResult<Real>::physical_eigenvalues() const {
    std::vector<double> out;
    for (const auto& v : solution.eigenvalues) out.push_back(lambda_scale * to_double(v));
    return out;
}

mesh::BoundaryConditions thin_conditions(const DomainSpec& spec, ThinBc kind, const SolveOptions& opt) {
    mesh::BoundaryConditions bc;
    const BcType D = BcType::dirichlet, N = BcType::neumann;
    switch (kind) {
        case ThinBc::mixed:
            bc = {{BoundaryTag::lateral, D}, {BoundaryTag::end_plus, N}, {BoundaryTag::end_minus, N}};
            break;
        case ThinBc::all_dirichlet:
            bc = {{BoundaryTag::lateral, D}, {BoundaryTag::end_plus, D}, {BoundaryTag::end_minus, D}};
            break;
        case ThinBc::all_neumann:
            bc = {{BoundaryTag::lateral, N}, {BoundaryTag::end_plus, N}, {BoundaryTag::end_minus, N}};
            break;
        case ThinBc::half_neumann:
            if (spec.cut != mesh::Cut::across_half)
                throw PreconditionError("half_neumann needs a domain cut across (a symmetry face at η = 1/2)");
            bc = {{BoundaryTag::lateral, N}, {BoundaryTag::end_plus, N}, {BoundaryTag::end_minus, N},
                  {BoundaryTag::symmetry, D}};
            break;
    }
    if (spec.cut == mesh::Cut::along_half) bc[BoundaryTag::symmetry] = opt.symmetry_along;
    if (kind != ThinBc::half_neumann && spec.cut == mesh::Cut::across_half)
        throw PreconditionError(std::string("preset ") + to_string(kind) + " is undefined on an across-half domain");
    return bc;
}

mesh::BoundaryConditions semi_conditions(const DomainSpec& spec, SemiBc kind, const SolveOptions& opt) {
    const BcType D = BcType::dirichlet, N = BcType::neumann;
    const bool half = spec.variant == Variant::half_semicylinder_2d;
    if (half != (kind == SemiBc::half_mixed))
        throw PreconditionError("half_mixed is the only preset for half semi-cylinders and is reserved for them");
    switch (kind) {
        case SemiBc::mixed:
            return {{BoundaryTag::lateral, D}, {BoundaryTag::end_plus, N}, {BoundaryTag::artificial, opt.truncation}};
        case SemiBc::all_dirichlet:
            return {{BoundaryTag::lateral, D}, {BoundaryTag::end_plus, D}, {BoundaryTag::artificial, opt.truncation}};
        case SemiBc::half_mixed:
            return {{BoundaryTag::symmetry, D},
                    {BoundaryTag::lateral, N},
                    {BoundaryTag::end_plus, N},
                    {BoundaryTag::artificial, opt.truncation}};
    }
    return {};
}

template <class Real>
SpectrumResult<Real> solve_spectrum(const DomainSpec& spec, mesh::Resolution resolution, const SolveOptions& opt) {
    const auto start = std::chrono::steady_clock::now();
    SpectrumResult<Real> out;
    out.spec = spec;
    out.resolution = resolution;
    out.mesh = mesh::build_mesh(spec, resolution);
    out.system = fem::assemble_system<Real>(out.mesh, spec.bc);

    bool neumann_only = true;
    for (const auto& [tag, type] : spec.bc)
        if (type == BcType::dirichlet) neumann_only = false;

    eig::EigenOptions eo;
    eo.k = opt.k;
    eo.tol = opt.tol;
    eo.seed = opt.seed;
    eo.max_restarts = opt.max_restarts;
    eo.shift = opt.shift ? *opt.shift : (neumann_only ? -1.0 : 0.0);
    out.solution = eig::smallest_eigenpairs<Real>(out.system.K, out.system.M, eo);
    if (spec.frame == mesh::Frame::stretched && !spec.is_semicylinder()) out.lambda_scale = 1.0 / (spec.h * spec.h);
    out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

template <class Real>
SpectrumResult<Real> solve_thin(DomainSpec spec, ThinBc kind, mesh::Resolution resolution, const SolveOptions& opt) {
    if (!spec.is_thin()) throw PreconditionError("solve_thin expects a straight, distorted or dumbbell thin domain");
    spec.bc = thin_conditions(spec, kind, opt);
    return solve_spectrum<Real>(spec, resolution, opt);
}

template <class Real>
SemicylinderResult<Real> solve_semicylinder(DomainSpec spec, SemiBc kind, mesh::Resolution resolution,
                                            const SolveOptions& opt) {
    if (!spec.is_semicylinder()) throw PreconditionError("solve_semicylinder expects a (half) semi-cylinder");
    if (!(spec.L > 0.0)) throw PreconditionError("solve_semicylinder: truncation length L must be set");
    spec.bc = semi_conditions(spec, kind, opt);

    SemicylinderResult<Real> out;
    const auto section = cross_section_eigens(kind == SemiBc::half_mixed ? CrossSectionSpec::half_interval()
                                                                         : CrossSectionSpec::interval(),
                                              1);
    out.cutoff = section.mu[0];
    out.margin = opt.trapped_margin * out.cutoff;
    out.spectrum = solve_spectrum<Real>(spec, resolution, opt);
    for (const auto& v : out.spectrum.solution.eigenvalues) out.trapped.push_back(to_double(v) < out.cutoff - out.margin);
    out.caveat =
        "eigenvalues of the truncated problem above the cutoff discretize the continuous spectrum and are not "
        "trapped modes";
    return out;
}

template <class Real>
SpectrumResult<Real> solve_trapezoid(DomainSpec spec, mesh::Resolution resolution, const SolveOptions& opt) {
    if (spec.variant != Variant::trapezoid_2d) throw PreconditionError("solve_trapezoid expects a trapezoid spec");
    spec.bc = {{BoundaryTag::lateral, BcType::dirichlet},
               {BoundaryTag::end_plus, BcType::dirichlet},
               {BoundaryTag::end_minus, BcType::dirichlet}};
    SolveOptions o = opt;
    if (!o.shift) {
        const double hmax = spec.h * std::max(std::abs(mesh::profile_max_abs(spec.H_plus)), 1e-300);
        o.shift = pi * pi / (hmax * hmax) * (1.0 - 1e-6);
    }
    return solve_spectrum<Real>(spec, resolution, o);
}

double StraightReference::eval(double y, double z) const {
    return amplitude * std::sin(p * pi * y / h) * std::cos(pi * q * (z + 1.0) / 2.0);
}

StraightReference reference_straight(double h, int p, int q) {
    if (!(h > 0.0)) throw DomainError("reference_straight: h must be positive");
    if (p < 1 || q < 0) throw DomainError("reference_straight: need p >= 1 and q >= 0");
    StraightReference r;
    r.h = h;
    r.p = p;
    r.q = q;
    r.mu = p * p * pi * pi;
    r.lambda = r.mu / (h * h) + pi * pi * q * q / 4.0;
    // ∫ sin² over [0,h] is h/2; ∫ cos² over [-1,1] is 1 (q ≥ 1) or 2 (q = 0).
    r.amplitude = 1.0 / std::sqrt(h / 2.0 * (q == 0 ? 2.0 : 1.0));
    return r;
}

TrapezoidLimit reference_trapezoid_limit(const mesh::ProfileSpec& H, int j) {
    if (j < 0) throw DomainError("reference_trapezoid_limit: j must be non-negative");
    if (!(H.domain_lo() < 0.0 && H.domain_hi() > 0.0))
        throw PreconditionError("reference_trapezoid_limit: profile must be defined around z = 0");
    auto second = [&H](double d) {
        return (mesh::profile_eval(H, d) - 2.0 * mesh::profile_eval(H, 0.0) + mesh::profile_eval(H, -d)) / (d * d);
    };
    auto first = [&H](double d) { return (mesh::profile_eval(H, d) - mesh::profile_eval(H, -d)) / (2.0 * d); };
    const double d = 1e-3;
    const double H0 = mesh::profile_eval(H, 0.0);
    const double slope = (4.0 * first(d / 2) - first(d)) / 3.0;
    const double b = -(4.0 * second(d / 2) - second(d)) / 3.0;
    if (!(H0 > 0.0)) throw PreconditionError("reference_trapezoid_limit: H(0) must be positive");
    if (!(b > 1e-8 * std::max(1.0, std::abs(H0))))
        throw PreconditionError("reference_trapezoid_limit: H has no strict maximum at z = 0 (b = -H''(0) <= 0)");
    if (std::abs(slope) > 1e-6 * std::max(1.0, std::abs(H0)))
        throw PreconditionError("reference_trapezoid_limit: H'(0) != 0, the maximum is not at z = 0");
    TrapezoidLimit r;
    r.H0 = H0;
    r.b = b;
    r.B_without_pi = b / (H0 * H0 * H0);
    r.B = pi * pi * r.B_without_pi;
    r.leading = pi * pi / (H0 * H0);
    r.Lambda = std::sqrt(r.B) * (2 * j + 1);
    r.Lambda_without_pi = std::sqrt(r.B_without_pi) * (2 * j + 1);
    r.j = j;
    return r;
}

#define TRAPMODES_PROBLEMS_INSTANTIATE(R)                                                                            \
    template struct SpectrumResult<R>;                                                                               \
    template SpectrumResult<R> solve_spectrum<R>(const DomainSpec&, mesh::Resolution, const SolveOptions&);         \
    template SpectrumResult<R> solve_thin<R>(DomainSpec, ThinBc, mesh::Resolution, const SolveOptions&);            \
    template SemicylinderResult<R> solve_semicylinder<R>(DomainSpec, SemiBc, mesh::Resolution, const SolveOptions&); \
    template SpectrumResult<R> solve_trapezoid<R>(DomainSpec, mesh::Resolution, const SolveOptions&);

TRAPMODES_PROBLEMS_INSTANTIATE(double)
TRAPMODES_PROBLEMS_INSTANTIATE(Wide)

}  // namespace trapmodes::problems
