#include <trapmodes/fem.hpp>
#include <trapmodes/lanczos.hpp>
#include <trapmodes/ldlt.hpp>
#include <trapmodes/problems.hpp>

#include <benchmark/benchmark.h>

using namespace trapmodes;

namespace {

// Dented thin cylinder in the stretched frame, n_across × 6·n_across cells.
struct Case {
    mesh::BoundaryConditions bc;
    mesh::Mesh mesh;
    fem::AssembledSystem<double> system;

    explicit Case(int n) {
        auto spec = mesh::DomainSpec::distorted_cylinder(0.2, mesh::ProfileSpec::fourier(0, {-1.0}),
                                                         mesh::ProfileSpec::zero());
        spec.frame = mesh::Frame::stretched;
        bc = problems::thin_conditions(spec, problems::ThinBc::mixed, {});
        spec.bc = bc;
        mesh = mesh::build_mesh(spec, {n, 6 * n});
        system = fem::assemble_system<double>(mesh, bc);
    }
};

void BM_Assemble(benchmark::State& state) {
    const Case c(int(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(fem::assemble_system<double>(c.mesh, c.bc));
    state.counters["dofs"] = c.system.n_free;
}
BENCHMARK(BM_Assemble)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_Factorize(benchmark::State& state) {
    const Case c(int(state.range(0)));
    const auto perm = eig::reorder(c.system.K);
    for (auto _ : state) benchmark::DoNotOptimize(eig::factorize<double>(c.system.K, 0.5, &c.system.M, &perm));
    state.counters["dofs"] = c.system.n_free;
    state.counters["factor_nnz"] = double(eig::factorize<double>(c.system.K, 0.5, &c.system.M, &perm).factor_nnz());
}
BENCHMARK(BM_Factorize)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_Lanczos(benchmark::State& state) {
    const Case c(int(state.range(0)));
    eig::EigenOptions o;
    o.k = int(state.range(1));
    for (auto _ : state) benchmark::DoNotOptimize(eig::smallest_eigenpairs(c.system.K, c.system.M, o));
    state.counters["dofs"] = c.system.n_free;
}
BENCHMARK(BM_Lanczos)->Args({16, 1})->Args({32, 1})->Args({32, 6})->Args({64, 1})->Unit(benchmark::kMillisecond);

void BM_LanczosWide(benchmark::State& state) {
    const Case c(int(state.range(0)));
    const auto K = c.system.K.template cast<Wide>();
    const auto M = c.system.M.template cast<Wide>();
    eig::EigenOptions o;
    o.tol = 1e-30;
    for (auto _ : state) benchmark::DoNotOptimize(eig::smallest_eigenpairs(K, M, o));
}
BENCHMARK(BM_LanczosWide)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
