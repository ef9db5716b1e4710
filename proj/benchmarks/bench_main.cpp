// Microbenchmarks for the construction, verification, and analysis paths.
// These are informational (not part of the test gate): run ./fsph-bench
// [--benchmark_filter=...] to profile scaling in the cutoff Lambda.

#include <benchmark/benchmark.h>

#include <random>

#include "fsph/circle.hpp"
#include "fsph/eigen.hpp"
#include "fsph/random.hpp"
#include "fsph/sphere.hpp"

using namespace fsph;

namespace {

void BM_BuildCircle(benchmark::State& state) {
    const int lam = static_cast<int>(state.range(0));
    const double k = circle_min_stiffness(lam);
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_circle(lam, k));
    }
    state.SetComplexityN(lam);
}
BENCHMARK(BM_BuildCircle)->RangeMultiplier(2)->Range(2, 64)->Complexity();

void BM_VerifyCircleAlgebra(benchmark::State& state) {
    const int lam = static_cast<int>(state.range(0));
    const FuzzyCircleSpace s = build_circle(lam, circle_min_stiffness(lam));
    for (auto _ : state) {
        benchmark::DoNotOptimize(verify_circle_algebra(s));
    }
    state.SetComplexityN(lam);
}
BENCHMARK(BM_VerifyCircleAlgebra)->RangeMultiplier(2)->Range(2, 32)->Complexity();

void BM_BuildSphere(benchmark::State& state) {
    const int lam = static_cast<int>(state.range(0));
    const double k = sphere_min_stiffness(lam);
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_sphere(lam, k));
    }
    state.SetComplexityN(lam);
}
BENCHMARK(BM_BuildSphere)->RangeMultiplier(2)->Range(2, 16)->Complexity();

void BM_VerifySphereAlgebra(benchmark::State& state) {
    const int lam = static_cast<int>(state.range(0));
    const FuzzySphereSpace s = build_sphere(lam, sphere_min_stiffness(lam));
    for (auto _ : state) {
        benchmark::DoNotOptimize(verify_sphere_algebra(s));
    }
    state.SetComplexityN(lam);
}
BENCHMARK(BM_VerifySphereAlgebra)->RangeMultiplier(2)->Range(2, 10)->Complexity();

void BM_HermitianEigen(benchmark::State& state) {
    const int lam = static_cast<int>(state.range(0));
    const FuzzySphereSpace s = build_sphere(lam, sphere_min_stiffness(lam));
    for (auto _ : state) {
        benchmark::DoNotOptimize(hermitian_eigen(s.x3));
    }
    state.SetComplexityN(s.dim);
}
BENCHMARK(BM_HermitianEigen)->DenseRange(2, 10, 2)->Complexity();

void BM_TridiagEigen(benchmark::State& state) {
    const int lam = static_cast<int>(state.range(0));
    const BmTridiag t = sphere_Bm_tridiag(lam, sphere_min_stiffness(lam), 0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(sym_tridiag_eigen(t.diag, t.offdiag));
    }
    state.SetComplexityN(lam);
}
BENCHMARK(BM_TridiagEigen)->RangeMultiplier(4)->Range(4, 1024)->Complexity();

void BM_CircleResolution(benchmark::State& state) {
    const int lam = static_cast<int>(state.range(0));
    const FuzzyCircleSpace s = build_circle(lam, circle_min_stiffness(lam));
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 6.28);
    std::vector<double> betas(s.dim);
    for (auto& b : betas) b = u(rng);
    const StateVector omega = circle_scs_omega(s, 0.3, betas);
    for (auto _ : state) {
        benchmark::DoNotOptimize(circle_resolution_check(
            s, static_cast<std::size_t>(2 * lam + 2), omega));
    }
    state.SetComplexityN(lam);
}
BENCHMARK(BM_CircleResolution)->RangeMultiplier(2)->Range(2, 32)->Complexity();

void BM_SphereResolution(benchmark::State& state) {
    const int lam = static_cast<int>(state.range(0));
    const FuzzySphereSpace s = build_sphere(lam, sphere_min_stiffness(lam));
    const SphereSCSReport om = sphere_scs_family(
        s, SphereSCSKind::Omega,
        std::vector<double>(static_cast<std::size_t>(lam) + 1, 0.0));
    const std::size_t nodes = static_cast<std::size_t>(2 * lam + 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            sphere_resolution_check(s, om.state, nodes, nodes, nodes));
    }
    state.SetComplexityN(lam);
}
BENCHMARK(BM_SphereResolution)->DenseRange(2, 8, 2)->Complexity();

void BM_BmSweep(benchmark::State& state) {
    const int lam = static_cast<int>(state.range(0));
    const double k = sphere_min_stiffness(lam);
    for (auto _ : state) {
        for (int m = 0; m <= lam; ++m) {
            benchmark::DoNotOptimize(sphere_Bm_analysis(lam, k, m));
        }
    }
    state.SetComplexityN(lam);
}
BENCHMARK(BM_BmSweep)->RangeMultiplier(2)->Range(4, 64)->Complexity();

void BM_UrAuditSphere(benchmark::State& state) {
    const int lam = static_cast<int>(state.range(0));
    const FuzzySphereSpace s = build_sphere(lam, sphere_min_stiffness(lam));
    std::mt19937_64 rng(7);
    const StateVector v = random_state(s.dim, rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(sphere_ur_audit(s, v));
    }
    state.SetComplexityN(s.dim);
}
BENCHMARK(BM_UrAuditSphere)->DenseRange(2, 10, 2)->Complexity();

}  // namespace

BENCHMARK_MAIN();
