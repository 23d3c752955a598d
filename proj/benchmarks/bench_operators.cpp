#include <benchmark/benchmark.h>

#include <random>

#include "nsalpha/adjoint_solver.hpp"
#include "nsalpha/random_fields.hpp"
#include "nsalpha/transform.hpp"

using namespace nsalpha;

namespace {

SolenoidalField field_at(int dim, int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return random_solenoidal(ModeSet::create(dim, n), rng);
}

void BM_TransformRoundTrip(benchmark::State& state) {
    SolenoidalField u = field_at(static_cast<int>(state.range(0)),
                                 static_cast<int>(state.range(1)), 1);
    for (auto _ : state) {
        GridField g = to_physical(u);
        benchmark::DoNotOptimize(to_spectral(g, u.modes_ptr()));
    }
}

void BM_NonlinearB(benchmark::State& state) {
    SolenoidalField u = field_at(static_cast<int>(state.range(0)),
                                 static_cast<int>(state.range(1)), 2);
    SolenoidalField v = field_at(static_cast<int>(state.range(0)),
                                 static_cast<int>(state.range(1)), 3);
    for (auto _ : state) benchmark::DoNotOptimize(nonlinear_B(u, v, 0.1));
}

void BM_AdjointBStar(benchmark::State& state) {
    SolenoidalField u = field_at(static_cast<int>(state.range(0)),
                                 static_cast<int>(state.range(1)), 4);
    SolenoidalField lam = field_at(static_cast<int>(state.range(0)),
                                   static_cast<int>(state.range(1)), 5);
    for (auto _ : state) benchmark::DoNotOptimize(adjoint_B_star(u, lam, 0.1));
}

void BM_StateSolve(benchmark::State& state) {
    const int dim = static_cast<int>(state.range(0));
    const int n = static_cast<int>(state.range(1));
    auto ms = ModeSet::create(dim, n);
    std::mt19937_64 rng(6);
    SolenoidalField u0 = random_solenoidal(ms, rng, 2.5, 0.5);
    PhysicalParams p{0.5, 0.1, 0.25};
    Trajectory f = Trajectory::zero(0.0, p.t_final, 16, ms);
    for (auto _ : state)
        benchmark::DoNotOptimize(integrate_state(u0, f, p, 16, TimeScheme::ImexCnHeun));
}

}  // namespace

BENCHMARK(BM_TransformRoundTrip)->Args({2, 8})->Args({2, 16})->Args({3, 16});
BENCHMARK(BM_NonlinearB)->Args({2, 8})->Args({2, 16})->Args({3, 16});
BENCHMARK(BM_AdjointBStar)->Args({2, 8})->Args({2, 16})->Args({3, 16});
BENCHMARK(BM_StateSolve)->Args({2, 8})->Args({3, 8});

BENCHMARK_MAIN();
