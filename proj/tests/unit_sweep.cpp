#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nsalpha/alpha_sweep.hpp"
#include "test_support.hpp"

using namespace nsalpha;
using namespace nsalpha::test;

namespace {

SweepConfig small_sweep(std::vector<double> alphas, unsigned threads = 1) {
    auto ms = ModeSet::create(2, 8);
    PhysicalParams p{0.5, 0.0, 0.5};
    const int m = 16;
    TrackingFixture fx = make_tracking_fixture(ms, p, m, TimeScheme::ImexEuler, 4242);
    ControlProblem base{p,
                        CostWeights{1.0, 0.1, 0.1},
                        CostKind::L4Tracking,
                        AdmissibleSet::unconstrained(),
                        fx.u0,
                        fx.u_d,
                        fx.u_T,
                        TimeScheme::ImexEuler};
    SweepConfig cfg{std::move(alphas), std::move(base), ProjectedGradientOptions{}, threads};
    cfg.optimizer.max_iters = 400;
    cfg.optimizer.tol = 1e-9;
    return cfg;
}

}  // namespace

TEST_CASE("structural alpha = 0 reductions") {
    for (int dim : {2, 3}) {
        auto ms = ModeSet::create(dim, 8);
        SolenoidalField u = random_field(ms, 91);
        SolenoidalField lam = random_field(ms, 92);
        // Helmholtz multipliers all one
        CHECK(rel_diff(helmholtz_apply(u, 0.0), u) == 0.0);
        CHECK(rel_diff(helmholtz_solve(u, 0.0), u) == 0.0);
        // B reduces to the NS nonlinearity, B'* to the limit advection
        CHECK(rel_diff(nonlinear_B(u, u, 0.0), ns_advection(u)) <= 1e-12);
        CHECK(rel_diff(adjoint_B_star(u, lam, 0.0), limit_adjoint_advection(u, lam)) <= 1e-12);
    }
}

TEST_CASE("run_sweep: alphas = [0] yields one row with zero gaps") {
    SweepConfig cfg = small_sweep({0.0});
    SweepResult res = run_sweep(cfg);
    REQUIRE(res.rows.size() == 1);
    const SweepRow& r = res.rows.front();
    CHECK(r.alpha == 0.0);
    CHECK(r.converged);
    CHECK(r.gap_state_l2v == 0.0);
    CHECK(r.gap_state_linf_l2 == 0.0);
    CHECK(r.gap_adj_l2v == 0.0);
    CHECK(r.gap_adj_l2l2 == 0.0);
}

TEST_CASE("run_sweep: gaps shrink with alpha and the table is deterministic") {
    SweepConfig cfg = small_sweep({0.5, 0.125});
    SweepResult a = run_sweep(cfg);
    REQUIRE(a.rows.size() == 3);
    CHECK(a.rows[0].alpha == 0.5);
    CHECK(a.rows[1].alpha == 0.125);
    CHECK(a.rows[2].alpha == 0.0);
    for (const auto& r : a.rows) CHECK(r.converged);
    CHECK(a.rows[1].gap_state_l2v < a.rows[0].gap_state_l2v);
    CHECK(a.rows[1].gap_adj_l2l2 < a.rows[0].gap_adj_l2l2);
    CHECK(a.rows[0].gap_state_l2v > 0.0);

    SweepResult b = run_sweep(cfg);
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        CHECK(a.rows[i].cost == b.rows[i].cost);
        CHECK(a.rows[i].gap_state_l2v == b.rows[i].gap_state_l2v);
        CHECK(a.rows[i].gap_adj_l2l2 == b.rows[i].gap_adj_l2l2);
    }

    // threaded execution reproduces the same table
    SweepConfig cfg2 = small_sweep({0.5, 0.125}, 3);
    SweepResult c = run_sweep(cfg2);
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        CHECK(a.rows[i].cost == c.rows[i].cost);
        CHECK(a.rows[i].gap_adj_l2v == c.rows[i].gap_adj_l2v);
    }
}

TEST_CASE("limit_adjoint_residual: consistency, zero case, linear growth in perturbation") {
    auto ms = ModeSet::create(2, 8);
    PhysicalParams p{0.4, 0.0, 0.5};
    const int m = 64;
    std::mt19937_64 rng(31);
    SolenoidalField u0 = random_solenoidal(ms, rng, 2.5, 0.5);
    Trajectory f = random_trajectory(ms, 0.0, p.t_final, m, rng, 2.5, 0.3);
    StateSolution sol = integrate_state(u0, f, p, m, TimeScheme::ImexCnHeun);
    Trajectory u_d = Trajectory::zero(0.0, p.t_final, m, ms);
    AdjointSource src{CostKind::L4Tracking, u_d, 1.0};
    TerminalCondition tc{0.5, SolenoidalField::zero(ms)};

    // lambda from the second-order backward integrator satisfies the limit
    // system to within its truncation level
    AdjointSolution adj = integrate_adjoint(sol.u, src, tc, p, TimeScheme::ImexCnHeun);
    const double res = limit_adjoint_residual(sol.u, adj.lambda, src, p);
    const double est = truncation_estimate(adj.lambda, 2);
    CHECK(res <= 10.0 * est);

    // gamma_u = 0 and u(T) = u_T: lambda = 0 and the residual vanishes
    AdjointSource src0{CostKind::L4Tracking, u_d, 0.0};
    TerminalCondition tc0{1.0, sol.u.at(m)};
    AdjointSolution adj0 = integrate_adjoint(sol.u, src0, tc0, p, TimeScheme::ImexCnHeun);
    CHECK(limit_adjoint_residual(sol.u, adj0.lambda, src0, p) <= 1e-14);

    // injected perturbation grows the residual proportionally
    std::mt19937_64 rng2(77);
    Trajectory noise = random_trajectory(ms, 0.0, p.t_final, m, rng2, 2.0, 1.0);
    auto res_at = [&](double eps) {
        Trajectory lam = adj.lambda;
        lam.add_scaled(eps, noise);
        return limit_adjoint_residual(sol.u, lam, src, p);
    };
    const double r1 = res_at(1e-3), r2 = res_at(2e-3);
    CHECK(r2 / r1 == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("run_sweep: a non-converged row is flagged and the sweep continues") {
    SweepConfig cfg = small_sweep({0.5});
    cfg.optimizer.max_iters = 1;  // starve the optimizer
    cfg.optimizer.tol = 1e-16;
    SweepResult res = run_sweep(cfg);
    REQUIRE(res.rows.size() == 2);
    CHECK_FALSE(res.rows[0].converged);
    CHECK_FALSE(res.rows[1].converged);
    CHECK(res.rows[0].gap_state_l2v > 0.0);  // gaps still computed from the partial solves
}

TEST_CASE("run_sweep: the J cost exercises the DA-tracking adjoint source") {
    SweepConfig cfg = small_sweep({0.25});
    cfg.base.kind = CostKind::DaTracking;
    SweepResult res = run_sweep(cfg);
    REQUIRE(res.rows.size() == 2);
    for (const auto& r : res.rows) CHECK(r.converged);
    CHECK(res.rows[0].gap_state_l2v > 0.0);
    CHECK(res.limit_residual <= 10.0 * res.truncation_estimate);
}

TEST_CASE("sweep config validation") {
    SweepConfig cfg = small_sweep({0.5, 0.125});
    cfg.alphas = {};
    CHECK_THROWS_AS(run_sweep(cfg), DimensionError);
    cfg.alphas = {0.1, 0.5};
    CHECK_THROWS_AS(run_sweep(cfg), DimensionError);
    cfg.alphas = {0.5, -0.1};
    CHECK_THROWS_AS(run_sweep(cfg), DimensionError);
}
