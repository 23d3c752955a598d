#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nsalpha/verify.hpp"
#include "test_support.hpp"

using namespace nsalpha;
using namespace nsalpha::test;

namespace {

ControlProblem tracking_problem(const ModeSetPtr& ms, const PhysicalParams& p, int m,
                                CostKind kind, AdmissibleSet set, CostWeights w,
                                TimeScheme scheme, std::uint64_t seed = 13) {
    TrackingFixture fx = make_tracking_fixture(ms, p, m, scheme, seed);
    return ControlProblem{p, w, kind, set, fx.u0, fx.u_d, fx.u_T, scheme};
}

}  // namespace

TEST_CASE("eval_cost: zero mismatch, exact trapezoid, weight scaling") {
    auto ms = ModeSet::create(2, 8);
    const int m = 8;
    PhysicalParams p{0.2, 0.1, 1.0};
    std::mt19937_64 rng(3);
    Trajectory u = random_trajectory(ms, 0.0, p.t_final, m, rng);
    Trajectory zero = Trajectory::zero(0.0, p.t_final, m, ms);

    // u == u_d, u(T) = u_T, f = 0 -> J = 0 = J0
    for (CostKind kind : {CostKind::DaTracking, CostKind::L4Tracking})
        CHECK(eval_cost(u, zero, u, u.at(m), CostWeights{1, 1, 1}, kind) == 0.0);

    // gamma_f only, constant single-mode control: J = T ||a||^2 / 2 exactly
    SolenoidalField a = single_mode(ms, 0.7);
    Trajectory f = Trajectory::constant(0.0, p.t_final, m, a);
    const double j = eval_cost(u, f, u, u.at(m), CostWeights{0, 0, 1}, CostKind::DaTracking);
    CHECK(j == doctest::Approx(0.5 * p.t_final * l2_norm(a) * l2_norm(a)).epsilon(1e-14));

    // doubling all weights doubles J
    Trajectory ud = random_trajectory(ms, 0.0, p.t_final, m, rng);
    const double j1 =
        eval_cost(u, f, ud, zero.at(0), CostWeights{1.0, 0.5, 0.25}, CostKind::DaTracking);
    const double j2 =
        eval_cost(u, f, ud, zero.at(0), CostWeights{2.0, 1.0, 0.5}, CostKind::DaTracking);
    CHECK(j2 == doctest::Approx(2.0 * j1).epsilon(1e-13));

    CHECK_THROWS_AS(eval_cost(u, Trajectory::zero(0.0, 1.0, m + 1, ms), u, u.at(m),
                              CostWeights{1, 1, 1}, CostKind::DaTracking),
                    DimensionError);
}

TEST_CASE("reduced_gradient: lambda = 0 returns gamma_f f; FD oracle on 5 directions") {
    auto ms = ModeSet::create(2, 8);
    const int m = 8;
    std::mt19937_64 rng(5);
    Trajectory f = random_trajectory(ms, 0.0, 1.0, m, rng);
    Trajectory zero = Trajectory::zero(0.0, 1.0, m, ms);
    Trajectory g = reduced_gradient(f, zero, 1.0);
    CHECK(q_norm(g - f) <= 1e-14);

    PhysicalParams p{0.5, 0.1, 0.5};
    ControlProblem prob = tracking_problem(ms, p, 16, CostKind::DaTracking,
                                           AdmissibleSet::unconstrained(),
                                           CostWeights{1.0, 0.3, 0.1}, TimeScheme::ImexEuler);
    std::mt19937_64 rng2(55);
    Trajectory f0 = random_trajectory(ms, 0.0, p.t_final, 16, rng2, 2.0, 0.4);
    CHECK(fd_gradient_max_rel_error(prob, f0, 5, 1e-5, 99) <= 1e-6);
}

TEST_CASE("project_admissible: identity, ball closed form, non-expansive") {
    auto ms = ModeSet::create(2, 8);
    std::mt19937_64 rng(7);
    Trajectory g = random_trajectory(ms, 0.0, 1.0, 8, rng);

    CHECK(q_norm(project_admissible(AdmissibleSet::unconstrained(), g) - g) == 0.0);

    const double R = 0.5 * q_norm(g);  // ||g|| = 2R -> g/2
    Trajectory pg = project_admissible(AdmissibleSet::ball(R), g);
    CHECK(q_norm(pg - 0.5 * g) <= 1e-13 * q_norm(g));
    CHECK(q_norm(pg) == doctest::Approx(R).epsilon(1e-13));

    Trajectory inside = 0.1 * g;
    CHECK(q_norm(project_admissible(AdmissibleSet::ball(R), inside) - inside) == 0.0);

    for (int it = 0; it < 20; ++it) {
        Trajectory a = random_trajectory(ms, 0.0, 1.0, 8, rng);
        Trajectory b = random_trajectory(ms, 0.0, 1.0, 8, rng);
        const double lhs = q_norm(project_admissible(AdmissibleSet::ball(1.0), a) -
                                  project_admissible(AdmissibleSet::ball(1.0), b));
        CHECK(lhs <= q_norm(a - b) * (1 + 1e-13));
    }
}

TEST_CASE("projected_gradient: pure control penalty collapses to zero immediately") {
    auto ms = ModeSet::create(2, 8);
    PhysicalParams p{0.2, 0.1, 0.5};
    const int m = 8;
    Trajectory u_d = Trajectory::zero(0.0, p.t_final, m, ms);
    ControlProblem prob{p,
                        CostWeights{0.0, 0.0, 1.0},
                        CostKind::DaTracking,
                        AdmissibleSet::unconstrained(),
                        SolenoidalField::zero(ms),
                        u_d,
                        SolenoidalField::zero(ms),
                        TimeScheme::ImexEuler};
    std::mt19937_64 rng(11);
    Trajectory f0 = random_trajectory(ms, 0.0, p.t_final, m, rng, 2.0, 0.5);
    OptimalityReport rep = projected_gradient(prob, f0, {.max_iters = 10, .tol = 1e-12});
    CHECK(rep.converged);
    CHECK(rep.iterations <= 2);
    CHECK(rep.cost <= 1e-20);
}

TEST_CASE("projected_gradient: descent on the tracking fixture is monotone") {
    auto ms = ModeSet::create(2, 8);
    PhysicalParams p{0.5, 0.1, 0.5};
    ControlProblem prob = tracking_problem(ms, p, 16, CostKind::DaTracking,
                                           AdmissibleSet::unconstrained(),
                                           CostWeights{1.0, 0.1, 0.01}, TimeScheme::ImexEuler);
    Trajectory f0 = Trajectory::zero(0.0, p.t_final, 16, ms);
    OptimalityReport rep = projected_gradient(prob, f0, {.max_iters = 60, .tol = 1e-10});
    REQUIRE(rep.history.size() >= 3);
    for (std::size_t i = 1; i < rep.history.size(); ++i)
        CHECK(rep.history[i].cost <= rep.history[i - 1].cost * (1 + 1e-14));
    // tracking mismatch shrinks against doing nothing
    StateSolution free_run = integrate_state(prob.u0, f0, p, 16, prob.scheme);
    const double j_free =
        eval_cost(free_run.u, f0, prob.u_d, prob.u_T, prob.weights, prob.kind);
    CHECK(rep.cost < 0.2 * j_free);
}

TEST_CASE("projected_gradient: active ball constraint ends on the boundary") {
    auto ms = ModeSet::create(2, 8);
    PhysicalParams p{0.5, 0.1, 0.5};
    const int m = 16;
    // first find the unconstrained optimum norm, then shrink the ball under it
    ControlProblem un = tracking_problem(ms, p, m, CostKind::DaTracking,
                                         AdmissibleSet::unconstrained(),
                                         CostWeights{1.0, 0.1, 0.05}, TimeScheme::ImexEuler);
    Trajectory f0 = Trajectory::zero(0.0, p.t_final, m, ms);
    OptimalityReport rep_un = projected_gradient(un, f0, {.max_iters = 200, .tol = 1e-9});
    REQUIRE(rep_un.converged);
    const double fn = q_norm(*rep_un.control);
    REQUIRE(fn > 0.0);

    ControlProblem ball = un;
    ball.set = AdmissibleSet::ball(0.5 * fn);
    OptimalityReport rep = projected_gradient(ball, f0, {.max_iters = 400, .tol = 1e-9});
    REQUIRE(rep.converged);
    CHECK(std::abs(q_norm(*rep.control) - ball.set.radius) <= 1e-10 * ball.set.radius);
    CHECK(rep.history.back().vi_residual <= 1e-9);
}

TEST_CASE("check_optimality: zero at a constructed stationary point, positive off it") {
    auto ms = ModeSet::create(2, 8);
    const int m = 8;
    std::mt19937_64 rng(17);
    Trajectory f_hat = random_trajectory(ms, 0.0, 1.0, m, rng);
    Trajectory u = random_trajectory(ms, 0.0, 1.0, m, rng);
    const double gamma_f = 0.7;
    Trajectory lam = f_hat;
    lam *= -gamma_f;  // lambda = -gamma_f f_hat exactly
    OptimalityResidual r =
        check_optimality(f_hat, u, lam, AdmissibleSet::unconstrained(), gamma_f, 8);
    CHECK(r.probe_deficit == 0.0);
    CHECK(r.fixed_point_gap <= 1e-13 * q_norm(f_hat));

    Trajectory f_bad = 1.1 * f_hat;
    OptimalityResidual rb =
        check_optimality(f_bad, u, lam, AdmissibleSet::unconstrained(), gamma_f, 8);
    CHECK(rb.total() > 0.0);
}

TEST_CASE("check_optimality: converged optimum satisfies the fixed-point gap") {
    auto ms = ModeSet::create(2, 8);
    PhysicalParams p{0.5, 0.1, 0.5};
    ControlProblem prob = tracking_problem(ms, p, 16, CostKind::DaTracking,
                                           AdmissibleSet::unconstrained(),
                                           CostWeights{1.0, 0.1, 0.5}, TimeScheme::ImexEuler);
    Trajectory f0 = Trajectory::zero(0.0, p.t_final, 16, ms);
    const double tol = 1e-9;
    OptimalityReport rep = projected_gradient(prob, f0, {.max_iters = 200, .tol = tol});
    REQUIRE(rep.converged);
    OptimalityResidual r = check_optimality(*rep.control, *rep.state, *rep.adjoint, prob.set,
                                            prob.weights.gamma_f, 16);
    CHECK(r.total() <= 10 * tol);
}

TEST_CASE("projected_gradient: stagnation carries the report so far") {
    auto ms = ModeSet::create(2, 8);
    PhysicalParams p{0.5, 0.1, 0.5};
    ControlProblem prob = tracking_problem(ms, p, 8, CostKind::DaTracking,
                                           AdmissibleSet::unconstrained(),
                                           CostWeights{1e6, 0.0, 1e-6}, TimeScheme::ImexEuler);
    Trajectory f0 = Trajectory::zero(0.0, p.t_final, 8, ms);
    ProjectedGradientOptions opts;
    opts.max_iters = 50;
    opts.tol = 1e-14;
    opts.max_halvings = 0;  // no backtracking allowed: the unit step must fail
    try {
        projected_gradient(prob, f0, opts);
        FAIL("expected StagnationError");
    } catch (const StagnationError& e) {
        REQUIRE(e.report != nullptr);
        CHECK(e.report->history.size() >= 1);
        CHECK(e.report->control.has_value());
    }
}

TEST_CASE("weight validation rejects degenerate configurations") {
    CHECK_THROWS_AS(validate_weights(CostWeights{0, 0, 0}, AdmissibleSet::unconstrained()),
                    DimensionError);
    CHECK_THROWS_AS(validate_weights(CostWeights{1, 0, 0}, AdmissibleSet::unconstrained()),
                    DimensionError);  // gamma_f = 0 needs a bounded set
    CHECK_NOTHROW(validate_weights(CostWeights{1, 0, 0}, AdmissibleSet::ball(1.0)));
    CHECK_THROWS_AS(validate_weights(CostWeights{-1, 0, 1}, AdmissibleSet::unconstrained()),
                    DimensionError);
    CHECK_THROWS_AS(validate_weights(CostWeights{1, 0, 1}, AdmissibleSet::ball(0.0)),
                    DimensionError);
}
