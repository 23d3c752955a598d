#include "nsalpha/optimizer.hpp"

#include <algorithm>
#include <cmath>

#include "nsalpha/random_fields.hpp"

namespace nsalpha {

void validate_weights(const CostWeights& w, const AdmissibleSet& set) {
    if (!(w.gamma_u >= 0) || !(w.gamma_T >= 0) || !(w.gamma_f >= 0))
        throw DimensionError("CostWeights: weights must be non-negative");
    if (w.gamma_u == 0 && w.gamma_T == 0 && w.gamma_f == 0)
        throw DimensionError("CostWeights: weights must not all be zero");
    if (set.kind == AdmissibleSet::Kind::Unconstrained && !(w.gamma_f > 0))
        throw DimensionError("CostWeights: gamma_f must be > 0 with an unconstrained set");
    if (set.kind == AdmissibleSet::Kind::L2Ball && !(set.radius > 0))
        throw DimensionError("AdmissibleSet: ball radius must be > 0");
}

void ControlProblem::validate() const {
    physics.validate();
    validate_weights(weights, set);
    require_compatible(u0.modes(), u_d.modes(), "ControlProblem");
    require_compatible(u_T.modes(), u_d.modes(), "ControlProblem");
    const double span = u_d.t_final() - u_d.t0();
    if (std::abs(span - physics.t_final) > 1e-12 * std::max(1.0, physics.t_final))
        throw DimensionError("ControlProblem: target trajectory span != t_final");
}

double eval_cost(const Trajectory& u, const Trajectory& f, const Trajectory& u_d,
                 const SolenoidalField& u_T, const CostWeights& w, CostKind kind) {
    require_same_mesh(u, f, "eval_cost");
    require_same_mesh(u, u_d, "eval_cost");
    require_compatible(u.modes(), u_T.modes(), "eval_cost");

    const int m = u.m_steps();
    const double dt = u.dt();
    double track = 0.0, control = 0.0;
    for (int j = 0; j <= m; ++j) {
        const double cj = trapezoid_weight(j, m);
        if (w.gamma_u != 0.0) {
            SolenoidalField g = u.at(j) - u_d.at(j);
            if (kind == CostKind::DaTracking) {
                const double n = da_norm(g);
                track += cj * n * n;
            } else {
                const double n4 = l4_norm(g);
                track += cj * std::pow(n4, 8.0);
            }
        }
        const double nf = l2_norm(f.at(j));
        control += cj * nf * nf;
    }
    double terminal = 0.0;
    if (w.gamma_T != 0.0) {
        const double n = l2_norm(u.at(m) - u_T);
        terminal = n * n;
    }
    return 0.5 * w.gamma_u * dt * track + 0.5 * w.gamma_T * terminal +
           0.5 * w.gamma_f * dt * control;
}

Trajectory reduced_gradient(const Trajectory& f, const Trajectory& lambda, double gamma_f) {
    require_same_mesh(f, lambda, "reduced_gradient");
    Trajectory g = lambda;
    g.add_scaled(gamma_f, f);
    return g;
}

Trajectory project_admissible(const AdmissibleSet& set, const Trajectory& g) {
    if (set.kind == AdmissibleSet::Kind::Unconstrained) return g;
    const double n = q_norm(g);
    if (n <= set.radius) return g;
    Trajectory out = g;
    out *= set.radius / n;
    return out;
}

namespace {

struct Evaluation {
    StateSolution sol;
    AdjointSolution adj;
    double cost;
};

Evaluation evaluate(const ControlProblem& p, const Trajectory& f) {
    StateSolution sol = integrate_state(p.u0, f, p.physics, p.m_steps(), p.scheme);
    AdjointSource src{p.kind, p.u_d, p.weights.gamma_u};
    TerminalCondition tc{p.weights.gamma_T, p.u_T};
    AdjointSolution adj = integrate_adjoint(sol.u, src, tc, p.physics, p.scheme);
    const double J = eval_cost(sol.u, f, p.u_d, p.u_T, p.weights, p.kind);
    return Evaluation{std::move(sol), std::move(adj), J};
}

double cost_only(const ControlProblem& p, const Trajectory& f, StateSolution& sol_out) {
    sol_out = integrate_state(p.u0, f, p.physics, p.m_steps(), p.scheme);
    return eval_cost(sol_out.u, f, p.u_d, p.u_T, p.weights, p.kind);
}

}  // namespace

OptimalityReport projected_gradient(const ControlProblem& problem, const Trajectory& f_init,
                                    const ProjectedGradientOptions& opts) {
    problem.validate();
    require_compatible(f_init.modes(), problem.u_d.modes(), "projected_gradient");

    auto report = std::make_shared<OptimalityReport>();
    Trajectory f = project_admissible(problem.set, f_init);
    Evaluation ev = evaluate(problem, f);

    double s_start = 1.0;    // spec default s0; later warmed by Barzilai-Borwein
    double last_step = 0.0;  // step size that produced the current iterate
    std::optional<Trajectory> f_prev, g_prev;
    for (int iter = 0; iter <= opts.max_iters; ++iter) {
        Trajectory g = reduced_gradient(f, ev.adj.lambda, problem.weights.gamma_f);
        if (f_prev) {
            // BB1 step as the line-search warm start; Armijo still guards
            // every accepted step, so descent stays monotone
            Trajectory df = f - *f_prev;
            Trajectory dg = g - *g_prev;
            const double num = q_inner(df, df);
            const double den = q_inner(df, dg);
            if (den > 0 && num > 0)
                s_start = std::clamp(num / den, 1e-6, 1e6);
        }
        Trajectory vi_point = f;
        vi_point.add_scaled(-1.0, g);
        const double vi = q_norm(f - project_admissible(problem.set, vi_point));
        const double gn = q_norm(g);
        report->history.push_back({iter, ev.cost, last_step, gn, vi});
        report->cost = ev.cost;
        report->iterations = iter;

        if (vi <= opts.tol) {
            report->converged = true;
            break;
        }
        if (iter == opts.max_iters) break;

        // Armijo backtracking along the projected-gradient arc
        double s = s_start;
        bool accepted = false;
        Trajectory f_trial = f;
        StateSolution sol_trial{ev.sol};
        double j_trial = ev.cost;
        for (int h = 0; h <= opts.max_halvings; ++h) {
            Trajectory probe = f;
            probe.add_scaled(-s, g);
            f_trial = project_admissible(problem.set, probe);
            const double move = q_norm(f - f_trial);
            if (move == 0.0) break;  // projected step vanished; treat as stagnation
            bool blew_up = false;
            try {
                j_trial = cost_only(problem, f_trial, sol_trial);
            } catch (const BlowUpError&) {
                blew_up = true;  // overlong trial step; halve and retry
            }
            if (!blew_up && j_trial <= ev.cost - opts.armijo_c1 * (move * move) / s) {
                accepted = true;
                break;
            }
            s *= 0.5;
        }
        if (!accepted) {
            report->control = f;
            report->state = ev.sol.u;
            report->adjoint = ev.adj.lambda;
            report->state_ledger = ev.sol.ledger;
            report->adjoint_monitors = ev.adj.monitors;
            throw StagnationError("projected_gradient: line search stalled after " +
                                      std::to_string(opts.max_halvings) + " halvings",
                                  report);
        }

        f_prev = std::move(f);
        g_prev = std::move(g);
        f = std::move(f_trial);
        ev.sol = std::move(sol_trial);
        ev.cost = j_trial;
        AdjointSource src{problem.kind, problem.u_d, problem.weights.gamma_u};
        TerminalCondition tc{problem.weights.gamma_T, problem.u_T};
        ev.adj = integrate_adjoint(ev.sol.u, src, tc, problem.physics, problem.scheme);
        last_step = s;
        s_start = std::min(2.0 * s, 1e6);
    }

    report->control = f;
    report->state = ev.sol.u;
    report->adjoint = ev.adj.lambda;
    report->state_ledger = ev.sol.ledger;
    report->adjoint_monitors = ev.adj.monitors;
    OptimalityReport out = *report;
    return out;
}

OptimalityResidual check_optimality(const Trajectory& f_hat, const Trajectory& u,
                                    const Trajectory& lambda, const AdmissibleSet& set,
                                    double gamma_f, int n_probe, std::uint64_t seed) {
    require_same_mesh(f_hat, lambda, "check_optimality");
    require_same_mesh(f_hat, u, "check_optimality");

    Trajectory g = reduced_gradient(f_hat, lambda, gamma_f);
    OptimalityResidual res;

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double fn = q_norm(f_hat);
    double worst = 0.0;
    for (int i = 0; i < n_probe; ++i) {
        Trajectory probe = random_trajectory(f_hat.modes_ptr(), f_hat.t0(), f_hat.t_final(),
                                             f_hat.m_steps(), rng);
        if (set.kind == AdmissibleSet::Kind::Unconstrained) {
            const double scale = std::max(1.0, fn);
            const double pn = q_norm(probe);
            if (pn > 0) probe *= scale / pn;
            probe += f_hat;
        } else {
            const double pn = q_norm(probe);
            const double target = unif(rng) * set.radius;
            if (pn > 0) probe *= target / pn;
        }
        worst = std::min(worst, q_inner(g, probe - f_hat));
    }
    res.probe_deficit = std::max(0.0, -worst);

    if (gamma_f > 0) {
        Trajectory target = lambda;
        target *= -1.0 / gamma_f;
        res.fixed_point_gap = q_norm(f_hat - project_admissible(set, target));
    }
    return res;
}

}  // namespace nsalpha
