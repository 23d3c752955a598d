#include "nsalpha/alpha_sweep.hpp"

#include <atomic>
#include <cmath>
#include <thread>

namespace nsalpha {

void SweepConfig::validate() const {
    base.validate();
    if (alphas.empty()) throw DimensionError("SweepConfig: empty alpha list");
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        if (alphas[i] < 0) throw DimensionError("SweepConfig: alphas must be >= 0");
        if (i + 1 < alphas.size() && !(alphas[i] > alphas[i + 1]))
            throw DimensionError("SweepConfig: alphas must be strictly decreasing");
    }
}

namespace {

struct RowSolution {
    SweepRow row;
    std::optional<Trajectory> u, lam, f;
};

RowSolution solve_row(const SweepConfig& cfg, double alpha) {
    ControlProblem prob = cfg.base;
    prob.physics.alpha = alpha;
    Trajectory f0 = Trajectory::zero(prob.u_d.t0(), prob.u_d.t_final(), prob.m_steps(),
                                     prob.modes_ptr());
    RowSolution out;
    out.row.alpha = alpha;
    try {
        OptimalityReport rep = projected_gradient(prob, f0, cfg.optimizer);
        out.row.cost = rep.cost;
        out.row.iters = rep.iterations;
        out.row.converged = rep.converged;
        out.row.ee7 = rep.adjoint_monitors;
        out.u = std::move(rep.state);
        out.lam = std::move(rep.adjoint);
        out.f = std::move(rep.control);
    } catch (const StagnationError& e) {
        // flagged, sweep continues
        out.row.cost = e.report->cost;
        out.row.iters = e.report->iterations;
        out.row.converged = false;
        out.row.ee7 = e.report->adjoint_monitors;
        out.u = e.report->state;
        out.lam = e.report->adjoint;
        out.f = e.report->control;
    } catch (const BlowUpError&) {
        out.row.converged = false;
    }
    return out;
}

double gap_l2v(const Trajectory& a, const Trajectory& b) {
    const int m = a.m_steps();
    double s = 0.0;
    for (int j = 0; j <= m; ++j) {
        const double n = v_norm(a.at(j) - b.at(j));
        s += trapezoid_weight(j, m) * n * n;
    }
    return std::sqrt(s * a.dt());
}

double gap_linf_l2(const Trajectory& a, const Trajectory& b) {
    double s = 0.0;
    for (int j = 0; j <= a.m_steps(); ++j) s = std::max(s, l2_norm(a.at(j) - b.at(j)));
    return s;
}

}  // namespace

SweepResult run_sweep(const SweepConfig& cfg) {
    cfg.validate();
    std::vector<double> alphas = cfg.alphas;
    if (alphas.back() != 0.0) alphas.push_back(0.0);

    // the alpha = 0 baseline first; remaining rows are independent
    RowSolution base = solve_row(cfg, 0.0);

    std::vector<RowSolution> rows(alphas.size() - 1);
    const auto solve_at = [&](std::size_t i) { rows[i] = solve_row(cfg, alphas[i]); };
    if (cfg.threads > 1 && rows.size() > 1) {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        const unsigned nt = std::min<unsigned>(cfg.threads, static_cast<unsigned>(rows.size()));
        for (unsigned t = 0; t < nt; ++t)
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < rows.size(); i = next.fetch_add(1))
                    solve_at(i);
            });
        for (auto& th : pool) th.join();
    } else {
        for (std::size_t i = 0; i < rows.size(); ++i) solve_at(i);
    }

    SweepResult result;
    for (auto& rs : rows) {
        if (rs.u && base.u) {
            rs.row.gap_state_l2v = gap_l2v(*rs.u, *base.u);
            rs.row.gap_state_linf_l2 = gap_linf_l2(*rs.u, *base.u);
        }
        if (rs.lam && base.lam) {
            rs.row.gap_adj_l2v = gap_l2v(*rs.lam, *base.lam);
            rs.row.gap_adj_l2l2 = q_norm(*rs.lam - *base.lam);
        }
        result.rows.push_back(rs.row);
    }
    result.rows.push_back(base.row);  // gaps identically zero by construction

    if (base.u && base.lam) {
        AdjointSource src{cfg.base.kind, cfg.base.u_d, cfg.base.weights.gamma_u};
        PhysicalParams p0 = cfg.base.physics;
        p0.alpha = 0.0;
        result.limit_residual = limit_adjoint_residual(*base.u, *base.lam, src, p0);
        const int order = cfg.base.scheme == TimeScheme::ImexEuler ? 1 : 2;
        result.truncation_estimate = truncation_estimate(*base.lam, order);
        result.state0 = std::move(base.u);
        result.adjoint0 = std::move(base.lam);
        result.control0 = std::move(base.f);
    }
    return result;
}

double limit_adjoint_residual(const Trajectory& u_hat0, const Trajectory& lambda0,
                              const AdjointSource& src, const PhysicalParams& p) {
    require_same_mesh(u_hat0, lambda0, "limit_adjoint_residual");
    const int m = lambda0.m_steps();
    const double dt = lambda0.dt();
    double worst = 0.0;
    for (int j = 1; j < m; ++j) {
        SolenoidalField dot = lambda0.at(j + 1) - lambda0.at(j - 1);
        dot *= 1.0 / (2.0 * dt);
        SolenoidalField rhs = p.nu * stokes_apply(lambda0.at(j));
        rhs += adjoint_B_star(u_hat0.at(j), lambda0.at(j), 0.0);
        if (src.gamma_u != 0.0) rhs -= adjoint_rhs(u_hat0.at(j), src, j);
        worst = std::max(worst, l2_norm(dot - rhs));
    }
    return worst;
}

double truncation_estimate(const Trajectory& lambda, int scheme_order) {
    const int m = lambda.m_steps();
    const double dt = lambda.dt();
    double worst = 0.0;
    if (scheme_order <= 1) {
        // centered-difference residual of a first-order solution is
        // ~ dt ||lambda''|| / 2; estimate lambda'' by second differences
        for (int j = 1; j < m; ++j) {
            SolenoidalField d2 = lambda.at(j + 1) - 2.0 * lambda.at(j) + lambda.at(j - 1);
            worst = std::max(worst, l2_norm(d2) / (2.0 * dt));
        }
    } else {
        // second-order solution: residual ~ dt^2 ||lambda'''|| / 6
        for (int j = 2; j + 2 <= m; ++j) {
            SolenoidalField d3 = lambda.at(j + 2) - 2.0 * lambda.at(j + 1) +
                                 2.0 * lambda.at(j - 1) - lambda.at(j - 2);
            worst = std::max(worst, l2_norm(d3) / (12.0 * dt));
        }
    }
    return worst;
}

}  // namespace nsalpha
