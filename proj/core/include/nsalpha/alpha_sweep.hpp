#pragma once

#include "nsalpha/optimizer.hpp"

namespace nsalpha {

// Sweep of the full optimality system over a decreasing alpha sequence,
// ending at alpha = 0 (the Navier-Stokes row every other row is compared
// against; the comparison target is this library's own alpha = 0 solve so
// that the discretization is identical and only alpha varies).
struct SweepConfig {
    std::vector<double> alphas;  // strictly decreasing, positive; terminal 0 appended if absent
    ControlProblem base;         // base.physics.alpha is overridden per row
    ProjectedGradientOptions optimizer;
    unsigned threads = 1;

    void validate() const;
};

struct SweepRow {
    double alpha = 0.0;
    double cost = 0.0;
    double gap_state_l2v = 0.0;      // ||u^a - u^0|| in discrete L2(V)
    double gap_state_linf_l2 = 0.0;  // ... in Linf(L2)
    double gap_adj_l2v = 0.0;        // ||lam^a - lam^0|| in discrete L2(V)
    double gap_adj_l2l2 = 0.0;       // ... in L2(L2)
    Ee7Monitors ee7;
    int iters = 0;
    bool converged = false;
};

struct SweepResult {
    std::vector<SweepRow> rows;            // in cfg.alphas order, 0 last
    double limit_residual = 0.0;           // adj-limit residual of the alpha = 0 pair
    double truncation_estimate = 0.0;      // scale the residual is judged against
    std::optional<Trajectory> state0, adjoint0, control0;
};

SweepResult run_sweep(const SweepConfig& cfg);

// Max over interior nodes of the L2 residual of the limit (alpha = 0)
// adjoint system along (u0_hat, lambda0):
//   r_j = (lam_{j+1} - lam_{j-1})/(2 dt) - [nu A lam_j + B'*(u_j; 0) lam_j - s_j].
double limit_adjoint_residual(const Trajectory& u_hat0, const Trajectory& lambda0,
                              const AdjointSource& src, const PhysicalParams& p);

// Finite-difference estimate of the local truncation level of a trajectory
// produced by a scheme of the given order (1 or 2), for judging the
// centered-difference residual above.
double truncation_estimate(const Trajectory& lambda, int scheme_order);

}  // namespace nsalpha
