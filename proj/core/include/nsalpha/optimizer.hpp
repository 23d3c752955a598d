#pragma once

#include <cstdint>
#include <memory>
#include <optional>

#include "nsalpha/adjoint_solver.hpp"

namespace nsalpha {

struct CostWeights {
    double gamma_u = 0.0;
    double gamma_T = 0.0;
    double gamma_f = 0.0;
};

// Nonempty, closed, convex admissible set in the discrete L2(Q) control
// space: everything, or the centered ball of radius R in the q_norm.
struct AdmissibleSet {
    enum class Kind { Unconstrained, L2Ball };
    Kind kind = Kind::Unconstrained;
    double radius = 0.0;

    static AdmissibleSet unconstrained() { return {}; }
    static AdmissibleSet ball(double r) { return {Kind::L2Ball, r}; }
};

void validate_weights(const CostWeights& w, const AdmissibleSet& set);

// The full discrete control problem.  Controls are solenoidal spectral
// trajectories: the state equation only sees P f, so non-solenoidal
// components are invisible to the tracking terms and only inflate the
// gamma_f cost; restricting to solenoidal controls loses no optimality.
struct ControlProblem {
    PhysicalParams physics;
    CostWeights weights;
    CostKind kind = CostKind::DaTracking;
    AdmissibleSet set;
    SolenoidalField u0;
    Trajectory u_d;
    SolenoidalField u_T;
    TimeScheme scheme = TimeScheme::ImexCnHeun;

    int m_steps() const { return u_d.m_steps(); }
    const ModeSetPtr& modes_ptr() const { return u_d.modes_ptr(); }
    void validate() const;
};

double eval_cost(const Trajectory& u, const Trajectory& f, const Trajectory& u_d,
                 const SolenoidalField& u_T, const CostWeights& w, CostKind kind);

// Riesz representative of the reduced-cost derivative in the discrete
// L2(Q) inner product: g = gamma_f f + lambda, per time sample.
Trajectory reduced_gradient(const Trajectory& f, const Trajectory& lambda, double gamma_f);

// Exact projection onto the admissible set (identity, or ball scaling).
Trajectory project_admissible(const AdmissibleSet& set, const Trajectory& g);

struct IterationRow {
    int iter;
    double cost;
    double step;         // accepted step size (0 on the initial row)
    double grad_norm;    // ||g||_Q
    double vi_residual;  // ||f - Proj(f - g)||_Q  (s0 = 1)
};

struct OptimalityReport {
    double cost = 0.0;
    std::vector<IterationRow> history;
    bool converged = false;
    int iterations = 0;
    std::optional<Trajectory> control, state, adjoint;
    EnergyLedger state_ledger;
    Ee7Monitors adjoint_monitors;
};

struct StagnationError : std::runtime_error {
    StagnationError(const std::string& what, std::shared_ptr<OptimalityReport> r)
        : std::runtime_error(what), report(std::move(r)) {}
    std::shared_ptr<OptimalityReport> report;
};

struct ProjectedGradientOptions {
    int max_iters = 500;
    double tol = 1e-8;
    double armijo_c1 = 1e-4;
    int max_halvings = 40;
};

// Projected gradient descent with Armijo backtracking on the reduced cost.
// Stops when the variational-inequality residual ||f - Proj(f - g)||_Q
// drops below tol.  Throws StagnationError when the line search fails.
OptimalityReport projected_gradient(const ControlProblem& problem, const Trajectory& f_init,
                                    const ProjectedGradientOptions& opts = {});

struct OptimalityResidual {
    double probe_deficit = 0.0;    // max(0, -min over probes of (g, f - fhat)_Q)
    double fixed_point_gap = 0.0;  // ||fhat - Proj(-lambda/gamma_f)||_Q, gamma_f > 0
    double total() const { return probe_deficit + fixed_point_gap; }
};

OptimalityResidual check_optimality(const Trajectory& f_hat, const Trajectory& u,
                                    const Trajectory& lambda, const AdmissibleSet& set,
                                    double gamma_f, int n_probe, std::uint64_t seed = 1234);

}  // namespace nsalpha
