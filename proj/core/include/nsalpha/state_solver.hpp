#pragma once

#include "nsalpha/trajectory.hpp"

namespace nsalpha {

struct PhysicalParams {
    double nu;       // kinematic viscosity, > 0
    double alpha;    // regularization length, >= 0; 0 selects Navier-Stokes
    double t_final;  // horizon, > 0

    void validate() const {
        if (!(nu > 0)) throw DimensionError("PhysicalParams: nu must be > 0");
        if (!(alpha >= 0)) throw DimensionError("PhysicalParams: alpha must be >= 0");
        if (!(t_final > 0)) throw DimensionError("PhysicalParams: t_final must be > 0");
    }
};

enum class TimeScheme {
    ImexEuler,   // first order; its discrete adjoint is the same recursion
    ImexCnHeun,  // second order: Crank-Nicolson linear part, Heun on B and f
};

// Per-node energy bookkeeping.  Row j holds the instantaneous quadratic
// quantities at t_j plus, for j >= 1, midpoint dissipation/work and the
// energy-identity residual of step j-1 -> j.  The a-priori bound columns
// accumulate the trapezoid-integrated inequality with the torus Poincare
// constant (min |k|^2 = 1), so bound_margin >= 0 is the monitored check.
struct EnergyLedger {
    struct Row {
        int step;
        double t;
        double kinetic;      // ||u||^2
        double gradient;     // alpha^2 ||grad u||^2
        double dissipation;  // nu ||grad u||^2 + nu alpha^2 ||A u||^2 at midpoint
        double work;         // (f, u) at midpoint
        double residual;     // energy-identity residual of the step ending here
        double bound_lhs;    // left side of the a-priori inequality at t_j
        double bound_rhs;    // right side of the a-priori inequality at t_j
    };
    std::vector<Row> rows;

    double max_residual() const;
    double bound_margin() const;  // min over nodes of (rhs - lhs)
    double sup_v_norm = 0.0;      // ||u||_{Linf(V)}
    double l2_da_norm = 0.0;      // ||u||_{L2(D(A))}
    double cfl_advisory = 0.0;    // max |u| * dt * n
};

struct StateSolution {
    Trajectory u;
    EnergyLedger ledger;
};

// NS-alpha nonlinear operator
//   B(u,v) = P[(u.grad)(H v) + (grad u)^T (H v)],  H = I - alpha^2 Lap,
// with products formed on the dealiased grid.  Discretely skew-symmetric:
// (B(u,v), u) = 0 to roundoff.
SolenoidalField nonlinear_B(const SolenoidalField& u, const SolenoidalField& v, double alpha);

// Forward integration of  H u_t + nu H A u + B(u,u) = f,  u(t0) = u0.
// f is sampled at the same nodes as u; each step uses the average of its
// endpoint samples.  Throws BlowUpError when the solution leaves
// 1e8 x initial scale or turns non-finite.
StateSolution integrate_state(const SolenoidalField& u0, const Trajectory& f,
                              const PhysicalParams& p, int m_steps,
                              TimeScheme scheme = TimeScheme::ImexCnHeun);

// Energy-identity residual of one step, midpoint quadrature:
//   | [E(u1)-E(u0)]/(2 dt) + nu||grad um||^2 + nu a^2||A um||^2 - (fm, um) |
// with E = ||u||^2 + alpha^2||grad u||^2 and um, fm the endpoint averages.
double energy_residual(const SolenoidalField& u_prev, const SolenoidalField& u_next,
                       const SolenoidalField& f_prev, const SolenoidalField& f_next,
                       double dt, const PhysicalParams& p);

}  // namespace nsalpha
