#pragma once

#include "nsalpha/state_solver.hpp"

namespace nsalpha {

// Which running tracking term drives the adjoint: the D(A)-norm cost J or
// the L^4 tracking cost J0.
enum class CostKind { DaTracking, L4Tracking };

struct AdjointSource {
    CostKind kind;
    Trajectory u_d;  // target, sampled on the state time grid
    double gamma_u;
};

struct TerminalCondition {
    double gamma_T;
    SolenoidalField u_T;
};

// Uniform-in-alpha monitors of the adjoint solution.
struct Ee7Monitors {
    double alpha = 0.0;
    double sup_l2 = 0.0;             // ||lambda||_{Linf(L2)}
    double sup_alpha2_grad_l2 = 0.0; // alpha^2 ||grad lambda||_{Linf(L2)}
    double l2l2_grad = 0.0;          // ||grad lambda||_{L2(L2)}
    double l2l2_alpha2_a = 0.0;      // alpha^2 ||A lambda||_{L2(L2)}
};

struct AdjointSolution {
    Trajectory lambda;
    Ee7Monitors monitors;
};

// Frechet derivative of B at u in direction w:  B'(u,u)w = B(u,w) + B(w,u).
SolenoidalField linearized_B(const SolenoidalField& u, const SolenoidalField& w, double alpha);

// Transpose of linearized_B in the discrete L2 inner product:
//   (adjoint_B_star(u, lambda), w) = (lambda, linearized_B(u, w))
// for every solenoidal dealiased w.  Evaluated pseudospectrally as
//   P[ -H(u.grad lambda) + a^2 Lap . -> see source -> ]
// with the Laplacian applied to both quadratic a^2 advection terms; the
// transpose identity holds to roundoff because the 2/3-rule makes every
// quadratic product exact on the retained modes.
SolenoidalField adjoint_B_star(const SolenoidalField& u, const SolenoidalField& lambda,
                               double alpha);

// Riesz representative of the running-cost derivative at one time node.
//   DaTracking:  gamma_u |k|^4 (u - u_d)
//   L4Tracking:  4 gamma_u ||g||_{L4}^4 P[|g|^2 g],  g = u - u_d
// (the analytic derivative of (gamma_u/2)||g||_{L4}^8; both are exact
// derivatives of the discrete cost in eval_cost).
SolenoidalField adjoint_rhs(const SolenoidalField& u_at_t, const AdjointSource& src, int node);

// Backward integration of the adjoint system
//   H lambda_t = nu H A lambda + B'*(u)lambda - s(t),
//   H lambda(T) = gamma_T (u(T) - u_T).
// With TimeScheme::ImexCnHeun this discretizes the continuous adjoint at
// second order.  With TimeScheme::ImexEuler it is the exact discrete
// transpose of the forward ImexEuler step plus trapezoid cost quadrature,
// returned resampled at the time nodes, so that
// reduced_gradient = gamma_f f + lambda is the exact gradient of the
// discrete cost (to roundoff).
AdjointSolution integrate_adjoint(const Trajectory& u_hat, const AdjointSource& src,
                                  const TerminalCondition& tc, const PhysicalParams& p,
                                  TimeScheme scheme = TimeScheme::ImexCnHeun);

}  // namespace nsalpha
