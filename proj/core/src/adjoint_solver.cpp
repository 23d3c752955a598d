#include "nsalpha/adjoint_solver.hpp"

#include <cmath>

#include "nsalpha/transform.hpp"

namespace nsalpha {

SolenoidalField linearized_B(const SolenoidalField& u, const SolenoidalField& w, double alpha) {
    return nonlinear_B(u, w, alpha) + nonlinear_B(w, u, alpha);
}

SolenoidalField adjoint_B_star(const SolenoidalField& u, const SolenoidalField& lambda,
                               double alpha) {
    require_compatible(u.modes(), lambda.modes(), "adjoint_B_star");
    const ModeSet& ms = u.modes();
    const auto modes = u.modes_ptr();
    const int d = ms.dim();
    const double a2 = alpha * alpha;

    const GridField ug = to_physical(u);
    const GridField lg = to_physical(lambda);
    std::vector<GridField> dl, dung;  // dl[a] = d lambda / d x_a, dung[a] = d u / d x_a
    dl.reserve(d);
    dung.reserve(d);
    for (int a = 0; a < d; ++a) {
        dl.push_back(to_physical(derivative(lambda.coeffs(), a)));
        dung.push_back(to_physical(derivative(u.coeffs(), a)));
    }
    const GridField hug = to_physical(helmholtz_apply(u.coeffs(), alpha));  // H u
    // grad(Lap u) on the grid
    SpectralField lap_u = u.coeffs();
    for (int c = 0; c < d; ++c) {
        auto span = lap_u.component(c);
        for (std::size_t i = 0; i < ms.size(); ++i) span[i] *= -ms.k2(i);
    }
    std::vector<GridField> dlap;
    dlap.reserve(d);
    for (int a = 0; a < d; ++a) dlap.push_back(to_physical(derivative(lap_u, a)));

    // c1 = u.grad lambda          c2 = lambda.grad u
    // c3 = (grad lambda)^T (H u)  c4 = lambda.grad(Lap u)
    GridField c1(d, ms.n()), c2(d, ms.n()), c3(d, ms.n()), c4(d, ms.n());
    for (std::size_t p = 0; p < c1.points; ++p) {
        for (int i = 0; i < d; ++i) {
            double s1 = 0, s2 = 0, s3 = 0, s4 = 0;
            for (int a = 0; a < d; ++a) {
                s1 += ug.at(a, p) * dl[a].at(i, p);
                s2 += lg.at(a, p) * dung[a].at(i, p);
                s3 += hug.at(a, p) * dl[i].at(a, p);
                s4 += lg.at(a, p) * dlap[a].at(i, p);
            }
            c1.at(i, p) = s1;
            c2.at(i, p) = s2;
            c3.at(i, p) = s3;
            c4.at(i, p) = s4;
        }
    }

    // B'* lambda = P[ -H(u.grad lambda) + a^2 |k|^2 (lambda.grad u)
    //               - (grad lambda)^T H u + a^2 lambda.grad(Lap u) ]
    SpectralField s1 = to_spectral(c1, modes);
    SpectralField s2 = to_spectral(c2, modes);
    const SpectralField s3 = to_spectral(c3, modes);
    const SpectralField s4 = to_spectral(c4, modes);
    for (int c = 0; c < d; ++c) {
        auto a1 = s1.component(c);
        auto b2 = s2.component(c);
        auto b3 = s3.component(c);
        auto b4 = s4.component(c);
        for (std::size_t i = 0; i < ms.size(); ++i) {
            const double k2 = ms.k2(i);
            a1[i] = -(1.0 + a2 * k2) * a1[i] + a2 * k2 * b2[i] - b3[i] + a2 * b4[i];
        }
    }
    return leray_project(s1);
}

SolenoidalField adjoint_rhs(const SolenoidalField& u_at_t, const AdjointSource& src, int node) {
    require_compatible(u_at_t.modes(), src.u_d.modes(), "adjoint_rhs");
    SolenoidalField g = u_at_t - src.u_d.at(node);
    if (src.kind == CostKind::DaTracking) {
        const double gu = src.gamma_u;
        return g.mapped([gu](double k2) { return gu * k2 * k2; });
    }
    // L4 tracking: 4 gamma_u q P[|g|^2 g] with q = (1/N) sum |g|^4
    const ModeSet& ms = g.modes();
    GridField gg = to_physical(g);
    GridField cubic(ms.dim(), ms.n());
    double q = 0.0;
    for (std::size_t p = 0; p < gg.points; ++p) {
        double m2 = 0.0;
        for (int c = 0; c < ms.dim(); ++c) m2 += gg.at(c, p) * gg.at(c, p);
        q += m2 * m2;
        for (int c = 0; c < ms.dim(); ++c) cubic.at(c, p) = m2 * gg.at(c, p);
    }
    q /= static_cast<double>(gg.points);
    SolenoidalField out = leray_project(to_spectral(cubic, g.modes_ptr()));
    out *= 4.0 * src.gamma_u * q;
    return out;
}

namespace {

Ee7Monitors collect_monitors(const Trajectory& lam, double alpha) {
    Ee7Monitors m;
    m.alpha = alpha;
    const int M = lam.m_steps();
    double acc_grad = 0.0, acc_a = 0.0;
    for (int j = 0; j <= M; ++j) {
        const double l2 = l2_norm(lam.at(j));
        const double gv = v_norm(lam.at(j));
        const double ga = da_norm(lam.at(j));
        m.sup_l2 = std::max(m.sup_l2, l2);
        m.sup_alpha2_grad_l2 = std::max(m.sup_alpha2_grad_l2, alpha * alpha * gv);
        acc_grad += trapezoid_weight(j, M) * gv * gv;
        acc_a += trapezoid_weight(j, M) * ga * ga;
    }
    m.l2l2_grad = std::sqrt(acc_grad * lam.dt());
    m.l2l2_alpha2_a = alpha * alpha * std::sqrt(acc_a * lam.dt());
    return m;
}

void check_finite(const SolenoidalField& lam, int step) {
    if (!lam.finite())
        throw BlowUpError("integrate_adjoint: non-finite adjoint at step " + std::to_string(step),
                          step);
}

}  // namespace

AdjointSolution integrate_adjoint(const Trajectory& u_hat, const AdjointSource& src,
                                  const TerminalCondition& tc, const PhysicalParams& p,
                                  TimeScheme scheme) {
    p.validate();
    require_same_mesh(u_hat, src.u_d, "integrate_adjoint");
    require_compatible(u_hat.modes(), tc.u_T.modes(), "integrate_adjoint");

    const int M = u_hat.m_steps();
    const double dt = u_hat.dt();
    const double alpha = p.alpha;
    const double a2 = alpha * alpha;
    const auto inv_helm = [a2](double k2) { return 1.0 / (1.0 + a2 * k2); };
    const double dt_nu = dt * p.nu;

    std::vector<SolenoidalField> lam(static_cast<std::size_t>(M) + 1,
                                     SolenoidalField::zero(u_hat.modes_ptr()));

    if (scheme == TimeScheme::ImexEuler) {
        // exact discrete transpose of the forward ImexEuler recursion;
        // multipliers mu[m], m = M..1, then node resampling
        const auto euler_div = [dt_nu](double k2) { return 1.0 / (1.0 + dt_nu * k2); };

        SolenoidalField term = tc.gamma_T * (u_hat.at(M) - tc.u_T);
        if (src.gamma_u != 0.0)
            term.add_scaled(0.5 * dt, adjoint_rhs(u_hat.at(M), src, M));
        std::vector<SolenoidalField> mu(static_cast<std::size_t>(M) + 1,
                                        SolenoidalField::zero(u_hat.modes_ptr()));
        mu[static_cast<std::size_t>(M)] = term.mapped(inv_helm).mapped(euler_div);
        check_finite(mu[static_cast<std::size_t>(M)], M);

        for (int m = M - 1; m >= 1; --m) {
            const SolenoidalField& next = mu[static_cast<std::size_t>(m) + 1];
            SolenoidalField expl = -1.0 * adjoint_B_star(u_hat.at(m), next, alpha);
            if (src.gamma_u != 0.0) expl += adjoint_rhs(u_hat.at(m), src, m);
            SolenoidalField rhs = expl.mapped(inv_helm);
            rhs *= dt;
            rhs += next;
            mu[static_cast<std::size_t>(m)] = rhs.mapped(euler_div);
            check_finite(mu[static_cast<std::size_t>(m)], m);
        }
        lam[0] = mu[1];
        for (int m = 1; m < M; ++m)
            lam[static_cast<std::size_t>(m)] =
                0.5 * (mu[static_cast<std::size_t>(m)] + mu[static_cast<std::size_t>(m) + 1]);
        lam[static_cast<std::size_t>(M)] = mu[static_cast<std::size_t>(M)];
    } else {
        // optimize-then-discretize: the forward IMEX CN/Heun family run backward
        lam[static_cast<std::size_t>(M)] =
            helmholtz_solve(tc.gamma_T * (u_hat.at(M) - tc.u_T), alpha);
        check_finite(lam[static_cast<std::size_t>(M)], M);

        auto ghat = [&](int node, const SolenoidalField& l) {
            SolenoidalField g = adjoint_B_star(u_hat.at(node), l, alpha);
            if (src.gamma_u != 0.0) g -= adjoint_rhs(u_hat.at(node), src, node);
            return g.mapped(inv_helm);
        };
        const auto cn_num = [dt_nu](double k2) { return 1.0 - 0.5 * dt_nu * k2; };
        const auto cn_den = [dt_nu](double k2) { return 1.0 / (1.0 + 0.5 * dt_nu * k2); };

        for (int j = M - 1; j >= 0; --j) {
            const SolenoidalField& next = lam[static_cast<std::size_t>(j) + 1];
            SolenoidalField g1 = ghat(j + 1, next);
            // predictor (backward CN-Euler)
            SolenoidalField pred = next.mapped(cn_num);
            pred.add_scaled(-dt, g1);
            pred = pred.mapped(cn_den);
            // corrector with the trapezoid average of the explicit part
            SolenoidalField g0 = ghat(j, pred);
            SolenoidalField corr = next.mapped(cn_num);
            corr.add_scaled(-0.5 * dt, g0 + g1);
            lam[static_cast<std::size_t>(j)] = corr.mapped(cn_den);
            check_finite(lam[static_cast<std::size_t>(j)], j);
        }
    }

    Trajectory traj(u_hat.t0(), u_hat.t_final(), std::move(lam));
    Ee7Monitors mon = collect_monitors(traj, alpha);
    return AdjointSolution{std::move(traj), mon};
}

}  // namespace nsalpha
