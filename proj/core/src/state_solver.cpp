#include "nsalpha/state_solver.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>

#include "nsalpha/transform.hpp"

namespace nsalpha {

SolenoidalField nonlinear_B(const SolenoidalField& u, const SolenoidalField& v, double alpha) {
    require_compatible(u.modes(), v.modes(), "nonlinear_B");
    const ModeSet& ms = u.modes();
    const int d = ms.dim();

    const SpectralField w = helmholtz_apply(v.coeffs(), alpha);

    const GridField ug = to_physical(u);
    const GridField wg = to_physical(w);
    std::vector<GridField> du, dw;  // du[a] = d u / d x_a (all components)
    du.reserve(d);
    dw.reserve(d);
    for (int a = 0; a < d; ++a) {
        du.push_back(to_physical(derivative(u.coeffs(), a)));
        dw.push_back(to_physical(derivative(w, a)));
    }

    // out_i = sum_a u_a d_a w_i  +  sum_m w_m d_i u_m
    GridField out(d, ms.n());
    for (std::size_t p = 0; p < out.points; ++p) {
        for (int i = 0; i < d; ++i) {
            double adv = 0.0, tr = 0.0;
            for (int a = 0; a < d; ++a) {
                adv += ug.at(a, p) * dw[a].at(i, p);
                tr += wg.at(a, p) * du[i].at(a, p);
            }
            out.at(i, p) = adv + tr;
        }
    }
    SolenoidalField result = leray_project(to_spectral(out, u.modes_ptr()));
#ifndef NDEBUG
    // discrete skew-symmetry must hold pair by pair; normalize by the input
    // magnitudes (the cancellation scale) since ||B|| itself may vanish
    const double k2max = double(ms.max_wave() * ms.max_wave()) * d;
    const double scale =
        v_norm(u) * (1.0 + alpha * alpha * k2max) * da_norm(v) * l2_norm(u);
    assert(std::abs(l2_inner(result, u)) <= 1e-12 * scale + 1e-250);
#endif
    return result;
}

namespace {

double energy_e(const SolenoidalField& u, double alpha) {
    const double g = v_norm(u);
    const double l = l2_norm(u);
    return l * l + alpha * alpha * g * g;
}

double max_grid_speed(const SolenoidalField& u) {
    GridField g = to_physical(u);
    double m = 0.0;
    for (std::size_t i = 0; i < g.points; ++i) {
        double m2 = 0.0;
        for (int c = 0; c < g.dim; ++c) m2 += g.at(c, i) * g.at(c, i);
        m = std::max(m, m2);
    }
    return std::sqrt(m);
}

// One diagonal Crank-Nicolson solve:  returns (1 - z/2) u / (1 + z/2) + rhs/(1 + z/2)
// where z = dt nu |k|^2 per mode (the Helmholtz factors cancel in the linear part).
SolenoidalField cn_step(const SolenoidalField& u, const SolenoidalField& rhs,
                        double dt_nu) {
    SolenoidalField out = u.mapped([dt_nu](double k2) {
        const double z = dt_nu * k2;
        return (1.0 - 0.5 * z) / (1.0 + 0.5 * z);
    });
    out += rhs.mapped([dt_nu](double k2) {
        const double z = dt_nu * k2;
        return 1.0 / (1.0 + 0.5 * z);
    });
    return out;
}

}  // namespace

double energy_residual(const SolenoidalField& u_prev, const SolenoidalField& u_next,
                       const SolenoidalField& f_prev, const SolenoidalField& f_next,
                       double dt, const PhysicalParams& p) {
    const double a2 = p.alpha * p.alpha;
    SolenoidalField um = 0.5 * (u_prev + u_next);
    SolenoidalField fm = 0.5 * (f_prev + f_next);
    const double gv = v_norm(um), ga = da_norm(um);
    const double de = (energy_e(u_next, p.alpha) - energy_e(u_prev, p.alpha)) / (2.0 * dt);
    return std::abs(de + p.nu * gv * gv + p.nu * a2 * ga * ga - l2_inner(fm, um));
}

StateSolution integrate_state(const SolenoidalField& u0, const Trajectory& f,
                              const PhysicalParams& p, int m_steps, TimeScheme scheme) {
    p.validate();
    if (m_steps < 1) throw DimensionError("integrate_state: m_steps must be >= 1");
    require_compatible(u0.modes(), f.modes(), "integrate_state");
    if (f.m_steps() != m_steps)
        throw DimensionError("integrate_state: control trajectory has wrong step count");

    const double dt = f.dt();
    const double a2 = p.alpha * p.alpha;
    const double alpha = p.alpha;
    const auto inv_helm = [a2](double k2) { return 1.0 / (1.0 + a2 * k2); };

    std::vector<SolenoidalField> us;
    us.reserve(static_cast<std::size_t>(m_steps) + 1);
    us.push_back(u0);

    double data_scale = l2_norm(u0);
    for (int j = 0; j <= m_steps; ++j) data_scale = std::max(data_scale, l2_norm(f.at(j)));
    const double guard = 1e8 * std::max(data_scale, 1e-12);

    EnergyLedger ledger;
    ledger.rows.resize(static_cast<std::size_t>(m_steps) + 1);
    // prefix trapezoid sums for the running inequality at each t_j
    double run_diss = 0.0;  // integral of ||grad u||^2 + 2 a^2 ||A u||^2 up to t_j
    double run_force = 0.0;
    double prev_diss = 0.0, prev_force = 0.0;
    const double e0 = energy_e(u0, alpha);
    const double poincare_c = 1.0;  // min |k|^2 = 1 on the mean-free torus

    auto fill_node = [&](int j) {
        const SolenoidalField& uj = us[static_cast<std::size_t>(j)];
        auto& row = ledger.rows[static_cast<std::size_t>(j)];
        const double lu = l2_norm(uj), gv = v_norm(uj), ga = da_norm(uj);
        const double lf = l2_norm(f.at(j));
        row.step = j;
        row.t = f.time(j);
        row.kinetic = lu * lu;
        row.gradient = a2 * gv * gv;
        const double diss_j = gv * gv + 2.0 * a2 * ga * ga;
        const double force_j = lf * lf;
        if (j > 0) {
            run_diss += 0.5 * dt * (prev_diss + diss_j);
            run_force += 0.5 * dt * (prev_force + force_j);
        }
        prev_diss = diss_j;
        prev_force = force_j;
        row.bound_lhs = lu * lu + a2 * gv * gv + p.nu * run_diss;
        row.bound_rhs = poincare_c / p.nu * run_force + e0;
        ledger.sup_v_norm = std::max(ledger.sup_v_norm, gv);
        if (j > 0) {
            const SolenoidalField& up = us[static_cast<std::size_t>(j) - 1];
            SolenoidalField um = 0.5 * (up + uj);
            SolenoidalField fm = 0.5 * (f.at(j - 1) + f.at(j));
            const double mgv = v_norm(um), mga = da_norm(um);
            row.dissipation = p.nu * mgv * mgv + p.nu * a2 * mga * mga;
            row.work = l2_inner(fm, um);
            row.residual = energy_residual(up, uj, f.at(j - 1), f.at(j), dt, p);
        } else {
            row.dissipation = row.work = row.residual = 0.0;
        }
    };

    double l2da_acc = 0.0, prev_da = 0.0;
    auto acc_da = [&](int j) {
        const double ga = da_norm(us[static_cast<std::size_t>(j)]);
        if (j > 0) l2da_acc += 0.5 * dt * (prev_da + ga * ga);
        prev_da = ga * ga;
    };

    fill_node(0);
    acc_da(0);

    for (int j = 0; j < m_steps; ++j) {
        const SolenoidalField& uj = us.back();
        SolenoidalField u_next = SolenoidalField::zero(u0.modes_ptr());
        if (scheme == TimeScheme::ImexEuler) {
            // H(u' - u)/dt + nu H A u' = fbar - B(u,u)
            SolenoidalField expl = 0.5 * (f.at(j) + f.at(j + 1));
            expl -= nonlinear_B(uj, uj, alpha);
            SolenoidalField rhs = expl.mapped(inv_helm);
            rhs *= dt;
            rhs += uj;
            const double dt_nu = dt * p.nu;
            u_next = rhs.mapped([dt_nu](double k2) { return 1.0 / (1.0 + dt_nu * k2); });
        } else {
            // predictor: CN linear, explicit B and f at the step start
            SolenoidalField n0 = f.at(j) - nonlinear_B(uj, uj, alpha);
            SolenoidalField rhs0 = n0.mapped(inv_helm);
            rhs0 *= dt;
            SolenoidalField u_star = cn_step(uj, rhs0, dt * p.nu);
            // corrector: trapezoid on B and f using the predicted endpoint
            SolenoidalField n1 = f.at(j + 1) - nonlinear_B(u_star, u_star, alpha);
            SolenoidalField navg = 0.5 * (n0 + n1);
            SolenoidalField rhs1 = navg.mapped(inv_helm);
            rhs1 *= dt;
            u_next = cn_step(uj, rhs1, dt * p.nu);
        }

        if (!u_next.finite() || l2_norm(u_next) > guard)
            throw BlowUpError("integrate_state: blow-up at step " + std::to_string(j + 1), j + 1);
        us.push_back(std::move(u_next));
        fill_node(j + 1);
        acc_da(j + 1);
    }

    ledger.l2_da_norm = std::sqrt(l2da_acc);
    ledger.cfl_advisory = max_grid_speed(us.back()) * dt * f.modes().n();

    return StateSolution{Trajectory(f.t0(), f.t_final(), std::move(us)), std::move(ledger)};
}

double EnergyLedger::max_residual() const {
    double m = 0.0;
    for (const auto& r : rows) m = std::max(m, r.residual);
    return m;
}

double EnergyLedger::bound_margin() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& r : rows) m = std::min(m, r.bound_rhs - r.bound_lhs);
    return m;
}

}  // namespace nsalpha
