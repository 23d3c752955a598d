#include "nsalpha/verify.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>

#include "nsalpha/fixtures.hpp"
#include "nsalpha/random_fields.hpp"
#include "nsalpha/transform.hpp"

namespace nsalpha {

double fd_gradient_max_rel_error(const ControlProblem& prob, const Trajectory& f0, int n_dirs,
                                 double eps, std::uint64_t seed) {
    prob.validate();
    StateSolution sol = integrate_state(prob.u0, f0, prob.physics, prob.m_steps(), prob.scheme);
    AdjointSource src{prob.kind, prob.u_d, prob.weights.gamma_u};
    TerminalCondition tc{prob.weights.gamma_T, prob.u_T};
    AdjointSolution adj = integrate_adjoint(sol.u, src, tc, prob.physics, prob.scheme);
    Trajectory g = reduced_gradient(f0, adj.lambda, prob.weights.gamma_f);

    std::mt19937_64 rng(seed);
    double worst = 0.0;
    for (int d = 0; d < n_dirs; ++d) {
        Trajectory dir = random_trajectory(f0.modes_ptr(), f0.t0(), f0.t_final(), f0.m_steps(),
                                           rng);
        const double dn = q_norm(dir);
        if (dn == 0) continue;
        dir *= 1.0 / dn;

        Trajectory fp = f0, fm = f0;
        fp.add_scaled(eps, dir);
        fm.add_scaled(-eps, dir);
        StateSolution sp = integrate_state(prob.u0, fp, prob.physics, prob.m_steps(), prob.scheme);
        StateSolution sm = integrate_state(prob.u0, fm, prob.physics, prob.m_steps(), prob.scheme);
        const double jp = eval_cost(sp.u, fp, prob.u_d, prob.u_T, prob.weights, prob.kind);
        const double jm = eval_cost(sm.u, fm, prob.u_d, prob.u_T, prob.weights, prob.kind);
        const double fd = (jp - jm) / (2.0 * eps);
        const double pred = q_inner(g, dir);
        const double rel = std::abs(pred - fd) / std::max(std::abs(fd), 1e-14);
        worst = std::max(worst, rel);
    }
    return worst;
}

namespace {

struct Suite {
    std::vector<CheckResult> results;
    void add(const std::string& name, double value, double threshold, bool pass_if_below = true) {
        const bool ok = pass_if_below ? (value <= threshold) : (value >= threshold);
        results.push_back({name, ok, value, threshold});
    }
};

double det_scale(double a, double b) { return std::max(a * b, 1e-14); }

}  // namespace

std::vector<CheckResult> run_verification(int dim, int n, int m_steps, std::uint64_t seed) {
    Suite suite;
    ModeSetPtr modes = ModeSet::create(dim, n);
    std::mt19937_64 rng(seed);

    // transforms: round trip and Parseval
    {
        double worst_rt = 0.0, worst_pv = 0.0;
        for (int it = 0; it < 5; ++it) {
            SolenoidalField u = random_solenoidal(modes, rng);
            GridField g = to_physical(u);
            SpectralField back = to_spectral(g, modes);
            double diff = 0.0;
            for (int c = 0; c < dim; ++c) {
                auto a = u.coeffs().component(c);
                auto b = back.component(c);
                for (std::size_t i = 0; i < modes->size(); ++i)
                    diff = std::max(diff, std::abs(a[i] - b[i]));
            }
            worst_rt = std::max(worst_rt, diff / std::max(max_abs_coeff(u), 1e-14));
            double quad = 0.0;
            for (std::size_t i = 0; i < g.points; ++i)
                for (int c = 0; c < dim; ++c) quad += g.at(c, i) * g.at(c, i);
            quad /= static_cast<double>(g.points);
            const double spec = l2_norm(u) * l2_norm(u);
            worst_pv = std::max(worst_pv, std::abs(quad - spec) / std::max(spec, 1e-14));
        }
        suite.add("transform_roundtrip", worst_rt, 1e-13);
        suite.add("parseval", worst_pv, 1e-12);
    }

    // Leray projector: annihilates gradients, idempotent, non-expansive
    {
        double worst_grad = 0.0, worst_idem = 0.0, worst_exp = 0.0, worst_div = 0.0;
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (int it = 0; it < 20; ++it) {
            SpectralField raw(modes);
            SpectralField grad(modes);
            for (std::size_t i = 0; i < modes->size(); ++i) {
                if (!modes->retained(i)) continue;
                const std::complex<double> phi(gauss(rng), gauss(rng));
                for (int c = 0; c < dim; ++c) {
                    raw.at(c, i) = {gauss(rng), gauss(rng)};
                    grad.at(c, i) = std::complex<double>(0.0, 1.0) *
                                    double(modes->wave(i)[c]) * phi;
                }
            }
            SolenoidalField pg = leray_project(grad);
            worst_grad = std::max(worst_grad,
                                  l2_norm(pg) / std::max(l2_norm(grad), 1e-14));
            SolenoidalField p1 = leray_project(raw);
            SolenoidalField p2 = leray_project(p1.coeffs());
            worst_idem = std::max(worst_idem,
                                  l2_norm(p2 - p1) / std::max(l2_norm(p1), 1e-14));
            worst_exp = std::max(worst_exp, l2_norm(p1) / std::max(l2_norm(raw), 1e-14) - 1.0);
            worst_div = std::max(worst_div,
                                 divergence_linf(p1) / std::max(max_abs_coeff(p1), 1e-14));
        }
        suite.add("leray_kills_gradients", worst_grad, 1e-13);
        suite.add("leray_idempotent", worst_idem, 1e-13);
        suite.add("leray_nonexpansive", worst_exp, 1e-13);
        suite.add("divergence_free", worst_div, 1e-13);
    }

    // skew-symmetry and transpose identity across alpha
    {
        double worst_skew = 0.0, worst_tr = 0.0;
        for (double alpha : {0.0, 0.1, 1.0}) {
            for (int it = 0; it < 10; ++it) {
                SolenoidalField u = random_solenoidal(modes, rng);
                SolenoidalField vv = random_solenoidal(modes, rng);
                SolenoidalField w = random_solenoidal(modes, rng);
                SolenoidalField b = nonlinear_B(u, vv, alpha);
                worst_skew = std::max(worst_skew, std::abs(l2_inner(b, u)) /
                                                      det_scale(l2_norm(b), l2_norm(u)));
                SolenoidalField bs = adjoint_B_star(u, vv, alpha);
                SolenoidalField bl = linearized_B(u, w, alpha);
                const double lhs = l2_inner(bs, w);
                const double rhs = l2_inner(vv, bl);
                const double scale =
                    det_scale(l2_norm(bs), l2_norm(w)) + det_scale(l2_norm(vv), l2_norm(bl));
                worst_tr = std::max(worst_tr, std::abs(lhs - rhs) / scale);
            }
        }
        suite.add("skew_symmetry", worst_skew, 1e-12);
        suite.add("transpose_identity", worst_tr, 1e-11);
    }

    // single-mode decay at second order
    {
        double worst = 0.0;
        for (double alpha : {0.0, 0.5, 1.0}) {
            PhysicalParams p{0.25, alpha, 2.0};
            SolenoidalField u0 = single_mode_field(modes, {1, 0, 0}, 1.0);
            Trajectory f = Trajectory::zero(0.0, p.t_final, 128, modes);
            StateSolution sol = integrate_state(u0, f, p, 128, TimeScheme::ImexCnHeun);
            const double expected = std::exp(-p.nu * p.t_final) * l2_norm(u0);
            worst = std::max(worst,
                             std::abs(l2_norm(sol.u.at(128)) - expected) / expected);
        }
        suite.add("single_mode_decay", worst, 1e-6);
    }

    // reduced gradient vs central finite differences (exact-transpose scheme)
    {
        PhysicalParams p{0.5, 0.1, 0.5};
        TrackingFixture fx = make_tracking_fixture(modes, p, m_steps, TimeScheme::ImexEuler, seed);
        double worst = 0.0;
        for (CostKind kind : {CostKind::DaTracking, CostKind::L4Tracking}) {
            for (int set_case = 0; set_case < 2; ++set_case) {
                ControlProblem prob{p,
                                    CostWeights{1.0, 0.5, 0.1},
                                    kind,
                                    set_case == 0 ? AdmissibleSet::unconstrained()
                                                  : AdmissibleSet::ball(10.0),
                                    fx.u0,
                                    fx.u_d,
                                    fx.u_T,
                                    TimeScheme::ImexEuler};
                std::mt19937_64 r2(seed + set_case);
                Trajectory f0 = random_trajectory(modes, 0.0, p.t_final, m_steps, r2, 2.0, 0.3);
                worst = std::max(worst, fd_gradient_max_rel_error(prob, f0, 3, 1e-5, seed + 7));
            }
        }
        suite.add("gradient_fd", worst, 1e-6);
    }

    // ball projection: closed form and non-expansiveness
    {
        const double radius = 1.0;
        AdmissibleSet ball = AdmissibleSet::ball(radius);
        Trajectory g = random_trajectory(modes, 0.0, 1.0, 8, rng);
        g *= 2.0 * radius / q_norm(g);
        Trajectory pg = project_admissible(ball, g);
        double worst = std::abs(q_norm(pg) - radius) / radius;
        worst = std::max(worst, q_norm(pg - 0.5 * g) / radius);
        Trajectory inside = g;
        inside *= 0.25;
        worst = std::max(worst, q_norm(project_admissible(ball, inside) - inside) / radius);
        double worst_ne = 0.0;
        for (int it = 0; it < 10; ++it) {
            Trajectory a = random_trajectory(modes, 0.0, 1.0, 8, rng);
            Trajectory b = random_trajectory(modes, 0.0, 1.0, 8, rng);
            const double num = q_norm(project_admissible(ball, a) - project_admissible(ball, b));
            const double den = std::max(q_norm(a - b), 1e-14);
            worst_ne = std::max(worst_ne, num / den - 1.0);
        }
        suite.add("ball_projection", worst, 1e-12);
        suite.add("ball_nonexpansive", worst_ne, 1e-12);
    }

    // energy-identity residual drops at second order under dt halving
    {
        PhysicalParams p{0.5, 0.1, 0.5};
        std::mt19937_64 r2(seed + 11);
        SolenoidalField u0 = random_solenoidal(modes, r2, 2.5, 0.5);
        SolenoidalField fprof = random_solenoidal(modes, r2, 2.5, 0.5);
        auto max_res = [&](int m) {
            Trajectory f = modulated_control(fprof, 0.0, p.t_final, m);
            StateSolution sol = integrate_state(u0, f, p, m, TimeScheme::ImexCnHeun);
            return sol.ledger.max_residual();
        };
        const double r1 = max_res(m_steps);
        const double r2v = max_res(2 * m_steps);
        const double order = std::log2(r1 / r2v);
        suite.add("energy_identity_order", order, 1.8, /*pass_if_below=*/false);
    }

    return suite.results;
}

bool all_passed(const std::vector<CheckResult>& results) {
    for (const auto& r : results)
        if (!r.passed) return false;
    return true;
}

void print_check_table(std::ostream& os, const std::vector<CheckResult>& results) {
    for (const auto& r : results) {
        os << (r.passed ? "[PASS] " : "[FAIL] ") << std::left << std::setw(28) << r.name
           << " value " << std::scientific << std::setprecision(3) << r.value << "  bound "
           << r.threshold << "\n";
    }
    os.flush();
}

}  // namespace nsalpha
