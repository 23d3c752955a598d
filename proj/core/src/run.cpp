#include "nsalpha/run.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "nsalpha/alpha_sweep.hpp"
#include "nsalpha/csv.hpp"
#include "nsalpha/fixtures.hpp"
#include "nsalpha/snapshot.hpp"
#include "nsalpha/verify.hpp"

namespace nsalpha {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

SolenoidalField resolve_field(const FieldSpec& spec, const ModeSetPtr& modes,
                              std::uint64_t seed) {
    if (!spec.file.empty()) return read_snapshot_field(spec.file, modes);
    return fixture_field(spec.fixture.empty() ? "zero" : spec.fixture, modes, spec.amplitude,
                         seed);
}

json manifest_json(const RunConfig& cfg, const OptimalityReport& rep, double seconds) {
    json iters = json::array();
    for (const auto& r : rep.history)
        iters.push_back({{"iter", r.iter},
                         {"J", r.cost},
                         {"step", r.step},
                         {"grad_norm", r.grad_norm},
                         {"vi_residual", r.vi_residual}});
    return json{
        {"params",
         {{"nu", cfg.physics.nu}, {"alpha", cfg.physics.alpha}, {"t_final", cfg.physics.t_final}}},
        {"weights",
         {{"gamma_u", cfg.weights.gamma_u},
          {"gamma_T", cfg.weights.gamma_T},
          {"gamma_f", cfg.weights.gamma_f}}},
        {"set",
         {{"kind", cfg.set.kind == AdmissibleSet::Kind::Unconstrained ? "unconstrained" : "ball"},
          {"radius", cfg.set.radius}}},
        {"mesh", {{"dim", cfg.mesh.dim}, {"n", cfg.mesh.n}, {"m_steps", cfg.mesh.m_steps}}},
        {"cost", to_string(cfg.cost)},
        {"scheme", to_string(cfg.scheme)},
        {"seed", cfg.seed},
        {"converged", rep.converged},
        {"final_cost", rep.cost},
        {"iterations", iters},
        {"timings", {{"total_seconds", seconds}}},
    };
}

void write_report_artifacts(const RunConfig& cfg, const OptimalityReport& rep,
                            const fs::path& out, double seconds) {
    std::ofstream mf(out / "manifest.json");
    mf << manifest_json(cfg, rep, seconds).dump(2) << "\n";
    write_history_csv((out / "history.csv").string(), rep);
    if (rep.control) write_snapshot((out / "control.nsaf").string(), *rep.control);
    if (rep.state) write_snapshot((out / "state.nsaf").string(), *rep.state);
    if (rep.adjoint) write_snapshot((out / "adjoint.nsaf").string(), *rep.adjoint);
    write_energy_csv((out / "energy.csv").string(), rep.state_ledger);
    write_ee7_csv((out / "ee7.csv").string(), {rep.adjoint_monitors});
}

}  // namespace

ControlProblem build_problem(const RunConfig& cfg) {
    ModeSetPtr modes = ModeSet::create(cfg.mesh.dim, cfg.mesh.n);
    SolenoidalField u0 = resolve_field(cfg.initial, modes, cfg.seed);

    if (!cfg.target.fixture.empty()) {
        if (cfg.target.fixture == "tracking") {
            TrackingFixture fx =
                make_tracking_fixture(u0, cfg.physics, cfg.mesh.m_steps, cfg.scheme, cfg.seed);
            return ControlProblem{cfg.physics, cfg.weights,       cfg.cost, cfg.set,
                                  fx.u0,       std::move(fx.u_d), fx.u_T,   cfg.scheme};
        }
        // "rest": drive the flow toward stillness
        Trajectory u_d = Trajectory::zero(0.0, cfg.physics.t_final, cfg.mesh.m_steps, modes);
        return ControlProblem{cfg.physics, cfg.weights,      cfg.cost,
                              cfg.set,     u0,               std::move(u_d),
                              SolenoidalField::zero(modes),  cfg.scheme};
    }
    Trajectory u_d = read_snapshot_trajectory(cfg.target.u_d_file, 0.0, cfg.physics.t_final,
                                              modes);
    if (u_d.m_steps() != cfg.mesh.m_steps)
        throw DimensionError("target.u_d: snapshot has " + std::to_string(u_d.m_steps()) +
                             " steps, mesh.m_steps is " + std::to_string(cfg.mesh.m_steps));
    SolenoidalField u_T = read_snapshot_field(cfg.target.u_T_file, modes);
    return ControlProblem{cfg.physics, cfg.weights, cfg.cost,        cfg.set,
                          u0,          std::move(u_d), std::move(u_T), cfg.scheme};
}

int run(const RunConfig& cfg) {
    const fs::path out(cfg.output_dir);
    if (cfg.mode != RunMode::Verify) fs::create_directories(out);
    const auto t_start = std::chrono::steady_clock::now();
    auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    };

    switch (cfg.mode) {
        case RunMode::Simulate: {
            ModeSetPtr modes = ModeSet::create(cfg.mesh.dim, cfg.mesh.n);
            SolenoidalField u0 = resolve_field(cfg.initial, modes, cfg.seed);
            SolenoidalField fprof = resolve_field(cfg.forcing, modes, cfg.seed + 1);
            Trajectory f =
                Trajectory::constant(0.0, cfg.physics.t_final, cfg.mesh.m_steps, fprof);
            try {
                StateSolution sol =
                    integrate_state(u0, f, cfg.physics, cfg.mesh.m_steps, cfg.scheme);
                write_snapshot((out / "state.nsaf").string(), sol.u);
                write_energy_csv((out / "energy.csv").string(), sol.ledger);
                std::cout << "simulate: " << cfg.mesh.m_steps << " steps, max energy residual "
                          << sol.ledger.max_residual() << ", a-priori bound margin "
                          << sol.ledger.bound_margin() << "\n"
                          << "  ||u||_Linf(V) = " << sol.ledger.sup_v_norm
                          << ", ||u||_L2(D(A)) = " << sol.ledger.l2_da_norm
                          << ", CFL advisory max|u|*dt*n = " << sol.ledger.cfl_advisory << "\n";
            } catch (const BlowUpError& e) {
                std::cerr << "solver failure: " << e.what() << "\n";
                return 2;
            }
            return 0;
        }

        case RunMode::Optimize: {
            ControlProblem prob = build_problem(cfg);
            Trajectory f0 = Trajectory::zero(0.0, cfg.physics.t_final, cfg.mesh.m_steps,
                                             prob.modes_ptr());
            ProjectedGradientOptions opts;
            opts.max_iters = cfg.optimizer.max_iters;
            opts.tol = cfg.optimizer.tol;
            try {
                OptimalityReport rep = projected_gradient(prob, f0, opts);
                write_report_artifacts(cfg, rep, out, elapsed());
                std::cout << "optimize: J = " << rep.cost << " after " << rep.iterations
                          << " iterations, " << (rep.converged ? "converged" : "max_iters hit")
                          << "\n";
            } catch (const StagnationError& e) {
                write_report_artifacts(cfg, *e.report, out, elapsed());
                std::cerr << "solver failure: " << e.what() << "\n";
                return 2;
            } catch (const BlowUpError& e) {
                std::cerr << "solver failure: " << e.what() << "\n";
                return 2;
            }
            return 0;
        }

        case RunMode::SweepAlpha: {
            SweepConfig sc{cfg.sweep_alphas, build_problem(cfg), ProjectedGradientOptions{},
                           cfg.threads};
            sc.optimizer.max_iters = cfg.optimizer.max_iters;
            sc.optimizer.tol = cfg.optimizer.tol;
            try {
                SweepResult res = run_sweep(sc);
                write_sweep_csv((out / "sweep.csv").string(), res);
                write_sweep_dat((out / "sweep.dat").string(), res);
                if (res.state0) write_snapshot((out / "state_alpha0.nsaf").string(), *res.state0);
                if (res.adjoint0)
                    write_snapshot((out / "adjoint_alpha0.nsaf").string(), *res.adjoint0);
                std::cout << "sweep-alpha: " << res.rows.size()
                          << " rows, limit-adjoint residual " << res.limit_residual
                          << " (truncation estimate " << res.truncation_estimate << ")\n";
                for (const auto& r : res.rows)
                    if (!r.converged)
                        std::cout << "  note: row alpha=" << r.alpha << " did not converge\n";
            } catch (const BlowUpError& e) {
                std::cerr << "solver failure: " << e.what() << "\n";
                return 2;
            }
            return 0;
        }

        case RunMode::Verify: {
            auto results = run_verification(cfg.mesh.dim, cfg.mesh.n, cfg.mesh.m_steps, cfg.seed);
            print_check_table(std::cout, results);
            if (!all_passed(results)) {
                std::cerr << "verification failed\n";
                return 3;
            }
            std::cout << "all checks passed\n";
            return 0;
        }
    }
    return 0;
}

}  // namespace nsalpha
