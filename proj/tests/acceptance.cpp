// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// fails.  Desk scale throughout (d=2 at n=8/16, d=3 at n=8/16, m <= 128).

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

#include "nsalpha/alpha_sweep.hpp"
#include "nsalpha/csv.hpp"
#include "nsalpha/fixtures.hpp"
#include "nsalpha/random_fields.hpp"
#include "nsalpha/run.hpp"
#include "nsalpha/snapshot.hpp"
#include "nsalpha/verify.hpp"

using namespace nsalpha;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void criterion(int id, const std::string& label, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %2d: %-28s %s\n", pass ? "PASS" : "FAIL", id, label.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3e", v);
    return buf;
}

SolenoidalField rand_field(const ModeSetPtr& ms, std::mt19937_64& rng, double norm = 1.0) {
    return random_solenoidal(ms, rng, 2.0, norm);
}

// ---------------------------------------------------------------- C1, C6
void skew_and_transpose() {
    double worst_skew = 0.0, worst_tr = 0.0;
    for (int dim : {2, 3}) {
        auto ms = ModeSet::create(dim, 8);
        std::mt19937_64 rng(1000 + dim);
        for (double alpha : {0.0, 0.1, 1.0}) {
            for (int it = 0; it < 100; ++it) {
                SolenoidalField u = rand_field(ms, rng);
                SolenoidalField v = rand_field(ms, rng);
                SolenoidalField w = rand_field(ms, rng);
                SolenoidalField b = nonlinear_B(u, v, alpha);
                worst_skew =
                    std::max(worst_skew, std::abs(l2_inner(b, u)) /
                                             std::max(l2_norm(b) * l2_norm(u), 1e-14));
                SolenoidalField bs = adjoint_B_star(u, v, alpha);
                SolenoidalField bl = linearized_B(u, w, alpha);
                const double scale = std::max(
                    l2_norm(bs) * l2_norm(w) + l2_norm(v) * l2_norm(bl), 1e-14);
                worst_tr = std::max(
                    worst_tr, std::abs(l2_inner(bs, w) - l2_inner(v, bl)) / scale);
            }
        }
    }
    criterion(1, "skew-symmetry (eq. B form)", worst_skew <= 1e-12,
              "max |(B(u,v),u)| / (|B||u|) = " + fmt(worst_skew) + " <= 1e-12");
    criterion(6, "transpose identity B'*", worst_tr <= 1e-11,
              "max |(B'* l,w)-(l,B' w)| / scale = " + fmt(worst_tr) + " <= 1e-11");
}

// ------------------------------------------------------------------- C2
void operator_bound() {
    // ratio ||B(u,v)||_{D(A)'} / (||grad u|| ||A v||); the recorded constant
    // below was measured on this fixture family and pinned with headroom
    const double kPinnedC = 1.5;
    double worst = 0.0, worst_first_half = 0.0;
    std::ostringstream per_mesh;
    for (auto [dim, n] : std::vector<std::pair<int, int>>{{2, 8}, {2, 16}, {3, 8}}) {
        auto ms = ModeSet::create(dim, n);
        std::mt19937_64 rng(2000 + 10 * dim + n);
        double mesh_max = 0.0;
        for (double alpha : {0.0, 0.1, 1.0}) {
            for (int it = 0; it < 100; ++it) {
                SolenoidalField u = rand_field(ms, rng);
                SolenoidalField v = rand_field(ms, rng);
                const double r =
                    da_dual_norm(nonlinear_B(u, v, alpha)) / (v_norm(u) * da_norm(v));
                mesh_max = std::max(mesh_max, r);
                if (it < 50) worst_first_half = std::max(worst_first_half, r);
            }
        }
        per_mesh << " d" << dim << "n" << n << ":" << fmt(mesh_max);
        worst = std::max(worst, mesh_max);
    }
    const bool no_growth = worst <= 1.5 * worst_first_half;
    criterion(2, "operator bound constant",
              worst <= kPinnedC && no_growth,
              "recorded C =" + per_mesh.str() + ", pinned " + fmt(kPinnedC) +
                  (no_growth ? ", no growth across samples" : ", GREW with samples"));
}

// ---------------------------------------------------------------- C3, C4
double forced_run_margin_min = std::numeric_limits<double>::infinity();
int forced_run_count = 0;

StateSolution forced_run(const ModeSetPtr& ms, const PhysicalParams& p, int m,
                         TimeScheme scheme, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    SolenoidalField u0 = random_solenoidal(ms, rng, 2.5, 0.5);
    SolenoidalField prof = random_solenoidal(ms, rng, 2.5, 0.5);
    Trajectory f = modulated_control(prof, 0.0, p.t_final, m);
    StateSolution sol = integrate_state(u0, f, p, m, scheme);
    forced_run_margin_min = std::min(forced_run_margin_min, sol.ledger.bound_margin());
    ++forced_run_count;
    return sol;
}

void energy_identity_and_bound() {
    auto ms = ModeSet::create(2, 8);
    PhysicalParams p{0.5, 0.1, 0.5};
    const double r32 = forced_run(ms, p, 32, TimeScheme::ImexCnHeun, 42).ledger.max_residual();
    const double r64 = forced_run(ms, p, 64, TimeScheme::ImexCnHeun, 42).ledger.max_residual();
    const double r128 = forced_run(ms, p, 128, TimeScheme::ImexCnHeun, 42).ledger.max_residual();
    const double o1 = std::log2(r32 / r64), o2 = std::log2(r64 / r128);
    criterion(3, "energy identity order 2", o1 >= 1.8 && o2 >= 1.8,
              "observed orders " + fmt(o1) + ", " + fmt(o2) + " >= 1.8");

    // more forced runs for the a-priori bound: both schemes, several alphas
    for (double alpha : {0.0, 0.1, 1.0}) {
        PhysicalParams pa{0.4, alpha, 1.0};
        forced_run(ms, pa, 64, TimeScheme::ImexCnHeun, 77 + int(alpha * 10));
        forced_run(ms, pa, 64, TimeScheme::ImexEuler, 78 + int(alpha * 10));
    }
    auto ms3 = ModeSet::create(3, 8);
    forced_run(ms3, PhysicalParams{0.4, 0.5, 0.5}, 32, TimeScheme::ImexCnHeun, 79);
    criterion(4, "a-priori energy bound",
              forced_run_margin_min >= 0.0,
              "min margin over " + std::to_string(forced_run_count) +
                  " forced runs = " + fmt(forced_run_margin_min) + " >= 0");
}

// ------------------------------------------------------------------- C5
void single_mode_decay() {
    double worst = 0.0, spread = 0.0;
    for (int dim : {2, 3}) {
        auto ms = ModeSet::create(dim, 8);
        PhysicalParams p{0.25, 0.0, 2.0};
        SolenoidalField u0 = single_mode_field(ms, {1, 0, 0}, 1.0);
        std::vector<double> errs;
        for (double alpha : {0.0, 0.5, 1.0}) {
            p.alpha = alpha;
            Trajectory f = Trajectory::zero(0.0, p.t_final, 128, ms);
            StateSolution sol = integrate_state(u0, f, p, 128, TimeScheme::ImexCnHeun);
            const double expected = std::exp(-p.nu * p.t_final) * l2_norm(u0);
            errs.push_back(std::abs(l2_norm(sol.u.at(128)) - expected) / expected);
        }
        for (double e : errs) worst = std::max(worst, e);
        spread = std::max(spread, *std::max_element(errs.begin(), errs.end()) -
                                      *std::min_element(errs.begin(), errs.end()));
    }
    criterion(5, "single-mode decay 1e-6", worst <= 1e-6,
              "max rel err " + fmt(worst) + " (alpha spread " + fmt(spread) + ")");
}

// ------------------------------------------------------------------- C7
void gradient_consistency() {
    double worst = 0.0;
    std::string where;
    for (auto [dim, n] : std::vector<std::pair<int, int>>{{2, 8}, {2, 16}, {3, 8}, {3, 16}}) {
        auto ms = ModeSet::create(dim, n);
        const int m = 16;
        for (double alpha : {0.0, 0.1, 1.0}) {
            PhysicalParams p{0.5, alpha, 0.5};
            TrackingFixture fx = make_tracking_fixture(ms, p, m, TimeScheme::ImexEuler, 9001);
            for (CostKind kind : {CostKind::DaTracking, CostKind::L4Tracking}) {
                for (int set_case = 0; set_case < 2; ++set_case) {
                    ControlProblem prob{p,
                                        CostWeights{1.0, 0.4, 0.2},
                                        kind,
                                        set_case == 0 ? AdmissibleSet::unconstrained()
                                                      : AdmissibleSet::ball(5.0),
                                        fx.u0,
                                        fx.u_d,
                                        fx.u_T,
                                        TimeScheme::ImexEuler};
                    std::mt19937_64 rng(7000 + set_case);
                    Trajectory f0 =
                        random_trajectory(ms, 0.0, p.t_final, m, rng, 2.0, 0.4);
                    const double e = fd_gradient_max_rel_error(prob, f0, 2, 1e-5, 8100);
                    if (e > worst) {
                        worst = e;
                        where = "d" + std::to_string(dim) + "n" + std::to_string(n) +
                                (kind == CostKind::DaTracking ? " J" : " J0");
                    }
                }
            }
        }
    }
    criterion(7, "gradient vs central FD", worst <= 1e-6,
              "max rel err " + fmt(worst) + " (worst at " + where + ") <= 1e-6");
}

// ------------------------------------------------------------------- C8
void optimality_system() {
    auto ms = ModeSet::create(2, 8);
    PhysicalParams p{0.5, 0.1, 0.5};
    const int m = 32;
    const double gamma_f = 0.5;
    TrackingFixture fx = make_tracking_fixture(ms, p, m, TimeScheme::ImexEuler, 31337);
    ControlProblem prob{p,
                        CostWeights{1.0, 0.1, gamma_f},
                        CostKind::DaTracking,
                        AdmissibleSet::unconstrained(),
                        fx.u0,
                        fx.u_d,
                        fx.u_T,
                        TimeScheme::ImexEuler};
    Trajectory f0 = Trajectory::zero(0.0, p.t_final, m, ms);

    ProjectedGradientOptions opts;
    opts.max_iters = 2000;
    opts.tol = 4e-9;
    OptimalityReport rep = projected_gradient(prob, f0, opts);
    const double vi = rep.history.back().vi_residual;
    OptimalityResidual oc = check_optimality(*rep.control, *rep.state, *rep.adjoint, prob.set,
                                             gamma_f, 16);
    const bool un_ok = rep.converged && vi <= 1e-8 && oc.fixed_point_gap <= 1e-8;

    ControlProblem ball = prob;
    const double radius = 0.5 * q_norm(*rep.control);
    ball.set = AdmissibleSet::ball(radius);
    OptimalityReport repb = projected_gradient(ball, f0, opts);
    const double norm_err = std::abs(q_norm(*repb.control) - radius);
    const bool ball_ok =
        repb.converged && norm_err <= 1e-10 && repb.history.back().vi_residual <= opts.tol;

    criterion(8, "optimality system residuals", un_ok && ball_ok,
              "VI " + fmt(vi) + ", fixed-point gap " + fmt(oc.fixed_point_gap) +
                  ", active-ball | ||f||-R | = " + fmt(norm_err));
}

// ------------------------------------------------------------------- C9
void alpha_limit() {
    auto ms = ModeSet::create(2, 8);
    PhysicalParams p{0.5, 0.0, 0.5};
    const int m = 32;
    TrackingFixture fx = make_tracking_fixture(ms, p, m, TimeScheme::ImexEuler, 60601);
    ControlProblem base{p,
                        CostWeights{1.0, 0.1, 0.1},
                        CostKind::L4Tracking,
                        AdmissibleSet::unconstrained(),
                        fx.u0,
                        fx.u_d,
                        fx.u_T,
                        TimeScheme::ImexEuler};
    SweepConfig cfg{{1.0, 0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625},
                    std::move(base),
                    ProjectedGradientOptions{},
                    1};
    cfg.optimizer.max_iters = 3000;
    cfg.optimizer.tol = 1e-9;
    SweepResult res = run_sweep(cfg);

    bool all_converged = true, monotone = true;
    double ee7_max = 0.0, ee7_min = std::numeric_limits<double>::infinity();
    const std::size_t nrows = res.rows.size();
    for (std::size_t i = 0; i < nrows; ++i) {
        const auto& r = res.rows[i];
        all_converged = all_converged && r.converged;
        const double ee7 = r.ee7.sup_l2 + r.ee7.sup_alpha2_grad_l2;
        ee7_max = std::max(ee7_max, ee7);
        ee7_min = std::min(ee7_min, ee7);
        if (i > 0 && i + 1 < nrows) {  // decreasing alpha rows, 0 row excluded
            monotone = monotone && res.rows[i].gap_state_l2v < res.rows[i - 1].gap_state_l2v;
            monotone = monotone && res.rows[i].gap_adj_l2v < res.rows[i - 1].gap_adj_l2v;
        }
    }
    const double state_ratio = res.rows[nrows - 2].gap_state_l2v / res.rows[0].gap_state_l2v;
    const double adj_ratio = res.rows[nrows - 2].gap_adj_l2v / res.rows[0].gap_adj_l2v;
    const double ee7_ratio = ee7_max / ee7_min;
    const bool resid_ok = res.limit_residual <= 10.0 * res.truncation_estimate;

    criterion(9, "alpha->0 optimality limit",
              all_converged && monotone && state_ratio < 0.1 && adj_ratio < 0.1 &&
                  ee7_ratio < 10.0 && resid_ok,
              "gap shrink state " + fmt(state_ratio) + ", adjoint " + fmt(adj_ratio) +
                  "; ee7 max/min " + fmt(ee7_ratio) + "; limit residual " +
                  fmt(res.limit_residual) + " <= 10x" + fmt(res.truncation_estimate));
}

// ------------------------------------------------------------------ C10
std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
}

void determinism_and_roundtrip() {
    const fs::path tmp = fs::temp_directory_path() / "nsalpha_acceptance";
    fs::remove_all(tmp);
    fs::create_directories(tmp);

    RunConfig cfg;
    cfg.mode = RunMode::Simulate;
    cfg.mesh = {2, 8, 32};
    cfg.physics = {0.5, 0.1, 0.5};
    cfg.initial = {"random", 0.5, ""};
    cfg.forcing = {"taylor_green", 0.2, ""};
    cfg.seed = 20240917;
    bool ok = true;
    {
        std::ostringstream sink;  // keep run()'s summary out of the criterion table
        auto* old = std::cout.rdbuf(sink.rdbuf());
        cfg.output_dir = (tmp / "a").string();
        ok = run(cfg) == 0;
        cfg.output_dir = (tmp / "b").string();
        ok = ok && run(cfg) == 0;
        std::cout.rdbuf(old);
    }
    const bool csv_same = slurp(tmp / "a" / "energy.csv") == slurp(tmp / "b" / "energy.csv");
    const bool snap_same = slurp(tmp / "a" / "state.nsaf") == slurp(tmp / "b" / "state.nsaf");

    // snapshot write -> read -> write is the identity on bytes
    auto ms = ModeSet::create(3, 8);
    std::mt19937_64 rng(99);
    SolenoidalField u = random_solenoidal(ms, rng);
    write_snapshot((tmp / "u1.nsaf").string(), u);
    SolenoidalField u2 = read_snapshot_field((tmp / "u1.nsaf").string());
    write_snapshot((tmp / "u2.nsaf").string(), u2);
    const bool rt_same = slurp(tmp / "u1.nsaf") == slurp(tmp / "u2.nsaf");

    // the CLI end to end: identical artifacts across runs, exit codes honored
    bool cli_ok = true;
#ifdef NSALPHA_CLI_PATH
    {
        const std::string cli = NSALPHA_CLI_PATH;
        std::ofstream cfgfile(tmp / "opt.json");
        cfgfile << R"({
  "mode": "optimize",
  "mesh": {"dim": 2, "n": 8, "m_steps": 16},
  "physics": {"nu": 0.5, "alpha": 0.1, "t_final": 0.5},
  "weights": {"gamma_u": 1.0, "gamma_T": 0.1, "gamma_f": 0.2},
  "cost": "J",
  "target": {"fixture": "tracking"},
  "initial": {"fixture": "taylor_green", "amplitude": 0.5},
  "scheme": "euler",
  "optimizer": {"max_iters": 60, "tol": 1e-7},
  "seed": 7
})";
        cfgfile.close();
        auto sh = [&](const std::string& cmd) { return std::system(cmd.c_str()); };
        const std::string base = cli + " optimize --config " + (tmp / "opt.json").string();
        cli_ok = cli_ok && sh(base + " --out " + (tmp / "c1").string() + " >/dev/null") == 0;
        cli_ok = cli_ok && sh(base + " --out " + (tmp / "c2").string() + " >/dev/null") == 0;
        cli_ok = cli_ok && slurp(tmp / "c1" / "history.csv") == slurp(tmp / "c2" / "history.csv");
        cli_ok = cli_ok && slurp(tmp / "c1" / "control.nsaf") == slurp(tmp / "c2" / "control.nsaf");
        // validation failure exits 1
        std::ofstream badfile(tmp / "bad.json");
        badfile << R"({"mode": "optimize", "physics": {"nu": -1}})";
        badfile.close();
        const int rc = sh(cli + " optimize --config " + (tmp / "bad.json").string() +
                          " 2>/dev/null");
        cli_ok = cli_ok && WIFEXITED(rc) && WEXITSTATUS(rc) == 1;
    }
#endif

    criterion(10, "determinism and round trips",
              ok && csv_same && snap_same && rt_same && cli_ok,
              std::string("csv ") + (csv_same ? "identical" : "DIFFER") + ", snapshots " +
                  (snap_same && rt_same ? "bit-exact" : "DIFFER") + ", cli " +
                  (cli_ok ? "deterministic, exit codes ok" : "FAILED"));
    fs::remove_all(tmp);
}

}  // namespace

int main() {
    const auto t0 = std::chrono::steady_clock::now();
    skew_and_transpose();
    operator_bound();
    energy_identity_and_bound();
    single_mode_decay();
    gradient_consistency();
    optimality_system();
    alpha_limit();
    determinism_and_roundtrip();
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%d/10 criteria passed in %.1f s\n", 10 - g_failures, secs);
    return g_failures == 0 ? 0 : 1;
}
