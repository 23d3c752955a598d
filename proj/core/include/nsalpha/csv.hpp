#pragma once

#include <cstdio>
#include <fstream>
#include <string>

#include "nsalpha/alpha_sweep.hpp"
#include "nsalpha/errors.hpp"

namespace nsalpha {

// CSV writers: '.' decimal, full double precision (17 significant digits),
// so files serve as lossless regression baselines.

inline std::string csv_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline void write_energy_csv(const std::string& path, const EnergyLedger& ledger) {
    std::ofstream os(path);
    if (!os) throw IoError("write_energy_csv: cannot open " + path);
    os << "step,t,kinetic,gradient,dissipation,work,residual\n";
    for (const auto& r : ledger.rows)
        os << r.step << ',' << csv_double(r.t) << ',' << csv_double(r.kinetic) << ','
           << csv_double(r.gradient) << ',' << csv_double(r.dissipation) << ','
           << csv_double(r.work) << ',' << csv_double(r.residual) << '\n';
}

inline void write_history_csv(const std::string& path, const OptimalityReport& rep) {
    std::ofstream os(path);
    if (!os) throw IoError("write_history_csv: cannot open " + path);
    os << "iter,J,step,grad_norm,vi_residual\n";
    for (const auto& r : rep.history)
        os << r.iter << ',' << csv_double(r.cost) << ',' << csv_double(r.step) << ','
           << csv_double(r.grad_norm) << ',' << csv_double(r.vi_residual) << '\n';
}

inline void write_ee7_csv(const std::string& path, const std::vector<Ee7Monitors>& rows) {
    std::ofstream os(path);
    if (!os) throw IoError("write_ee7_csv: cannot open " + path);
    os << "alpha,sup_l2,sup_alpha2_gradl2,l2l2_grad,l2l2_alpha2_A\n";
    for (const auto& m : rows)
        os << csv_double(m.alpha) << ',' << csv_double(m.sup_l2) << ','
           << csv_double(m.sup_alpha2_grad_l2) << ',' << csv_double(m.l2l2_grad) << ','
           << csv_double(m.l2l2_alpha2_a) << '\n';
}

inline void write_sweep_csv(const std::string& path, const SweepResult& res) {
    std::ofstream os(path);
    if (!os) throw IoError("write_sweep_csv: cannot open " + path);
    os << "alpha,J,gap_state_L2V,gap_state_LinfL2,gap_adj_L2V,gap_adj_L2L2,ee7_sup,iters,"
          "converged\n";
    for (const auto& r : res.rows)
        os << csv_double(r.alpha) << ',' << csv_double(r.cost) << ','
           << csv_double(r.gap_state_l2v) << ',' << csv_double(r.gap_state_linf_l2) << ','
           << csv_double(r.gap_adj_l2v) << ',' << csv_double(r.gap_adj_l2l2) << ','
           << csv_double(r.ee7.sup_l2 + r.ee7.sup_alpha2_grad_l2) << ',' << r.iters << ','
           << (r.converged ? 1 : 0) << '\n';
}

// Same table, whitespace-separated with a '#' header, for gnuplot.
inline void write_sweep_dat(const std::string& path, const SweepResult& res) {
    std::ofstream os(path);
    if (!os) throw IoError("write_sweep_dat: cannot open " + path);
    os << "# alpha J gap_state_L2V gap_state_LinfL2 gap_adj_L2V gap_adj_L2L2 ee7_sup iters "
          "converged\n";
    for (const auto& r : res.rows)
        os << csv_double(r.alpha) << ' ' << csv_double(r.cost) << ' '
           << csv_double(r.gap_state_l2v) << ' ' << csv_double(r.gap_state_linf_l2) << ' '
           << csv_double(r.gap_adj_l2v) << ' ' << csv_double(r.gap_adj_l2l2) << ' '
           << csv_double(r.ee7.sup_l2 + r.ee7.sup_alpha2_grad_l2) << ' ' << r.iters << ' '
           << (r.converged ? 1 : 0) << '\n';
}

}  // namespace nsalpha
