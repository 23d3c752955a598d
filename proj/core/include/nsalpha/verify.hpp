#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "nsalpha/optimizer.hpp"

namespace nsalpha {

struct CheckResult {
    std::string name;
    bool passed;
    double value;      // measured quantity
    double threshold;  // bound it must stay under (or order it must exceed)
};

// Central finite differences of the reduced cost along n_dirs random unit
// directions in L2(Q); returns the worst relative error against the adjoint
// gradient.  This is the independent oracle for the gradient: it touches
// only integrate_state and eval_cost.
double fd_gradient_max_rel_error(const ControlProblem& prob, const Trajectory& f0, int n_dirs,
                                 double eps, std::uint64_t seed);

// The full invariant suite on one desk-scale mesh: transforms, projector,
// skew-symmetry, transpose identity, single-mode decay, gradient vs finite
// differences, ball projection, energy-identity order.
std::vector<CheckResult> run_verification(int dim, int n, int m_steps, std::uint64_t seed);

bool all_passed(const std::vector<CheckResult>& results);
void print_check_table(std::ostream& os, const std::vector<CheckResult>& results);

}  // namespace nsalpha
