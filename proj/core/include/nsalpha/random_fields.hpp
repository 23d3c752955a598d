#pragma once

#include <cstdint>
#include <random>

#include "nsalpha/trajectory.hpp"

namespace nsalpha {

// Random smooth solenoidal field: complex Gaussian coefficients with
// amplitude (1+|k|^2)^{-decay} on retained modes, Leray-projected and
// normalized to the requested L^2 norm.  Deterministic for a given engine
// state (std::mt19937_64 is bit-stable across platforms).
SolenoidalField random_solenoidal(ModeSetPtr modes, std::mt19937_64& rng,
                                  double decay = 2.0, double norm = 1.0);

Trajectory random_trajectory(ModeSetPtr modes, double t0, double t_final, int m_steps,
                             std::mt19937_64& rng, double decay = 2.0, double norm = 1.0);

}  // namespace nsalpha
