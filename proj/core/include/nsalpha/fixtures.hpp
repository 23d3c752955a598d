#pragma once

#include <cstdint>
#include <string>

#include "nsalpha/state_solver.hpp"

namespace nsalpha {

// Built-in fields, shipped in code so runs are reproducible without data
// files.  Names: "zero", "single_mode" (a cos(k.x), a _|_ k, |k| = 1),
// "taylor_green" (the classic two-mode cellular flow), "random" (smooth
// random solenoidal field controlled by seed).
SolenoidalField fixture_field(const std::string& name, ModeSetPtr modes, double amplitude,
                              std::uint64_t seed = 1234);

// Single mode a cos(k.x) with a _|_ k, for which B(u,u) = 0 and the state
// decays as exp(-nu |k|^2 t) for every alpha.
SolenoidalField single_mode_field(ModeSetPtr modes, const std::array<int, 3>& k,
                                  double amplitude);

// A time-modulated smooth control used to manufacture tracking targets.
Trajectory modulated_control(const SolenoidalField& profile, double t0, double t_final,
                             int m_steps);

// Self-generated tracking target: run the state solver with a known control
// f*, then use the resulting trajectory as u_d and its endpoint as u_T.
struct TrackingFixture {
    Trajectory f_star;
    Trajectory u_d;
    SolenoidalField u_T;
    SolenoidalField u0;
};

TrackingFixture make_tracking_fixture(const SolenoidalField& u0, const PhysicalParams& p,
                                      int m_steps, TimeScheme scheme, std::uint64_t seed = 1234);

// Convenience: Taylor-Green initial state of amplitude 1/2.
TrackingFixture make_tracking_fixture(ModeSetPtr modes, const PhysicalParams& p, int m_steps,
                                      TimeScheme scheme, std::uint64_t seed = 1234);

}  // namespace nsalpha
