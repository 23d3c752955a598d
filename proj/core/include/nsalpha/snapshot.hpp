#pragma once

#include <string>

#include "nsalpha/trajectory.hpp"

namespace nsalpha {

// Binary field snapshot, bit-exact round trip.  Layout (little-endian):
//   magic "NSAF" | u32 version (=1) | u32 dim | u32 n | u32 count
// then count fields, each written mode-major in row-major axis-index order
// (axis index i carries wavenumber i <= n/2 ? i : i - n), with the dim
// complex components of a mode interleaved as float64 (re, im) pairs.
// Full layout documented in docs/formats.md.

void write_snapshot(const std::string& path, const std::vector<SolenoidalField>& fields);
void write_snapshot(const std::string& path, const SolenoidalField& field);
void write_snapshot(const std::string& path, const Trajectory& traj);

std::vector<SolenoidalField> read_snapshot(const std::string& path,
                                           ModeSetPtr expected_modes = nullptr);
SolenoidalField read_snapshot_field(const std::string& path,
                                    ModeSetPtr expected_modes = nullptr);
Trajectory read_snapshot_trajectory(const std::string& path, double t0, double t_final,
                                    ModeSetPtr expected_modes = nullptr);

}  // namespace nsalpha
