#pragma once

#include "nsalpha/spectral_field.hpp"

namespace nsalpha {

// Pseudospectral transforms backed by FFTW (c2c, cached plans, reentrant).
// to_physical evaluates u(x_j) = sum_k c(k) exp(i k.x_j) and keeps the real
// part; to_spectral is the inverse DFT scaled by 1/N with Hermitian
// symmetrization, so to_spectral(to_physical(u)) == u for Hermitian input.

GridField to_physical(const SpectralField& u);
inline GridField to_physical(const SolenoidalField& u) { return to_physical(u.coeffs()); }

SpectralField to_spectral(const GridField& g, ModeSetPtr modes);

}  // namespace nsalpha
