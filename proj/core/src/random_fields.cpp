#include "nsalpha/random_fields.hpp"

#include <cmath>

namespace nsalpha {

SolenoidalField random_solenoidal(ModeSetPtr modes, std::mt19937_64& rng,
                                  double decay, double norm) {
    SpectralField raw(modes);
    const ModeSet& ms = *modes;
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (std::size_t i = 0; i < ms.size(); ++i) {
        if (!ms.retained(i) || ms.k2(i) == 0.0) continue;
        const double amp = std::pow(1.0 + ms.k2(i), -decay);
        for (int c = 0; c < ms.dim(); ++c) {
            // draw for every mode; the Hermitian cleanup in leray_project
            // pairs (k, -k) deterministically
            raw.at(c, i) = std::complex<double>(gauss(rng), gauss(rng)) * amp;
        }
    }
    SolenoidalField f = leray_project(raw);
    const double n0 = l2_norm(f);
    if (n0 > 0 && norm > 0) f *= norm / n0;
    return f;
}

Trajectory random_trajectory(ModeSetPtr modes, double t0, double t_final, int m_steps,
                             std::mt19937_64& rng, double decay, double norm) {
    std::vector<SolenoidalField> fields;
    fields.reserve(static_cast<std::size_t>(m_steps) + 1);
    for (int j = 0; j <= m_steps; ++j)
        fields.push_back(random_solenoidal(modes, rng, decay, norm));
    return Trajectory(t0, t_final, std::move(fields));
}

}  // namespace nsalpha
