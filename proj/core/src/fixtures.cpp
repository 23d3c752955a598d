#include "nsalpha/fixtures.hpp"

#include <cmath>

#include "nsalpha/random_fields.hpp"
#include "nsalpha/transform.hpp"

namespace nsalpha {

SolenoidalField single_mode_field(ModeSetPtr modes, const std::array<int, 3>& k,
                                  double amplitude) {
    const int d = modes->dim();
    // a cos(k.x) has coefficients a/2 at +-k; pick a _|_ k deterministically
    std::array<double, 3> a{0, 0, 0};
    if (k[1] == 0 && k[2] == 0) {
        a[1] = 1.0;
    } else {
        a[0] = double(k[1]);
        a[1] = double(-k[0]);
        if (d == 3 && a[0] == 0 && a[1] == 0) a[0] = 1.0;
    }
    double nrm = 0.0;
    for (int c = 0; c < d; ++c) nrm += a[c] * a[c];
    nrm = std::sqrt(nrm);

    SpectralField raw(modes);
    const std::size_t ip = modes->index_of(k);
    std::array<int, 3> mk{-k[0], -k[1], -k[2]};
    const std::size_t im = modes->index_of(mk);
    for (int c = 0; c < d; ++c) {
        const double v = 0.5 * amplitude * a[c] / nrm;
        raw.at(c, ip) = v;
        raw.at(c, im) = v;
    }
    return leray_project(raw);
}

namespace {

SolenoidalField taylor_green_field(const ModeSetPtr& modes, double amplitude) {
    // 2d: (cos x sin y, -sin x cos y); 3d: (cos x sin y sin z, -sin x cos y sin z, 0);
    // assembled on the grid, then projected
    const int d = modes->dim();
    GridField g(d, modes->n());
    const int n = modes->n();
    const double h = 2.0 * M_PI / n;
    std::size_t idx = 0;
    if (d == 2) {
        for (int i0 = 0; i0 < n; ++i0)
            for (int i1 = 0; i1 < n; ++i1, ++idx) {
                const double x = i0 * h, y = i1 * h;
                g.at(0, idx) = amplitude * std::cos(x) * std::sin(y);
                g.at(1, idx) = -amplitude * std::sin(x) * std::cos(y);
            }
    } else {
        for (int i0 = 0; i0 < n; ++i0)
            for (int i1 = 0; i1 < n; ++i1)
                for (int i2 = 0; i2 < n; ++i2, ++idx) {
                    const double x = i0 * h, y = i1 * h, z = i2 * h;
                    g.at(0, idx) = amplitude * std::cos(x) * std::sin(y) * std::sin(z);
                    g.at(1, idx) = -amplitude * std::sin(x) * std::cos(y) * std::sin(z);
                    g.at(2, idx) = 0.0;
                }
    }
    return leray_project(to_spectral(g, modes));
}

}  // namespace

SolenoidalField fixture_field(const std::string& name, ModeSetPtr modes, double amplitude,
                              std::uint64_t seed) {
    if (name == "zero") return SolenoidalField::zero(std::move(modes));
    if (name == "single_mode") return single_mode_field(std::move(modes), {1, 0, 0}, amplitude);
    if (name == "taylor_green") return taylor_green_field(modes, amplitude);
    if (name == "random") {
        std::mt19937_64 rng(seed);
        return random_solenoidal(std::move(modes), rng, 2.0, amplitude);
    }
    throw DimensionError("fixture_field: unknown fixture '" + name + "'");
}

Trajectory modulated_control(const SolenoidalField& profile, double t0, double t_final,
                             int m_steps) {
    std::vector<SolenoidalField> fields;
    fields.reserve(static_cast<std::size_t>(m_steps) + 1);
    const double T = t_final - t0;
    for (int j = 0; j <= m_steps; ++j) {
        const double t = t0 + T * j / m_steps;
        fields.push_back(std::sin(M_PI * (t - t0) / T) * profile);
    }
    return Trajectory(t0, t_final, std::move(fields));
}

TrackingFixture make_tracking_fixture(const SolenoidalField& u0, const PhysicalParams& p,
                                      int m_steps, TimeScheme scheme, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    SolenoidalField profile = random_solenoidal(u0.modes_ptr(), rng, 2.5, 0.5);
    Trajectory f_star = modulated_control(profile, 0.0, p.t_final, m_steps);
    StateSolution sol = integrate_state(u0, f_star, p, m_steps, scheme);
    SolenoidalField u_T = sol.u.at(m_steps);
    return TrackingFixture{std::move(f_star), std::move(sol.u), std::move(u_T), u0};
}

TrackingFixture make_tracking_fixture(ModeSetPtr modes, const PhysicalParams& p, int m_steps,
                                      TimeScheme scheme, std::uint64_t seed) {
    SolenoidalField u0 = fixture_field("taylor_green", std::move(modes), 0.5, seed);
    return make_tracking_fixture(u0, p, m_steps, scheme, seed);
}

}  // namespace nsalpha
