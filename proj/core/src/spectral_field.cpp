#include "nsalpha/spectral_field.hpp"

#include <cmath>

#include "nsalpha/transform.hpp"

namespace nsalpha {

SolenoidalField& SolenoidalField::operator+=(const SolenoidalField& o) {
    require_compatible(modes(), o.modes(), "operator+=");
    auto a = raw_.data();
    auto b = o.raw_.data();
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    return *this;
}

SolenoidalField& SolenoidalField::operator-=(const SolenoidalField& o) {
    require_compatible(modes(), o.modes(), "operator-=");
    auto a = raw_.data();
    auto b = o.raw_.data();
    for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
    return *this;
}

SolenoidalField& SolenoidalField::operator*=(double s) {
    for (auto& c : raw_.data()) c *= s;
    return *this;
}

void SolenoidalField::add_scaled(double s, const SolenoidalField& o) {
    require_compatible(modes(), o.modes(), "add_scaled");
    auto a = raw_.data();
    auto b = o.raw_.data();
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += s * b[i];
}

bool SolenoidalField::finite() const {
    for (const auto& c : raw_.data())
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
    return true;
}

SolenoidalField leray_project(const SpectralField& raw) {
    const ModeSet& ms = raw.modes();
    const int d = ms.dim();
    SpectralField out = raw;

    for (std::size_t i = 0; i < ms.size(); ++i) {
        if (!ms.retained(i) || ms.k2(i) == 0.0) {
            for (int c = 0; c < d; ++c) out.at(c, i) = 0.0;
            continue;
        }
        const auto& k = ms.wave(i);
        std::complex<double> kdot = 0.0;
        for (int c = 0; c < d; ++c) kdot += double(k[c]) * out.at(c, i);
        kdot /= ms.k2(i);
        for (int c = 0; c < d; ++c) out.at(c, i) -= double(k[c]) * kdot;
    }
    // Hermitian cleanup keeps reality exact after grid-space products.
    for (int c = 0; c < d; ++c) {
        auto span = out.component(c);
        for (std::size_t i = 0; i < ms.size(); ++i) {
            std::size_t j = ms.conjugate_index(i);
            if (j < i) continue;
            if (j == i) {
                span[i] = std::complex<double>(span[i].real(), 0.0);
            } else {
                auto avg = 0.5 * (span[i] + std::conj(span[j]));
                span[i] = avg;
                span[j] = std::conj(avg);
            }
        }
    }
    return SolenoidalField(std::move(out));
}

SolenoidalField adopt_validated(SpectralField raw, double tol) {
    const ModeSet& ms = raw.modes();
    const double scale = std::max(max_abs_coeff(raw), 1e-300);
    if (divergence_linf(raw) > tol * scale)
        throw DimensionError("adopt_validated: field is not divergence-free");
    for (std::size_t i = 0; i < ms.size(); ++i) {
        std::size_t j = ms.conjugate_index(i);
        for (int c = 0; c < ms.dim(); ++c) {
            if (std::abs(raw.at(c, i) - std::conj(raw.at(c, j))) > tol * scale)
                throw DimensionError("adopt_validated: field is not Hermitian (not real-valued)");
            if ((!ms.retained(i) || ms.k2(i) == 0.0) && std::abs(raw.at(c, i)) > tol * scale)
                throw DimensionError("adopt_validated: masked or mean mode is nonzero");
        }
    }
    return SolenoidalField(std::move(raw));
}

SolenoidalField helmholtz_apply(const SolenoidalField& u, double alpha) {
    const double a2 = alpha * alpha;
    return u.mapped([a2](double k2) { return 1.0 + a2 * k2; });
}

SolenoidalField helmholtz_solve(const SolenoidalField& u, double alpha) {
    const double a2 = alpha * alpha;
    return u.mapped([a2](double k2) { return 1.0 / (1.0 + a2 * k2); });
}

SpectralField helmholtz_apply(const SpectralField& u, double alpha) {
    const ModeSet& ms = u.modes();
    const double a2 = alpha * alpha;
    SpectralField out = u;
    for (int c = 0; c < ms.dim(); ++c) {
        auto span = out.component(c);
        for (std::size_t i = 0; i < ms.size(); ++i) span[i] *= 1.0 + a2 * ms.k2(i);
    }
    return out;
}

SolenoidalField stokes_apply(const SolenoidalField& u) {
    return u.mapped([](double k2) { return k2; });
}

SpectralField derivative(const SpectralField& u, int axis) {
    const ModeSet& ms = u.modes();
    SpectralField out = u;
    const std::complex<double> I(0.0, 1.0);
    for (int c = 0; c < ms.dim(); ++c) {
        auto span = out.component(c);
        for (std::size_t i = 0; i < ms.size(); ++i) span[i] *= I * double(ms.wave(i)[axis]);
    }
    return out;
}

double l2_inner(const SolenoidalField& u, const SolenoidalField& v) {
    require_compatible(u.modes(), v.modes(), "l2_inner");
    auto a = u.coeffs().data();
    auto b = v.coeffs().data();
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
    return s;
}

namespace {
template <typename W>
double weighted_norm(const SolenoidalField& u, W&& w) {
    const ModeSet& ms = u.modes();
    double s = 0.0;
    for (int c = 0; c < ms.dim(); ++c) {
        auto span = u.coeffs().component(c);
        for (std::size_t i = 0; i < ms.size(); ++i) s += w(ms.k2(i)) * std::norm(span[i]);
    }
    return std::sqrt(s);
}
}  // namespace

double l2_norm(const SolenoidalField& u) {
    return weighted_norm(u, [](double) { return 1.0; });
}
double v_norm(const SolenoidalField& u) {
    return weighted_norm(u, [](double k2) { return k2; });
}
double da_norm(const SolenoidalField& u) {
    return weighted_norm(u, [](double k2) { return k2 * k2; });
}
double da_dual_norm(const SolenoidalField& u) {
    return weighted_norm(u, [](double k2) { return k2 > 0 ? 1.0 / (k2 * k2) : 0.0; });
}

double l2_norm(const SpectralField& u) {
    double s = 0.0;
    for (const auto& c : u.data()) s += std::norm(c);
    return std::sqrt(s);
}

double l4_norm(const SolenoidalField& u) {
    GridField g = to_physical(u);
    double s = 0.0;
    for (std::size_t i = 0; i < g.points; ++i) {
        double m2 = 0.0;
        for (int c = 0; c < g.dim; ++c) m2 += g.at(c, i) * g.at(c, i);
        s += m2 * m2;
    }
    return std::pow(s / static_cast<double>(g.points), 0.25);
}

double divergence_linf(const SpectralField& u) {
    const ModeSet& ms = u.modes();
    double m = 0.0;
    for (std::size_t i = 0; i < ms.size(); ++i) {
        const auto& k = ms.wave(i);
        std::complex<double> kdot = 0.0;
        for (int c = 0; c < ms.dim(); ++c) kdot += double(k[c]) * u.at(c, i);
        m = std::max(m, std::abs(kdot));
    }
    return m;
}

double max_abs_coeff(const SpectralField& u) {
    double m = 0.0;
    for (const auto& c : u.data()) m = std::max(m, std::abs(c));
    return m;
}

}  // namespace nsalpha

// --- Trajectory algebra -----------------------------------------------------

#include "nsalpha/trajectory.hpp"

namespace nsalpha {

Trajectory& Trajectory::operator+=(const Trajectory& o) {
    require_same_mesh(*this, o, "Trajectory::operator+=");
    for (int j = 0; j <= m_steps(); ++j) at(j) += o.at(j);
    return *this;
}

Trajectory& Trajectory::operator-=(const Trajectory& o) {
    require_same_mesh(*this, o, "Trajectory::operator-=");
    for (int j = 0; j <= m_steps(); ++j) at(j) -= o.at(j);
    return *this;
}

Trajectory& Trajectory::operator*=(double s) {
    for (int j = 0; j <= m_steps(); ++j) at(j) *= s;
    return *this;
}

void Trajectory::add_scaled(double s, const Trajectory& o) {
    require_same_mesh(*this, o, "Trajectory::add_scaled");
    for (int j = 0; j <= m_steps(); ++j) at(j).add_scaled(s, o.at(j));
}

double q_inner(const Trajectory& a, const Trajectory& b) {
    require_same_mesh(a, b, "q_inner");
    const int m = a.m_steps();
    double s = 0.0;
    for (int j = 0; j <= m; ++j)
        s += trapezoid_weight(j, m) * l2_inner(a.at(j), b.at(j));
    return s * a.dt();
}

double q_norm(const Trajectory& a) { return std::sqrt(std::max(q_inner(a, a), 0.0)); }

}  // namespace nsalpha
