#pragma once

#include <complex>
#include <memory>
#include <span>
#include <vector>

#include "nsalpha/mode_set.hpp"

namespace nsalpha {

// Normalization convention, used consistently by every norm, inner product
// and transform in this library: a field is u(x) = sum_k c(k) exp(i k.x),
// and (u,v) := sum_k c_u(k) . conj(c_v(k)) = (2pi)^-d integral of u.v.
// All L^p quadratures are volume-averaged the same way.

// Raw spectral vector field: one complex coefficient per mode per component,
// component-major storage, no structural invariants.
class SpectralField {
  public:
    explicit SpectralField(ModeSetPtr modes)
        : modes_(std::move(modes)), c_(modes_->size() * modes_->dim()) {}

    const ModeSet& modes() const { return *modes_; }
    const ModeSetPtr& modes_ptr() const { return modes_; }

    std::complex<double>& at(int comp, std::size_t idx) {
        return c_[static_cast<std::size_t>(comp) * modes_->size() + idx];
    }
    const std::complex<double>& at(int comp, std::size_t idx) const {
        return c_[static_cast<std::size_t>(comp) * modes_->size() + idx];
    }
    std::span<std::complex<double>> component(int comp) {
        return {c_.data() + static_cast<std::size_t>(comp) * modes_->size(), modes_->size()};
    }
    std::span<const std::complex<double>> component(int comp) const {
        return {c_.data() + static_cast<std::size_t>(comp) * modes_->size(), modes_->size()};
    }
    std::span<const std::complex<double>> data() const { return c_; }
    std::span<std::complex<double>> data() { return c_; }

  private:
    ModeSetPtr modes_;
    std::vector<std::complex<double>> c_;
};

// Real-space samples on the uniform n^d grid, component-major.
struct GridField {
    GridField(int dim_, int n_) : dim(dim_), n(n_) {
        std::size_t N = 1;
        for (int a = 0; a < dim; ++a) N *= static_cast<std::size_t>(n);
        points = N;
        v.assign(N * static_cast<std::size_t>(dim), 0.0);
    }
    double& at(int comp, std::size_t idx) { return v[static_cast<std::size_t>(comp) * points + idx]; }
    double at(int comp, std::size_t idx) const { return v[static_cast<std::size_t>(comp) * points + idx]; }

    int dim, n;
    std::size_t points;
    std::vector<double> v;
};

// Spectral coefficients of a real, mean-free, divergence-free vector field.
// Invariants, maintained by construction:
//   k . c(k) = 0, c(-k) = conj(c(k)), c(0) = 0, masked modes zero.
class SolenoidalField {
  public:
    static SolenoidalField zero(ModeSetPtr modes) { return SolenoidalField(std::move(modes)); }

    const ModeSet& modes() const { return raw_.modes(); }
    const ModeSetPtr& modes_ptr() const { return raw_.modes_ptr(); }
    const SpectralField& coeffs() const { return raw_; }

    std::complex<double> at(int comp, std::size_t idx) const { return raw_.at(comp, idx); }

    // Linear algebra (invariants are preserved by linearity).
    SolenoidalField& operator+=(const SolenoidalField& o);
    SolenoidalField& operator-=(const SolenoidalField& o);
    SolenoidalField& operator*=(double s);
    friend SolenoidalField operator+(SolenoidalField a, const SolenoidalField& b) { return a += b; }
    friend SolenoidalField operator-(SolenoidalField a, const SolenoidalField& b) { return a -= b; }
    friend SolenoidalField operator*(double s, SolenoidalField a) { return a *= s; }

    void add_scaled(double s, const SolenoidalField& o);  // *this += s*o

    // Applies a real isotropic multiplier m(|k|^2) to every retained mode.
    template <typename F>
    SolenoidalField mapped(F&& mult) const {
        SolenoidalField out(*this);
        const ModeSet& ms = modes();
        for (int c = 0; c < ms.dim(); ++c) {
            auto span = out.raw_.component(c);
            for (std::size_t i = 0; i < ms.size(); ++i) span[i] *= mult(ms.k2(i));
        }
        return out;
    }

    bool finite() const;

  private:
    explicit SolenoidalField(ModeSetPtr modes) : raw_(std::move(modes)) {}
    explicit SolenoidalField(SpectralField raw) : raw_(std::move(raw)) {}
    SpectralField raw_;

    friend SolenoidalField leray_project(const SpectralField&);
    friend SolenoidalField adopt_validated(SpectralField, double);
};

// Adopts coefficients verbatim after checking the invariants within tol
// (relative to the largest coefficient).  Used where bit-exactness matters
// (snapshot IO); everything else goes through leray_project.
SolenoidalField adopt_validated(SpectralField raw, double tol = 1e-10);

// Leray projection P = I - k k^T/|k|^2 per mode, composed with dealiasing,
// mean removal and Hermitian symmetrization.  This is the only door into
// SolenoidalField from raw coefficients.
SolenoidalField leray_project(const SpectralField& raw);

// Helmholtz operator (I - alpha^2 Lap), multiplier 1 + alpha^2 |k|^2.
SolenoidalField helmholtz_apply(const SolenoidalField& u, double alpha);
SolenoidalField helmholtz_solve(const SolenoidalField& u, double alpha);
SpectralField helmholtz_apply(const SpectralField& u, double alpha);

// Stokes operator A = -P Lap, multiplier |k|^2 on solenoidal fields.
SolenoidalField stokes_apply(const SolenoidalField& u);

// Spectral derivative d/dx_axis (multiplier i k_axis).
SpectralField derivative(const SpectralField& u, int axis);
inline SpectralField derivative(const SolenoidalField& u, int axis) {
    return derivative(u.coeffs(), axis);
}

// Norms and inner products (volume-averaged; see the convention above).
double l2_inner(const SolenoidalField& u, const SolenoidalField& v);
double l2_norm(const SolenoidalField& u);
double v_norm(const SolenoidalField& u);        // ||grad u||
double da_norm(const SolenoidalField& u);       // ||A u||
double da_dual_norm(const SolenoidalField& u);  // ||A^{-1} u||, the D(A)' norm
double l4_norm(const SolenoidalField& u);       // physical-space quadrature
double l2_norm(const SpectralField& u);

// Max |k.c(k)| over modes; zero to roundoff for SolenoidalField.
double divergence_linf(const SpectralField& u);
inline double divergence_linf(const SolenoidalField& u) { return divergence_linf(u.coeffs()); }
double max_abs_coeff(const SpectralField& u);
inline double max_abs_coeff(const SolenoidalField& u) { return max_abs_coeff(u.coeffs()); }

}  // namespace nsalpha
