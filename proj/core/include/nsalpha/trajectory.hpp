#pragma once

#include <vector>

#include "nsalpha/spectral_field.hpp"

namespace nsalpha {

// Uniform-in-time sequence of fields: m_steps + 1 samples on [t0, t_final].
class Trajectory {
  public:
    Trajectory(double t0, double t_final, std::vector<SolenoidalField> fields)
        : t0_(t0), t_final_(t_final), fields_(std::move(fields)) {
        if (fields_.size() < 2 || !(t_final_ > t0_))
            throw DimensionError("Trajectory: need m_steps >= 1 and t_final > t0");
        for (const auto& f : fields_)
            require_compatible(f.modes(), fields_.front().modes(), "Trajectory");
    }

    static Trajectory constant(double t0, double t_final, int m_steps,
                               const SolenoidalField& value) {
        return Trajectory(t0, t_final,
                          std::vector<SolenoidalField>(static_cast<std::size_t>(m_steps) + 1, value));
    }
    static Trajectory zero(double t0, double t_final, int m_steps, ModeSetPtr modes) {
        return constant(t0, t_final, m_steps, SolenoidalField::zero(std::move(modes)));
    }

    double t0() const { return t0_; }
    double t_final() const { return t_final_; }
    int m_steps() const { return static_cast<int>(fields_.size()) - 1; }
    double dt() const { return (t_final_ - t0_) / m_steps(); }
    double time(int j) const { return t0_ + dt() * j; }

    const ModeSet& modes() const { return fields_.front().modes(); }
    const ModeSetPtr& modes_ptr() const { return fields_.front().modes_ptr(); }

    const SolenoidalField& at(int j) const { return fields_[static_cast<std::size_t>(j)]; }
    SolenoidalField& at(int j) { return fields_[static_cast<std::size_t>(j)]; }
    const std::vector<SolenoidalField>& fields() const { return fields_; }

    bool same_mesh(const Trajectory& o) const {
        return modes().compatible(o.modes()) && m_steps() == o.m_steps() &&
               t0_ == o.t0_ && t_final_ == o.t_final_;
    }

    Trajectory& operator+=(const Trajectory& o);
    Trajectory& operator-=(const Trajectory& o);
    Trajectory& operator*=(double s);
    friend Trajectory operator+(Trajectory a, const Trajectory& b) { return a += b; }
    friend Trajectory operator-(Trajectory a, const Trajectory& b) { return a -= b; }
    friend Trajectory operator*(double s, Trajectory a) { return a *= s; }
    void add_scaled(double s, const Trajectory& o);

  private:
    double t0_, t_final_;
    std::vector<SolenoidalField> fields_;
};

inline void require_same_mesh(const Trajectory& a, const Trajectory& b, const char* where) {
    if (!a.same_mesh(b))
        throw DimensionError(std::string(where) + ": trajectories on different meshes");
}

// Discrete L^2(Q) inner product: trapezoid in time, spectral Parseval in
// space.  This single definition backs gradients, projections and residuals.
double q_inner(const Trajectory& a, const Trajectory& b);
double q_norm(const Trajectory& a);

// Trapezoid weight: 1/2 at the endpoints, 1 inside.
inline double trapezoid_weight(int j, int m_steps) {
    return (j == 0 || j == m_steps) ? 0.5 : 1.0;
}

}  // namespace nsalpha
