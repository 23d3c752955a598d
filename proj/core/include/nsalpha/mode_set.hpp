#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <vector>

#include "nsalpha/errors.hpp"

namespace nsalpha {

// Truncated Fourier basis on the periodic torus [0,2pi)^d, d in {2,3}.
//
// Modes are indexed flat, row-major over per-axis DFT indices; axis index
// i in [0,n) carries the integer wavenumber i <= n/2 ? i : i-n, so components
// lie in [-n/2+1, n/2].  The 2/3-rule dealias mask retains |k_i| <= floor(n/3)
// on every axis; the k = 0 mode is retained but flagged as the mean mode.
class ModeSet {
  public:
    static std::shared_ptr<const ModeSet> create(int dim, int n);

    int dim() const { return dim_; }
    int n() const { return n_; }
    std::size_t size() const { return size_; }  // n^dim
    int max_wave() const { return kmax_; }      // floor(n/3)

    const std::array<int, 3>& wave(std::size_t idx) const { return wave_[idx]; }
    double k2(std::size_t idx) const { return k2_[idx]; }
    bool retained(std::size_t idx) const { return mask_[idx] != 0; }
    std::size_t conjugate_index(std::size_t idx) const { return conj_[idx]; }

    std::size_t index_of(const std::array<int, 3>& k) const;

    bool compatible(const ModeSet& other) const {
        return dim_ == other.dim_ && n_ == other.n_;
    }

  private:
    ModeSet(int dim, int n);

    int dim_, n_, kmax_;
    std::size_t size_;
    std::vector<std::array<int, 3>> wave_;
    std::vector<double> k2_;
    std::vector<std::uint8_t> mask_;
    std::vector<std::size_t> conj_;
};

using ModeSetPtr = std::shared_ptr<const ModeSet>;

inline void require_compatible(const ModeSet& a, const ModeSet& b, const char* where) {
    if (!a.compatible(b))
        throw DimensionError(std::string(where) + ": fields live on different mode sets");
}

}  // namespace nsalpha
