#include "nsalpha/mode_set.hpp"

#include <cmath>
#include <cstdint>

namespace nsalpha {

ModeSet::ModeSet(int dim, int n) : dim_(dim), n_(n) {
    if (dim != 2 && dim != 3) throw DimensionError("ModeSet: dim must be 2 or 3");
    if (n < 4 || n % 2 != 0) throw DimensionError("ModeSet: n must be even and >= 4");

    kmax_ = n / 3;  // |k_i| > n/3 is masked out
    size_ = 1;
    for (int a = 0; a < dim; ++a) size_ *= static_cast<std::size_t>(n);

    wave_.resize(size_);
    k2_.resize(size_);
    mask_.resize(size_);
    conj_.resize(size_);

    for (std::size_t idx = 0; idx < size_; ++idx) {
        std::size_t rem = idx, cidx = 0;
        std::array<int, 3> k{0, 0, 0};
        bool keep = true;
        // row-major: axis 0 outermost
        std::size_t stride = size_;
        for (int a = 0; a < dim; ++a) {
            stride /= static_cast<std::size_t>(n);
            int ia = static_cast<int>(rem / stride);
            rem %= stride;
            k[a] = ia <= n / 2 ? ia : ia - n;
            if (std::abs(k[a]) > kmax_) keep = false;
            int ca = (n - ia) % n;
            cidx += static_cast<std::size_t>(ca) * stride;
        }
        wave_[idx] = k;
        double s = 0;
        for (int a = 0; a < dim; ++a) s += double(k[a]) * k[a];
        k2_[idx] = s;
        mask_[idx] = keep ? 1 : 0;
        conj_[idx] = cidx;
    }
}

std::shared_ptr<const ModeSet> ModeSet::create(int dim, int n) {
    return std::shared_ptr<const ModeSet>(new ModeSet(dim, n));
}

std::size_t ModeSet::index_of(const std::array<int, 3>& k) const {
    std::size_t idx = 0;
    for (int a = 0; a < dim_; ++a) {
        int ia = k[a] >= 0 ? k[a] : k[a] + n_;
        if (ia < 0 || ia >= n_)
            throw DimensionError("ModeSet::index_of: wavenumber out of range");
        idx = idx * static_cast<std::size_t>(n_) + static_cast<std::size_t>(ia);
    }
    return idx;
}

}  // namespace nsalpha
