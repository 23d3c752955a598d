#include "nsalpha/transform.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>

#include "nsalpha/errors.hpp"

namespace nsalpha {
namespace {

struct FftwDeleter {
    void operator()(fftw_complex* p) const { fftw_free(p); }
};
using FftwBuffer = std::unique_ptr<fftw_complex[], FftwDeleter>;

FftwBuffer make_buffer(std::size_t n) {
    return FftwBuffer(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n)));
}

// Plan creation is not thread-safe; execution through fftw_execute_dft on
// per-call buffers is.  Plans are cached per (dim, n) and kept alive with
// their planning buffers so new-array execution sees the same alignment.
class PlanCache {
  public:
    static PlanCache& instance() {
        static PlanCache cache;
        return cache;
    }

    struct Entry {
        fftw_plan forward = nullptr;   // FFTW_FORWARD  (sign -1)
        fftw_plan backward = nullptr;  // FFTW_BACKWARD (sign +1)
        FftwBuffer in, out;

        Entry() = default;
        Entry(const Entry&) = delete;
        Entry& operator=(const Entry&) = delete;
        ~Entry() {
            if (forward) fftw_destroy_plan(forward);
            if (backward) fftw_destroy_plan(backward);
        }
    };

    const Entry& get(int dim, int n, std::size_t size) {
        std::lock_guard<std::mutex> lock(mu_);
        auto key = std::make_pair(dim, n);
        auto it = entries_.find(key);
        if (it != entries_.end()) return *it->second;

        auto e = std::make_unique<Entry>();
        e->in = make_buffer(size);
        e->out = make_buffer(size);
        int dims[3] = {n, n, n};
        e->forward = fftw_plan_dft(dim, dims, e->in.get(), e->out.get(),
                                   FFTW_FORWARD, FFTW_ESTIMATE);
        e->backward = fftw_plan_dft(dim, dims, e->in.get(), e->out.get(),
                                    FFTW_BACKWARD, FFTW_ESTIMATE);
        auto [pos, _] = entries_.emplace(key, std::move(e));
        return *pos->second;
    }

  private:
    PlanCache() = default;
    ~PlanCache() {
        entries_.clear();
        fftw_cleanup();
    }
    std::mutex mu_;
    std::map<std::pair<int, int>, std::unique_ptr<Entry>> entries_;
};

}  // namespace

GridField to_physical(const SpectralField& u) {
    const ModeSet& ms = u.modes();
    const std::size_t N = ms.size();
    const auto& plans = PlanCache::instance().get(ms.dim(), ms.n(), N);

    GridField g(ms.dim(), ms.n());
    auto in = make_buffer(N);
    auto out = make_buffer(N);
    for (int c = 0; c < ms.dim(); ++c) {
        auto span = u.component(c);
        for (std::size_t i = 0; i < N; ++i) {
            in[i][0] = span[i].real();
            in[i][1] = span[i].imag();
        }
        fftw_execute_dft(plans.backward, in.get(), out.get());
        for (std::size_t i = 0; i < N; ++i) g.at(c, i) = out[i][0];
    }
    return g;
}

SpectralField to_spectral(const GridField& g, ModeSetPtr modes) {
    if (g.dim != modes->dim() || g.n != modes->n())
        throw DimensionError("to_spectral: grid shape does not match mode set");
    const ModeSet& ms = *modes;
    const std::size_t N = ms.size();
    const auto& plans = PlanCache::instance().get(ms.dim(), ms.n(), N);

    SpectralField u(std::move(modes));
    auto in = make_buffer(N);
    auto out = make_buffer(N);
    const double scale = 1.0 / static_cast<double>(N);
    for (int c = 0; c < ms.dim(); ++c) {
        for (std::size_t i = 0; i < N; ++i) {
            in[i][0] = g.at(c, i);
            in[i][1] = 0.0;
        }
        fftw_execute_dft(plans.forward, in.get(), out.get());
        auto span = u.component(c);
        for (std::size_t i = 0; i < N; ++i)
            span[i] = std::complex<double>(out[i][0] * scale, out[i][1] * scale);
        // exact Hermitian pairing: real input makes this a roundoff cleanup
        for (std::size_t i = 0; i < N; ++i) {
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
    return u;
}

}  // namespace nsalpha
