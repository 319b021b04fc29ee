#pragma once

#include <fftw3.h>

#include <map>
#include <mutex>

#include "common.hpp"

namespace disctomo::fft {

// Plan cache behind a mutex; execution via the new-array interface is
// thread-safe. Plans are created FFTW_ESTIMATE | FFTW_UNALIGNED so they can
// run on any caller-owned buffer.
namespace detail {
struct PlanCache {
    std::mutex mtx;
    std::map<std::pair<int, int>, fftw_plan> plans; // (n, sign) -> plan

    fftw_plan get(int n, int sign) {
        std::scoped_lock lk(mtx);
        auto key = std::make_pair(n, sign);
        auto it = plans.find(key);
        if (it != plans.end()) return it->second;
        std::vector<cplx> tmp(n);
        fftw_plan p = fftw_plan_dft_1d(
            n, reinterpret_cast<fftw_complex*>(tmp.data()),
            reinterpret_cast<fftw_complex*>(tmp.data()), sign,
            FFTW_ESTIMATE | FFTW_UNALIGNED);
        plans.emplace(key, p);
        return p;
    }
};

inline PlanCache& cache() {
    static PlanCache c;
    return c;
}
} // namespace detail

// In-place complex DFT, FFTW sign convention: forward (sign=-1) computes
// X_k = sum_j x_j e^{-2*pi*i*jk/n}. No normalization.
inline void dft(std::span<cplx> data, int sign) {
    const int n = static_cast<int>(data.size());
    fftw_plan p = detail::cache().get(n, sign);
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(data.data()),
                     reinterpret_cast<fftw_complex*>(data.data()));
}

inline void forward(std::span<cplx> data) { dft(data, FFTW_FORWARD); }
inline void inverse(std::span<cplx> data) { dft(data, FFTW_BACKWARD); }

// Fourier coefficients c_k, |k| <= kmax, of samples f(x_j) on the uniform
// grid x_j = x0 + j*(L/n), for a function of period L:
//   f(x) = sum_k c_k e^{2*pi*i*k*x/L}.
inline std::vector<cplx> coeffs_from_samples(std::span<const cplx> samples,
                                             double x0, double L, int kmax) {
    const int n = static_cast<int>(samples.size());
    std::vector<cplx> buf(samples.begin(), samples.end());
    forward(buf);
    std::vector<cplx> c(2 * kmax + 1);
    for (int k = -kmax; k <= kmax; ++k) {
        int idx = ((k % n) + n) % n;
        cplx phase = std::exp(-two_pi * I * double(k) * x0 / L);
        c[k + kmax] = buf[idx] / double(n) * phase;
    }
    return c;
}

// Inverse of coeffs_from_samples: sample sum_k c_k e^{2*pi*i*k*x/L} on the
// same uniform grid. Coefficients beyond the grid Nyquist are folded in
// exactly (evaluation on the grid aliases modes k and k+n up to the phase
// implied by x0).
inline std::vector<cplx> samples_from_coeffs(std::span<const cplx> c, int kmax,
                                             double x0, double L, int n) {
    std::vector<cplx> buf(n, 0.0);
    for (int k = -kmax; k <= kmax; ++k) {
        int idx = ((k % n) + n) % n;
        // phase from k (not idx) so folded modes keep the offset-grid phase
        buf[idx] += c[k + kmax] * std::exp(two_pi * I * double(k) * x0 / L);
    }
    inverse(buf);
    return buf;
}

} // namespace disctomo::fft
