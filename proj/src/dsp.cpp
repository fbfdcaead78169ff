// SPDX-License-Identifier: Apache-2.0
#include "isac/dsp.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <mutex>

#include <fftw3.h>

namespace isac::dsp {

namespace {

std::mutex fftw_plan_mutex; // FFTW planning is not thread-safe

cvec run_fftw(const cvec& x, int sign) {
    const int n = static_cast<int>(x.size());
    cvec out(x.size());
    if (n == 0) return out;
    fftw_complex* in_buf = fftw_alloc_complex(n);
    fftw_complex* out_buf = fftw_alloc_complex(n);
    std::memcpy(in_buf, x.data(), sizeof(fftw_complex) * n);
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(fftw_plan_mutex);
        plan = fftw_plan_dft_1d(n, in_buf, out_buf, sign, FFTW_ESTIMATE | FFTW_PRESERVE_INPUT);
    }
    fftw_execute(plan);
    std::memcpy(out.data(), out_buf, sizeof(fftw_complex) * n);
    {
        std::lock_guard<std::mutex> lock(fftw_plan_mutex);
        fftw_destroy_plan(plan);
    }
    fftw_free(in_buf);
    fftw_free(out_buf);
    return out;
}

} // namespace

cvec fft(const cvec& x) { return run_fftw(x, FFTW_FORWARD); }

cvec ifft(const cvec& x) {
    cvec out = run_fftw(x, FFTW_BACKWARD);
    const double scale = 1.0 / static_cast<double>(x.size());
    for (auto& v : out) v *= scale;
    return out;
}

cvec czt_band(const cvec& x, double f_lo, double f_hi, int zoom_factor) {
    const std::size_t n = x.size();
    const auto m_count =
        static_cast<std::size_t>(std::llround((f_hi - f_lo) * zoom_factor)) + 1;
    cvec out(m_count);
    // Direct O(N*M) evaluation; band sizes in this pipeline are small enough
    // that a Bluestein factorization would not pay off.
    for (std::size_t m = 0; m < m_count; ++m) {
        const double f = f_lo + static_cast<double>(m) / zoom_factor;
        const double w = -2.0 * M_PI * f / static_cast<double>(n);
        std::complex<double> acc{0.0, 0.0};
        for (std::size_t k = 0; k < n; ++k) {
            const double ang = w * static_cast<double>(k);
            acc += x[k] * std::complex<double>(std::cos(ang), std::sin(ang));
        }
        out[m] = acc;
    }
    return out;
}

std::vector<double> hamming_periodic(std::size_t n) {
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i)
        w[i] = 0.54 - 0.46 * std::cos(2.0 * M_PI * static_cast<double>(i) /
                                      static_cast<double>(n));
    return w;
}

std::size_t peak_index(const cvec& v) {
    std::size_t best = 0;
    double best_mag = -1.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        double m = std::abs(v[i]);
        if (m > best_mag) {
            best_mag = m;
            best = i;
        }
    }
    return best;
}

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    if (n % 2 == 1) return v[n / 2];
    return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

} // namespace isac::dsp
