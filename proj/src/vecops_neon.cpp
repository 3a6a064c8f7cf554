// NEON variants of the vector kernels (aarch64 only, where NEON is baseline).

#include "vecops_impl.hpp"

#if defined(SPECDEC_HAVE_NEON_TU)

#include <arm_neon.h>

#include <algorithm>
#include <cmath>
#include <cstddef>

namespace specdec::vecops::neon {

double sum(std::span<const double> v) {
    const std::size_t n = v.size();
    std::size_t i = 0;
    float64x2_t acc = vdupq_n_f64(0.0);
    for (; i + 2 <= n; i += 2) acc = vaddq_f64(acc, vld1q_f64(v.data() + i));
    double r = vaddvq_f64(acc);
    for (; i < n; ++i) r += v[i];
    return r;
}

double dot(std::span<const double> a, std::span<const double> b) {
    const std::size_t n = a.size();
    std::size_t i = 0;
    float64x2_t acc = vdupq_n_f64(0.0);
    for (; i + 2 <= n; i += 2) acc = vfmaq_f64(acc, vld1q_f64(a.data() + i), vld1q_f64(b.data() + i));
    double r = vaddvq_f64(acc);
    for (; i < n; ++i) r += a[i] * b[i];
    return r;
}

double min_sum(std::span<const double> a, std::span<const double> b) {
    const std::size_t n = a.size();
    std::size_t i = 0;
    float64x2_t acc = vdupq_n_f64(0.0);
    for (; i + 2 <= n; i += 2) {
        acc = vaddq_f64(acc, vminq_f64(vld1q_f64(a.data() + i), vld1q_f64(b.data() + i)));
    }
    double r = vaddvq_f64(acc);
    for (; i < n; ++i) r += std::min(a[i], b[i]);
    return r;
}

double abs_diff_sum(std::span<const double> a, std::span<const double> b) {
    const std::size_t n = a.size();
    std::size_t i = 0;
    float64x2_t acc = vdupq_n_f64(0.0);
    for (; i + 2 <= n; i += 2) {
        acc = vaddq_f64(acc, vabdq_f64(vld1q_f64(a.data() + i), vld1q_f64(b.data() + i)));
    }
    double r = vaddvq_f64(acc);
    for (; i < n; ++i) r += std::abs(a[i] - b[i]);
    return r;
}

double relu_diff(std::span<const double> a, std::span<const double> b, std::span<double> out) {
    const std::size_t n = a.size();
    std::size_t i = 0;
    const float64x2_t zero = vdupq_n_f64(0.0);
    float64x2_t acc = vdupq_n_f64(0.0);
    for (; i + 2 <= n; i += 2) {
        float64x2_t d = vsubq_f64(vld1q_f64(a.data() + i), vld1q_f64(b.data() + i));
        d = vmaxq_f64(d, zero);
        vst1q_f64(out.data() + i, d);
        acc = vaddq_f64(acc, d);
    }
    double r = vaddvq_f64(acc);
    for (; i < n; ++i) {
        double d = std::max(a[i] - b[i], 0.0);
        out[i] = d;
        r += d;
    }
    return r;
}

void scale(std::span<double> v, double s) {
    const std::size_t n = v.size();
    std::size_t i = 0;
    const float64x2_t sv = vdupq_n_f64(s);
    for (; i + 2 <= n; i += 2) vst1q_f64(v.data() + i, vmulq_f64(vld1q_f64(v.data() + i), sv));
    for (; i < n; ++i) v[i] *= s;
}

double max_value(std::span<const double> v) {
    const std::size_t n = v.size();
    std::size_t i = 0;
    double r = v[0];
    if (n >= 2) {
        float64x2_t acc = vld1q_f64(v.data());
        for (i = 2; i + 2 <= n; i += 2) acc = vmaxq_f64(acc, vld1q_f64(v.data() + i));
        r = vmaxvq_f64(acc);
    }
    for (; i < n; ++i) r = std::max(r, v[i]);
    return r;
}

void mix(std::span<const double> a, std::span<const double> b, double lam, std::span<double> out) {
    const std::size_t n = a.size();
    std::size_t i = 0;
    const float64x2_t lv = vdupq_n_f64(lam);
    const float64x2_t mv = vdupq_n_f64(1.0 - lam);
    for (; i + 2 <= n; i += 2) {
        float64x2_t r = vmulq_f64(lv, vld1q_f64(a.data() + i));
        r = vfmaq_f64(r, mv, vld1q_f64(b.data() + i));
        vst1q_f64(out.data() + i, r);
    }
    const double mu = 1.0 - lam;
    for (; i < n; ++i) out[i] = lam * a[i] + mu * b[i];
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
    const std::size_t n = x.size();
    std::size_t i = 0;
    const float64x2_t av = vdupq_n_f64(a);
    for (; i + 2 <= n; i += 2) {
        vst1q_f64(y.data() + i, vfmaq_f64(vld1q_f64(y.data() + i), av, vld1q_f64(x.data() + i)));
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

} // namespace specdec::vecops::neon

#endif // SPECDEC_HAVE_NEON_TU
