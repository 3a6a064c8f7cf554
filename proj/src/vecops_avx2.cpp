// AVX2 variants of the vector kernels. This file is compiled with -mavx2 and
// must only be entered after the dispatcher has confirmed AVX2 support.

#include "vecops_impl.hpp"

#if defined(SPECDEC_HAVE_AVX2_TU)

#include <immintrin.h>

#include <algorithm>
#include <cmath>
#include <cstddef>

namespace specdec::vecops::avx2 {

namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d shuf = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, shuf));
}

inline double hmax(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_max_pd(lo, hi);
    __m128d shuf = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_max_sd(lo, shuf));
}

} // namespace

double sum(std::span<const double> v) {
    const std::size_t n = v.size();
    std::size_t i = 0;
    __m256d acc = _mm256_setzero_pd();
    for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(v.data() + i));
    double r = hsum(acc);
    for (; i < n; ++i) r += v[i];
    return r;
}

double dot(std::span<const double> a, std::span<const double> b) {
    const std::size_t n = a.size();
    std::size_t i = 0;
    __m256d acc = _mm256_setzero_pd();
    for (; i + 4 <= n; i += 4) {
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(a.data() + i), _mm256_loadu_pd(b.data() + i), acc);
    }
    double r = hsum(acc);
    for (; i < n; ++i) r += a[i] * b[i];
    return r;
}

double min_sum(std::span<const double> a, std::span<const double> b) {
    const std::size_t n = a.size();
    std::size_t i = 0;
    __m256d acc = _mm256_setzero_pd();
    for (; i + 4 <= n; i += 4) {
        acc = _mm256_add_pd(acc, _mm256_min_pd(_mm256_loadu_pd(a.data() + i), _mm256_loadu_pd(b.data() + i)));
    }
    double r = hsum(acc);
    for (; i < n; ++i) r += std::min(a[i], b[i]);
    return r;
}

double abs_diff_sum(std::span<const double> a, std::span<const double> b) {
    const std::size_t n = a.size();
    std::size_t i = 0;
    const __m256d signmask = _mm256_set1_pd(-0.0);
    __m256d acc = _mm256_setzero_pd();
    for (; i + 4 <= n; i += 4) {
        __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a.data() + i), _mm256_loadu_pd(b.data() + i));
        acc = _mm256_add_pd(acc, _mm256_andnot_pd(signmask, d));
    }
    double r = hsum(acc);
    for (; i < n; ++i) r += std::abs(a[i] - b[i]);
    return r;
}

double relu_diff(std::span<const double> a, std::span<const double> b, std::span<double> out) {
    const std::size_t n = a.size();
    std::size_t i = 0;
    const __m256d zero = _mm256_setzero_pd();
    __m256d acc = _mm256_setzero_pd();
    for (; i + 4 <= n; i += 4) {
        __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a.data() + i), _mm256_loadu_pd(b.data() + i));
        d = _mm256_max_pd(d, zero);
        _mm256_storeu_pd(out.data() + i, d);
        acc = _mm256_add_pd(acc, d);
    }
    double r = hsum(acc);
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
    const __m256d sv = _mm256_set1_pd(s);
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(v.data() + i, _mm256_mul_pd(_mm256_loadu_pd(v.data() + i), sv));
    }
    for (; i < n; ++i) v[i] *= s;
}

double max_value(std::span<const double> v) {
    const std::size_t n = v.size();
    std::size_t i = 0;
    double r = v[0];
    if (n >= 4) {
        __m256d acc = _mm256_loadu_pd(v.data());
        for (i = 4; i + 4 <= n; i += 4) acc = _mm256_max_pd(acc, _mm256_loadu_pd(v.data() + i));
        r = hmax(acc);
    }
    for (; i < n; ++i) r = std::max(r, v[i]);
    return r;
}

void mix(std::span<const double> a, std::span<const double> b, double lam, std::span<double> out) {
    const std::size_t n = a.size();
    std::size_t i = 0;
    const __m256d lv = _mm256_set1_pd(lam);
    const __m256d mv = _mm256_set1_pd(1.0 - lam);
    for (; i + 4 <= n; i += 4) {
        __m256d r = _mm256_mul_pd(lv, _mm256_loadu_pd(a.data() + i));
        r = _mm256_fmadd_pd(mv, _mm256_loadu_pd(b.data() + i), r);
        _mm256_storeu_pd(out.data() + i, r);
    }
    const double mu = 1.0 - lam;
    for (; i < n; ++i) out[i] = lam * a[i] + mu * b[i];
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
    const std::size_t n = x.size();
    std::size_t i = 0;
    const __m256d av = _mm256_set1_pd(a);
    for (; i + 4 <= n; i += 4) {
        __m256d r = _mm256_fmadd_pd(av, _mm256_loadu_pd(x.data() + i), _mm256_loadu_pd(y.data() + i));
        _mm256_storeu_pd(y.data() + i, r);
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

} // namespace specdec::vecops::avx2

#endif // SPECDEC_HAVE_AVX2_TU
