#pragma once

#include <cstddef>
#include <span>
#include <string_view>

namespace specdec::vecops {

// Element-wise kernels over probability vectors. These sit under the hot
// Monte Carlo loops (residual recursions, acceptance sums, softmax
// normalization), so each has a scalar reference implementation and, on
// x86-64/aarch64, a SIMD variant selected once at startup. The SIMD variants
// may reassociate reductions; equivalence against the scalar reference is
// tested to a small relative tolerance, never assumed.

double sum(std::span<const double> v);
double dot(std::span<const double> a, std::span<const double> b);

/// Sum of element-wise minima.
double min_sum(std::span<const double> a, std::span<const double> b);

/// Sum of absolute differences.
double abs_diff_sum(std::span<const double> a, std::span<const double> b);

/// out[i] = max(a[i] - b[i], 0); returns the sum of out.
double relu_diff(std::span<const double> a, std::span<const double> b, std::span<double> out);

void scale(std::span<double> v, double s);

double max_value(std::span<const double> v);

/// out = lam * a + (1 - lam) * b.
void mix(std::span<const double> a, std::span<const double> b, double lam, std::span<double> out);

/// y += a * x.
void axpy(double a, std::span<const double> x, std::span<double> y);

enum class Backend { Scalar, Avx2, Neon };

/// Backend chosen at startup (CPU probe, overridable via SPECDEC_SIMD=scalar|avx2|neon|auto).
Backend active_backend();
const char* backend_name(Backend b);

/// Force a backend; returns false if it is unavailable on this CPU.
bool force_backend(Backend b);

// Scalar reference implementations, always available. The dispatched entry
// points above must agree with these; the equivalence tests compare them
// directly.
namespace scalar {
double sum(std::span<const double> v);
double dot(std::span<const double> a, std::span<const double> b);
double min_sum(std::span<const double> a, std::span<const double> b);
double abs_diff_sum(std::span<const double> a, std::span<const double> b);
double relu_diff(std::span<const double> a, std::span<const double> b, std::span<double> out);
void scale(std::span<double> v, double s);
double max_value(std::span<const double> v);
void mix(std::span<const double> a, std::span<const double> b, double lam, std::span<double> out);
void axpy(double a, std::span<const double> x, std::span<double> y);
} // namespace scalar

} // namespace specdec::vecops
