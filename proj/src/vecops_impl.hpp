#pragma once

#include <span>

// Internal declarations for the architecture-specific kernel variants. Each
// translation unit is compiled with the matching target flags and is only
// referenced after a runtime CPU probe.

namespace specdec::vecops {

#if defined(__x86_64__) || defined(_M_X64)
#define SPECDEC_HAVE_AVX2_TU 1
namespace avx2 {
double sum(std::span<const double> v);
double dot(std::span<const double> a, std::span<const double> b);
double min_sum(std::span<const double> a, std::span<const double> b);
double abs_diff_sum(std::span<const double> a, std::span<const double> b);
double relu_diff(std::span<const double> a, std::span<const double> b, std::span<double> out);
void scale(std::span<double> v, double s);
double max_value(std::span<const double> v);
void mix(std::span<const double> a, std::span<const double> b, double lam, std::span<double> out);
void axpy(double a, std::span<const double> x, std::span<double> y);
} // namespace avx2
#endif

#if defined(__aarch64__)
#define SPECDEC_HAVE_NEON_TU 1
namespace neon {
double sum(std::span<const double> v);
double dot(std::span<const double> a, std::span<const double> b);
double min_sum(std::span<const double> a, std::span<const double> b);
double abs_diff_sum(std::span<const double> a, std::span<const double> b);
double relu_diff(std::span<const double> a, std::span<const double> b, std::span<double> out);
void scale(std::span<double> v, double s);
double max_value(std::span<const double> v);
void mix(std::span<const double> a, std::span<const double> b, double lam, std::span<double> out);
void axpy(double a, std::span<const double> x, std::span<double> y);
} // namespace neon
#endif

} // namespace specdec::vecops
