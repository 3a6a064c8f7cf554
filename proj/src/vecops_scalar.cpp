#include "specdec/vecops.hpp"

#include <algorithm>
#include <cassert>

namespace specdec::vecops::scalar {

double sum(std::span<const double> v) {
    double acc = 0.0;
    for (double x : v) acc += x;
    return acc;
}

double dot(std::span<const double> a, std::span<const double> b) {
    assert(a.size() == b.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

double min_sum(std::span<const double> a, std::span<const double> b) {
    assert(a.size() == b.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::min(a[i], b[i]);
    return acc;
}

double abs_diff_sum(std::span<const double> a, std::span<const double> b) {
    assert(a.size() == b.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::abs(a[i] - b[i]);
    return acc;
}

double relu_diff(std::span<const double> a, std::span<const double> b, std::span<double> out) {
    assert(a.size() == b.size() && a.size() == out.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = std::max(a[i] - b[i], 0.0);
        out[i] = d;
        acc += d;
    }
    return acc;
}

void scale(std::span<double> v, double s) {
    for (double& x : v) x *= s;
}

double max_value(std::span<const double> v) {
    assert(!v.empty());
    double m = v[0];
    for (double x : v.subspan(1)) m = std::max(m, x);
    return m;
}

void mix(std::span<const double> a, std::span<const double> b, double lam, std::span<double> out) {
    assert(a.size() == b.size() && a.size() == out.size());
    const double mu = 1.0 - lam;
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = lam * a[i] + mu * b[i];
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
    assert(x.size() == y.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

} // namespace specdec::vecops::scalar
