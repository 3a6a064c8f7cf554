#include "specdec/vecops.hpp"

#include "vecops_impl.hpp"

#include <cstdlib>
#include <string_view>

namespace specdec::vecops {

namespace {

struct KernelTable {
    double (*sum)(std::span<const double>);
    double (*dot)(std::span<const double>, std::span<const double>);
    double (*min_sum)(std::span<const double>, std::span<const double>);
    double (*abs_diff_sum)(std::span<const double>, std::span<const double>);
    double (*relu_diff)(std::span<const double>, std::span<const double>, std::span<double>);
    void (*scale)(std::span<double>, double);
    double (*max_value)(std::span<const double>);
    void (*mix)(std::span<const double>, std::span<const double>, double, std::span<double>);
    void (*axpy)(double, std::span<const double>, std::span<double>);
};

constexpr KernelTable kScalarTable = {
    scalar::sum,    scalar::dot,       scalar::min_sum, scalar::abs_diff_sum, scalar::relu_diff,
    scalar::scale,  scalar::max_value, scalar::mix,     scalar::axpy,
};

#if defined(SPECDEC_HAVE_AVX2_TU)
constexpr KernelTable kAvx2Table = {
    avx2::sum,    avx2::dot,       avx2::min_sum, avx2::abs_diff_sum, avx2::relu_diff,
    avx2::scale,  avx2::max_value, avx2::mix,     avx2::axpy,
};
#endif

#if defined(SPECDEC_HAVE_NEON_TU)
constexpr KernelTable kNeonTable = {
    neon::sum,    neon::dot,       neon::min_sum, neon::abs_diff_sum, neon::relu_diff,
    neon::scale,  neon::max_value, neon::mix,     neon::axpy,
};
#endif

bool backend_available(Backend b) {
    switch (b) {
    case Backend::Scalar:
        return true;
    case Backend::Avx2:
#if defined(SPECDEC_HAVE_AVX2_TU) && (defined(__GNUC__) || defined(__clang__))
        return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
        return false;
#endif
    case Backend::Neon:
#if defined(SPECDEC_HAVE_NEON_TU)
        return true;
#else
        return false;
#endif
    }
    return false;
}

const KernelTable* table_for(Backend b) {
    switch (b) {
    case Backend::Scalar:
        return &kScalarTable;
    case Backend::Avx2:
#if defined(SPECDEC_HAVE_AVX2_TU)
        return &kAvx2Table;
#else
        return nullptr;
#endif
    case Backend::Neon:
#if defined(SPECDEC_HAVE_NEON_TU)
        return &kNeonTable;
#else
        return nullptr;
#endif
    }
    return nullptr;
}

Backend pick_default() {
    Backend best = Backend::Scalar;
    if (backend_available(Backend::Neon)) best = Backend::Neon;
    if (backend_available(Backend::Avx2)) best = Backend::Avx2;

    if (const char* env = std::getenv("SPECDEC_SIMD")) {
        std::string_view want(env);
        if (want == "scalar") return Backend::Scalar;
        if (want == "avx2" && backend_available(Backend::Avx2)) return Backend::Avx2;
        if (want == "neon" && backend_available(Backend::Neon)) return Backend::Neon;
        // "auto" or anything unrecognized falls through to the probe result.
    }
    return best;
}

struct Dispatch {
    Backend backend;
    const KernelTable* table;
    Dispatch() : backend(pick_default()), table(table_for(backend)) {}
};

Dispatch& dispatch() {
    static Dispatch d;
    return d;
}

} // namespace

Backend active_backend() { return dispatch().backend; }

const char* backend_name(Backend b) {
    switch (b) {
    case Backend::Scalar: return "scalar";
    case Backend::Avx2: return "avx2";
    case Backend::Neon: return "neon";
    }
    return "unknown";
}

bool force_backend(Backend b) {
    if (!backend_available(b)) return false;
    dispatch().backend = b;
    dispatch().table = table_for(b);
    return true;
}

double sum(std::span<const double> v) { return dispatch().table->sum(v); }
double dot(std::span<const double> a, std::span<const double> b) { return dispatch().table->dot(a, b); }
double min_sum(std::span<const double> a, std::span<const double> b) { return dispatch().table->min_sum(a, b); }
double abs_diff_sum(std::span<const double> a, std::span<const double> b) {
    return dispatch().table->abs_diff_sum(a, b);
}
double relu_diff(std::span<const double> a, std::span<const double> b, std::span<double> out) {
    return dispatch().table->relu_diff(a, b, out);
}
void scale(std::span<double> v, double s) { dispatch().table->scale(v, s); }
double max_value(std::span<const double> v) { return dispatch().table->max_value(v); }
void mix(std::span<const double> a, std::span<const double> b, double lam, std::span<double> out) {
    dispatch().table->mix(a, b, lam, out);
}
void axpy(double a, std::span<const double> x, std::span<double> y) { dispatch().table->axpy(a, x, y); }

} // namespace specdec::vecops
