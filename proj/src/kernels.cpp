/// @file kernels.cpp
/// @brief Scalar reference kernels and runtime backend dispatch.

#include "etdsim/kernels.hpp"

#include <cstdlib>
#include <cstring>
#include <stdexcept>
#include <string>

namespace etdsim::kern {

// ============================================================ scalar kernels

namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void scal_scalar(double alpha, double* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) x[i] *= alpha;
}

void emadd_scalar(double* c, const double* a, const double* b, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) c[i] += a[i] * b[i];
}

} // namespace

// SIMD variants live in kernels_avx2.cpp / kernels_neon.cpp and are only
// compiled on the matching architecture.
#if defined(ETDSIM_HAVE_AVX2)
namespace detail {
bool cpu_has_avx2();
double dot_avx2(const double* a, const double* b, std::size_t n);
void axpy_avx2(double alpha, const double* x, double* y, std::size_t n);
void scal_avx2(double alpha, double* x, std::size_t n);
void emadd_avx2(double* c, const double* a, const double* b, std::size_t n);
} // namespace detail
#endif
#if defined(ETDSIM_HAVE_NEON)
namespace detail {
double dot_neon(const double* a, const double* b, std::size_t n);
void axpy_neon(double alpha, const double* x, double* y, std::size_t n);
void scal_neon(double alpha, double* x, std::size_t n);
void emadd_neon(double* c, const double* a, const double* b, std::size_t n);
} // namespace detail
#endif

// ============================================================ dispatch table

namespace {

struct Table {
    Backend backend;
    double (*dot)(const double*, const double*, std::size_t);
    void (*axpy)(double, const double*, double*, std::size_t);
    void (*scal)(double, double*, std::size_t);
    void (*emadd)(double*, const double*, const double*, std::size_t);
};

Table make_table(Backend b) {
    switch (b) {
#if defined(ETDSIM_HAVE_AVX2)
    case Backend::avx2:
        return {Backend::avx2, detail::dot_avx2, detail::axpy_avx2,
                detail::scal_avx2, detail::emadd_avx2};
#endif
#if defined(ETDSIM_HAVE_NEON)
    case Backend::neon:
        return {Backend::neon, detail::dot_neon, detail::axpy_neon,
                detail::scal_neon, detail::emadd_neon};
#endif
    default:
        return {Backend::scalar, dot_scalar, axpy_scalar, scal_scalar,
                emadd_scalar};
    }
}

Backend detect_backend() {
    if (const char* env = std::getenv("ETDSIM_BACKEND")) {
        std::string v(env);
        if (v == "scalar") return Backend::scalar;
        if (v == "avx2" && backend_available(Backend::avx2)) return Backend::avx2;
        if (v == "neon" && backend_available(Backend::neon)) return Backend::neon;
        // Unknown or unavailable value: fall through to auto-detection.
    }
#if defined(ETDSIM_HAVE_AVX2)
    if (detail::cpu_has_avx2()) return Backend::avx2;
#endif
#if defined(ETDSIM_HAVE_NEON)
    return Backend::neon;
#endif
    return Backend::scalar;
}

Table& table() {
    static Table t = make_table(detect_backend());
    return t;
}

} // namespace

bool backend_available(Backend b) {
    switch (b) {
    case Backend::scalar:
        return true;
    case Backend::avx2:
#if defined(ETDSIM_HAVE_AVX2)
        return detail::cpu_has_avx2();
#else
        return false;
#endif
    case Backend::neon:
#if defined(ETDSIM_HAVE_NEON)
        return true;
#else
        return false;
#endif
    }
    return false;
}

Backend active_backend() { return table().backend; }

void force_backend(Backend b) {
    if (!backend_available(b))
        throw std::runtime_error(std::string("kernel backend not available: ") +
                                 backend_name(b));
    table() = make_table(b);
}

const char* backend_name(Backend b) {
    switch (b) {
    case Backend::scalar: return "scalar";
    case Backend::avx2: return "avx2";
    case Backend::neon: return "neon";
    }
    return "?";
}

double dot(const double* a, const double* b, std::size_t n) {
    return table().dot(a, b, n);
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
    table().axpy(alpha, x, y, n);
}

void scal(double alpha, double* x, std::size_t n) {
    table().scal(alpha, x, n);
}

void emadd(double* c, const double* a, const double* b, std::size_t n) {
    table().emadd(c, a, b, n);
}

} // namespace etdsim::kern
