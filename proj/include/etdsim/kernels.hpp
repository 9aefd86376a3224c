#pragma once
/// @file kernels.hpp
/// @brief Low-level vector kernels with a scalar reference implementation and
///        SIMD variants (AVX2 on x86-64, NEON on aarch64) selected at runtime.
///
/// All higher-level linear algebra (banded products, dense products, Arnoldi
/// orthogonalization) funnels through these four primitives, so swapping the
/// backend swaps the whole hot path.  The scalar functions are the reference:
/// SIMD variants must agree with them up to floating-point reassociation.

#include <cstddef>

namespace etdsim::kern {

enum class Backend { scalar, avx2, neon };

/// Backend currently in use.  Chosen once at first use: the best instruction
/// set the CPU supports, unless overridden by the ETDSIM_BACKEND environment
/// variable ("scalar", "avx2", "neon") or by force_backend().
Backend active_backend();

/// Override the backend (used by the equivalence tests).  Throws
/// std::runtime_error if the requested backend is not available on this CPU.
void force_backend(Backend b);

/// True if the given backend can run on this machine.
bool backend_available(Backend b);

const char* backend_name(Backend b);

/// sum_i a[i]*b[i]
double dot(const double* a, const double* b, std::size_t n);

/// y[i] += alpha * x[i]
void axpy(double alpha, const double* x, double* y, std::size_t n);

/// x[i] *= alpha
void scal(double alpha, double* x, std::size_t n);

/// c[i] += a[i] * b[i]  (elementwise multiply-accumulate; the workhorse of
/// diagonal-major banded products and band matrix-vector products)
void emadd(double* c, const double* a, const double* b, std::size_t n);

} // namespace etdsim::kern
