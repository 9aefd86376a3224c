#pragma once
/// @file phi.hpp
/// @brief Evaluation of the phi-functions (phi_0 = exp, phi_k(z) =
///        int_0^1 e^{(1-sigma)z} sigma^{k-1}/(k-1)! dsigma) for scalars, dense
///        matrices, and banded matrices.
///
/// The production path approximates phi_k(dt*A) by the consistent polynomial
/// family p_k^M: initialize p_k^0 at the scaled matrix dt*A/2^M from the
/// truncated Taylor coefficients, then apply M doubling recursions.  With the
/// degree-r Taylor start the approximation error obeys
///     |p_k^M(z) - phi_k(z)| <= (1/(r+1)!) |z|^{r+1-k} 2^{-M r}
/// for real z in [-2^M, 0].  A slow dense oracle (scaling + long series +
/// exact doubling) backs the tests.

#include "etdsim/banded.hpp"
#include "etdsim/dense.hpp"

#include <complex>
#include <vector>

namespace etdsim {

/// phi_k(z) to near machine precision; phi_k(0) = 1/k!.  Real and complex
/// arguments supported (complex is used for spectrum-based identity tests).
std::complex<double> phi_scalar(int k, std::complex<double> z);
double phi_scalar(int k, double z);

/// The polynomial p_0^0 underlying the scaled family: the degree-r Taylor
/// polynomial T_r of exp, stability shift rho0 = 0, remainder constant
/// c_q = 1/(r+1)!.  A non-Taylor completion p_0^0 = T_r + z^{r+1} q(z) is an
/// extension point of this struct, not instantiated here.
struct PhiPolynomial {
    int r = 0;                     ///< approximation order
    std::vector<double> coeffs;    ///< p_0^0 coefficients, degree 0..r
    double rho0 = 0.0;             ///< stability shift
    double c_q = 0.0;              ///< remainder constant, 1/(r+1)! for Taylor
};

/// Build the degree-r Taylor polynomial.  r must lie in [1, 30]; beyond 30 the
/// trailing coefficients underflow any useful double-precision contribution.
PhiPolynomial build_poly(int r);

/// Which doubling recursion phi_family_recurse applies for k >= 2 (both give
/// the same family in exact arithmetic; the product form is the default as the
/// numerically more stable one).
enum class RecursionVariant {
    product, ///< 2^k p_k(2z) = p_0(z) p_k(z) + sum_{j<k} p_{k-j}(z)/j!
    split    ///< 2^k p_k(2z) written through the half-index products
};

/// p_k(A_scaled) for k = 0..k_max at scaling level M.
struct PhiFamily {
    int k_max = 0;
    int M = 0;
    std::vector<BandedMatrix> p; ///< index k
};

/// Level-0 family: p_k^0(A_scaled) = sum_{j=0}^{r-k} A_scaled^j / (j+k)!,
/// evaluated by Horner-style banded products (never via a matrix inverse; A
/// may be singular).  p_{r+1}^0 is the zero matrix.  Requires k_max <= r+1.
PhiFamily phi_family_init(const PhiPolynomial& poly, const BandedMatrix& A_scaled,
                          int k_max);

/// One doubling level: p_k^{M}(z) = 2^{-k}( p_0^{M-1}(z/2) p_k^{M-1}(z/2)
/// + sum_{j=0}^{k-1} p_{k-j}^{M-1}(z/2) / j! ), squaring for k = 0.  The
/// scaled argument is implicit: the family keeps operating on the matrices it
/// holds and increments M.
void phi_family_recurse(PhiFamily& family,
                        RecursionVariant variant = RecursionVariant::product);

/// p_1^M approximation of phi_1(dt*A): initialize p_1^0, p_0^0 at dt*A/2^M,
/// then repeat M times  p_1 <- (p_0 + I) p_1 / 2,  p_0 <- p_0^2.
/// M < 0 selects the automatic scaling exponent (choose_scaling_exponent).
BandedMatrix compute_phi1(const BandedMatrix& A, double dt, int M, int r);

/// General driver: p_k^M for k = 0..k_max of phi_k(dt*A).
PhiFamily compute_phi_family(const BandedMatrix& A, double dt, int M, int r,
                             int k_max,
                             RecursionVariant variant = RecursionVariant::product);

/// Smallest M >= 0 with ||dt*A||_inf / 2^M <= theta (boundary inclusive).
int choose_scaling_exponent(const BandedMatrix& A, double dt, double theta = 1.0);

/// Brute-force test oracle: phi_k(A) by scaling to norm <= 2^-4, a degree-20
/// truncated series for every phi_j, j <= k, and exact doubling.  Guarded to
/// n <= 64; documented accuracy ~1e-12 relative for well-conditioned inputs.
DenseMatrix phi_dense_oracle(int k, const DenseMatrix& A);

namespace detail {
/// Shared implementation behind phi_dense_oracle (n <= 64) and the Krylov
/// block evaluation phi_small_dense (n <= 1024).
DenseMatrix phi_dense(int k, const DenseMatrix& A);
} // namespace detail

} // namespace etdsim
