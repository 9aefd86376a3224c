/// @file phi.cpp

#include "etdsim/phi.hpp"

#include <cmath>
#include <stdexcept>

namespace etdsim {

namespace {

double factorial(int m) {
    double f = 1.0;
    for (int i = 2; i <= m; ++i) f *= i;
    return f;
}

} // namespace

// ============================================================ scalar phi

std::complex<double> phi_scalar(int k, std::complex<double> z) {
    if (k < 0) throw std::invalid_argument("phi_scalar: k must be >= 0");
    if (k == 0) return std::exp(z);

    const double az = std::abs(z);
    if (az <= 1.5 + 0.5 * k) {
        // Truncated series sum_j z^j / (j+k)!; converges fast and, in this
        // range, without damaging cancellation.
        std::complex<double> term = 1.0 / factorial(k);
        std::complex<double> sum = term;
        for (int j = 1; j <= 200; ++j) {
            term *= z / static_cast<double>(j + k);
            sum += term;
            if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
        }
        return sum;
    }

    // Upward recurrence from exp; stable for |z| away from 0.
    std::complex<double> phi = std::exp(z);
    for (int m = 1; m <= k; ++m)
        phi = (phi - 1.0 / factorial(m - 1)) / z;
    return phi;
}

double phi_scalar(int k, double z) {
    return phi_scalar(k, std::complex<double>(z, 0.0)).real();
}

// ============================================================ polynomial family

PhiPolynomial build_poly(int r) {
    if (r < 1) throw std::invalid_argument("build_poly: r must be >= 1");
    if (r > 30)
        throw std::invalid_argument(
            "build_poly: r > 30 rejected (coefficients underflow double precision "
            "usefulness)");
    PhiPolynomial p;
    p.r = r;
    p.coeffs.resize(static_cast<std::size_t>(r) + 1);
    for (int j = 0; j <= r; ++j) p.coeffs[static_cast<std::size_t>(j)] = 1.0 / factorial(j);
    p.rho0 = 0.0;
    p.c_q = 1.0 / factorial(r + 1);
    return p;
}

PhiFamily phi_family_init(const PhiPolynomial& poly, const BandedMatrix& A_scaled,
                          int k_max) {
    if (k_max < 0) throw std::invalid_argument("phi_family_init: k_max must be >= 0");
    if (k_max > poly.r + 1)
        throw std::invalid_argument("phi_family_init: k_max must be <= r + 1");

    const int n = A_scaled.n();
    PhiFamily fam;
    fam.k_max = k_max;
    fam.M = 0;
    fam.p.reserve(static_cast<std::size_t>(k_max) + 1);

    for (int k = 0; k <= k_max; ++k) {
        if (k == poly.r + 1) {
            // p_{r+1}^0 is identically zero.
            fam.p.emplace_back(n, 0, 0);
            continue;
        }
        // p_k^0(z) = sum_{j=0}^{r-k} z^j / (j+k)!  by Horner products.
        const int deg = poly.r - k;
        BandedMatrix P(n, 0, 0);
        P.add_scaled_identity(1.0 / factorial(deg + k));
        for (int j = deg - 1; j >= 0; --j) {
            P = banded_matmul(P, A_scaled);
            P.add_scaled_identity(1.0 / factorial(j + k));
        }
        P.trim();
        fam.p.push_back(std::move(P));
    }
    return fam;
}

void phi_family_recurse(PhiFamily& family, RecursionVariant variant) {
    const std::vector<BandedMatrix> old = std::move(family.p);
    family.p.clear();
    family.p.reserve(old.size());

    for (int k = 0; k <= family.k_max; ++k) {
        BandedMatrix next = [&]() -> BandedMatrix {
            if (k == 0) return banded_matmul(old[0], old[0]);

            if (variant == RecursionVariant::product) {
                // 2^k p_k(2z) = p_0(z) p_k(z) + sum_{j=0}^{k-1} p_{k-j}(z)/j!
                BandedMatrix acc = banded_matmul(old[0], old[static_cast<std::size_t>(k)]);
                for (int j = 0; j < k; ++j)
                    acc = banded_add(1.0, acc, 1.0 / factorial(j),
                                     old[static_cast<std::size_t>(k - j)]);
                return acc;
            }

            // Split variant: the doubling written through half-index products,
            //   even k: p_{k/2}^2            + 2 sum_{j=0}^{k/2-1} p_{k-j}/j!
            //   odd  k: p_{(k-1)/2}p_{(k+1)/2} + 2 sum_{j=0}^{(k-3)/2} p_{k-j}/j!
            //                                  + p_{(k+1)/2}/((k-1)/2)!
            if (k % 2 == 0) {
                const int h = k / 2;
                BandedMatrix acc = banded_matmul(old[static_cast<std::size_t>(h)],
                                                 old[static_cast<std::size_t>(h)]);
                for (int j = 0; j <= h - 1; ++j)
                    acc = banded_add(1.0, acc, 2.0 / factorial(j),
                                     old[static_cast<std::size_t>(k - j)]);
                return acc;
            }
            const int lo = (k - 1) / 2, hi = (k + 1) / 2;
            BandedMatrix acc = banded_matmul(old[static_cast<std::size_t>(lo)],
                                             old[static_cast<std::size_t>(hi)]);
            for (int j = 0; j <= (k - 3) / 2; ++j)
                acc = banded_add(1.0, acc, 2.0 / factorial(j),
                                 old[static_cast<std::size_t>(k - j)]);
            acc = banded_add(1.0, acc, 1.0 / factorial(lo),
                             old[static_cast<std::size_t>(hi)]);
            return acc;
        }();

        next.scale(std::ldexp(1.0, -k)); // 2^{-k}
        next.trim();
        family.p.push_back(std::move(next));
    }
    ++family.M;
}

BandedMatrix compute_phi1(const BandedMatrix& A, double dt, int M, int r) {
    if (M < 0) M = choose_scaling_exponent(A, dt);
    BandedMatrix A_scaled = A;
    A_scaled.scale(dt * std::ldexp(1.0, -M));

    const PhiPolynomial poly = build_poly(r);
    PhiFamily fam = phi_family_init(poly, A_scaled, 1);
    BandedMatrix p0 = std::move(fam.p[0]);
    BandedMatrix p1 = std::move(fam.p[1]);
    for (int level = 0; level < M; ++level) {
        // p_1 <- (p_0 + I) p_1 / 2,  p_0 <- p_0^2
        BandedMatrix p1_next = banded_add(0.5, banded_matmul(p0, p1), 0.5, p1);
        p1_next.trim();
        p0 = banded_matmul(p0, p0);
        p0.trim();
        p1 = std::move(p1_next);
    }
    return p1;
}

PhiFamily compute_phi_family(const BandedMatrix& A, double dt, int M, int r,
                             int k_max, RecursionVariant variant) {
    if (M < 0) M = choose_scaling_exponent(A, dt);
    BandedMatrix A_scaled = A;
    A_scaled.scale(dt * std::ldexp(1.0, -M));

    const PhiPolynomial poly = build_poly(r);
    PhiFamily fam = phi_family_init(poly, A_scaled, k_max);
    for (int level = 0; level < M; ++level) phi_family_recurse(fam, variant);
    return fam;
}

int choose_scaling_exponent(const BandedMatrix& A, double dt, double theta) {
    if (theta <= 0.0)
        throw std::invalid_argument("choose_scaling_exponent: theta must be > 0");
    const double nrm = std::abs(dt) * A.norm_inf();
    if (!std::isfinite(nrm))
        throw std::invalid_argument("choose_scaling_exponent: non-finite norm");
    int M = 0;
    while (nrm * std::ldexp(1.0, -M) > theta && M < 64) ++M;
    return M;
}

// ============================================================ dense oracle

namespace detail {

DenseMatrix phi_dense(int k, const DenseMatrix& A) {
    if (k < 0) throw std::invalid_argument("phi_dense: k must be >= 0");
    const int n = A.n();

    // Scale to norm <= 2^-4.
    const double nrm = A.norm_inf();
    int S = 0;
    while (nrm * std::ldexp(1.0, -S) > 0.0625 && S < 64) ++S;
    DenseMatrix B = A;
    B.scale(std::ldexp(1.0, -S));

    // Degree-20 truncated series for all phi_j, j <= k, sharing powers of B.
    constexpr int series_degree = 20;
    std::vector<DenseMatrix> phi(static_cast<std::size_t>(k) + 1, DenseMatrix(n));
    DenseMatrix P = DenseMatrix::identity(n);
    for (int i = 0; i <= series_degree; ++i) {
        for (int j = 0; j <= k; ++j)
            phi[static_cast<std::size_t>(j)].add_scaled(P, 1.0 / factorial(i + j));
        if (i < series_degree) P = dense_matmul(P, B);
    }

    // S doublings: phi_j(2X) = 2^{-j}( phi_0(X) phi_j(X) + sum_t phi_{j-t}(X)/t! ).
    for (int s = 0; s < S; ++s) {
        std::vector<DenseMatrix> next;
        next.reserve(phi.size());
        next.push_back(dense_matmul(phi[0], phi[0]));
        for (int j = 1; j <= k; ++j) {
            DenseMatrix acc = dense_matmul(phi[0], phi[static_cast<std::size_t>(j)]);
            for (int t = 0; t < j; ++t)
                acc.add_scaled(phi[static_cast<std::size_t>(j - t)], 1.0 / factorial(t));
            acc.scale(std::ldexp(1.0, -j));
            next.push_back(std::move(acc));
        }
        phi = std::move(next);
    }
    return phi[static_cast<std::size_t>(k)];
}

} // namespace detail

DenseMatrix phi_dense_oracle(int k, const DenseMatrix& A) {
    if (A.n() > 64)
        throw std::invalid_argument("phi_dense_oracle: n > 64 (test-scale guard)");
    return detail::phi_dense(k, A);
}

} // namespace etdsim
