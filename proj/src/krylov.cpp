/// @file krylov.cpp

#include "etdsim/krylov.hpp"
#include "etdsim/kernels.hpp"
#include "etdsim/phi.hpp"

#include <cmath>
#include <stdexcept>

namespace etdsim {

namespace {

double nrm2(const double* x, std::size_t n) {
    return std::sqrt(kern::dot(x, x, n));
}

} // namespace

ArnoldiDecomposition arnoldi(const LinOp& A, std::span<const double> b, int m) {
    const int n = A.n;
    if (static_cast<int>(b.size()) != n)
        throw std::invalid_argument("arnoldi: vector size mismatch");
    if (m < 1 || m > n)
        throw std::invalid_argument("arnoldi: need 1 <= m <= n");
    const double beta = nrm2(b.data(), b.size());
    if (beta == 0.0) throw std::invalid_argument("arnoldi: zero initial vector");

    // Column j of the basis lives in V[j]; flattened on return.
    std::vector<std::vector<double>> V;
    V.reserve(static_cast<std::size_t>(m) + 1);
    {
        std::vector<double> v0(b.begin(), b.end());
        kern::scal(1.0 / beta, v0.data(), v0.size());
        V.push_back(std::move(v0));
    }
    std::vector<std::vector<double>> Hcols; // column j holds rows 0..j+1
    double a_norm_est = 0.0;
    bool breakdown = false;
    int m_ach = 0;

    std::vector<double> w(static_cast<std::size_t>(n));
    for (int j = 0; j < m; ++j) {
        A.apply(std::span<const double>(V[static_cast<std::size_t>(j)]),
                std::span<double>(w));
        a_norm_est = std::max(a_norm_est, nrm2(w.data(), w.size()));

        std::vector<double> hcol(static_cast<std::size_t>(j) + 2, 0.0);
        // Modified Gram-Schmidt ...
        for (int i = 0; i <= j; ++i) {
            const double* vi = V[static_cast<std::size_t>(i)].data();
            const double h = kern::dot(vi, w.data(), w.size());
            kern::axpy(-h, vi, w.data(), w.size());
            hcol[static_cast<std::size_t>(i)] = h;
        }
        // ... with one unconditional reorthogonalization pass.
        for (int i = 0; i <= j; ++i) {
            const double* vi = V[static_cast<std::size_t>(i)].data();
            const double c = kern::dot(vi, w.data(), w.size());
            kern::axpy(-c, vi, w.data(), w.size());
            hcol[static_cast<std::size_t>(i)] += c;
        }

        const double eta = nrm2(w.data(), w.size());
        hcol[static_cast<std::size_t>(j) + 1] = eta;
        Hcols.push_back(std::move(hcol));
        m_ach = j + 1;

        if (eta <= 1e-14 * a_norm_est) {
            breakdown = true;
            V.emplace_back(static_cast<std::size_t>(n), 0.0); // no continuation
            break;
        }
        std::vector<double> vnext(w);
        kern::scal(1.0 / eta, vnext.data(), vnext.size());
        V.push_back(std::move(vnext));
    }

    ArnoldiDecomposition dec;
    dec.n = n;
    dec.m = m_ach;
    dec.breakdown = breakdown;
    dec.eta_next = Hcols[static_cast<std::size_t>(m_ach) - 1][static_cast<std::size_t>(m_ach)];
    dec.V.resize(static_cast<std::size_t>(n) * (m_ach + 1));
    for (int j = 0; j <= m_ach; ++j)
        std::copy(V[static_cast<std::size_t>(j)].begin(), V[static_cast<std::size_t>(j)].end(),
                  dec.V.begin() + static_cast<std::size_t>(j) * n);
    dec.H.assign(static_cast<std::size_t>(m_ach + 1) * m_ach, 0.0);
    for (int j = 0; j < m_ach; ++j) {
        const auto& col = Hcols[static_cast<std::size_t>(j)];
        for (std::size_t i = 0; i < col.size(); ++i)
            dec.H[static_cast<std::size_t>(j) * (m_ach + 1) + i] = col[i];
    }
    return dec;
}

std::vector<double> restarted_phi_apply(const LinOp& A, std::span<const double> b,
                                        int k, int m, int max_cycles, double tol,
                                        RestartReport* report) {
    const int n = A.n;
    if (static_cast<int>(b.size()) != n)
        throw std::invalid_argument("restarted_phi_apply: vector size mismatch");
    if (m < 1) throw std::invalid_argument("restarted_phi_apply: m must be >= 1");
    if (tol <= 0.0) throw std::invalid_argument("restarted_phi_apply: tol must be > 0");
    const int m_eff = std::min(m, n);

    RestartReport rep;
    std::vector<double> accum(static_cast<std::size_t>(n), 0.0);
    const double beta = nrm2(b.data(), b.size());
    if (beta == 0.0) {
        rep.converged = true;
        if (report) *report = rep;
        return accum;
    }

    std::vector<double> start(b.begin(), b.end());
    kern::scal(1.0 / beta, start.data(), start.size());

    // Diagonal blocks H_j and the coupling scalars eta_j of H_hat_p.
    std::vector<DenseMatrix> blocks;
    std::vector<int> block_sizes;
    std::vector<double> etas; // eta_j couples block j to block j-1 (j >= 1)
    double eta_pending = 0.0;

    for (int p = 1; p <= max_cycles; ++p) {
        const ArnoldiDecomposition dec = arnoldi(A, std::span<const double>(start), m_eff);
        if (p >= 2) etas.push_back(eta_pending);
        DenseMatrix Hj(dec.m);
        for (int j = 0; j < dec.m; ++j)
            for (int i = 0; i < dec.m; ++i)
                Hj.at(i, j) = dec.h(i, j);
        blocks.push_back(std::move(Hj));
        block_sizes.push_back(dec.m);

        // Assemble H_hat_p (block lower bidiagonal; E_j = eta_j e_1 e_m^T).
        int N = 0;
        for (int sz : block_sizes) N += sz;
        DenseMatrix H_hat(N);
        int off = 0;
        for (std::size_t jb = 0; jb < blocks.size(); ++jb) {
            const DenseMatrix& Bl = blocks[jb];
            for (int j = 0; j < Bl.n(); ++j)
                for (int i = 0; i < Bl.n(); ++i)
                    H_hat.at(off + i, off + j) = Bl.at(i, j);
            if (jb >= 1) {
                const int prev_sz = block_sizes[jb - 1];
                H_hat.at(off, off - 1) = etas[jb - 1];
                (void)prev_sz;
            }
            off += Bl.n();
        }

        // phi_k(H_hat_p) e_1, restricted to the trailing block.
        const DenseMatrix PhiH = phi_small_dense(H_hat, k);
        const int off_last = N - dec.m;
        std::vector<double> y(static_cast<std::size_t>(dec.m));
        for (int t = 0; t < dec.m; ++t) y[static_cast<std::size_t>(t)] = PhiH.at(off_last + t, 0);

        // correction = beta * V_p y, added onto the accumulator.
        std::vector<double> corr(static_cast<std::size_t>(n), 0.0);
        for (int t = 0; t < dec.m; ++t)
            kern::axpy(beta * y[static_cast<std::size_t>(t)], dec.v(t), corr.data(),
                       corr.size());
        kern::axpy(1.0, corr.data(), accum.data(), accum.size());

        rep.cycles = p;
        rep.correction_norm = nrm2(corr.data(), corr.size());
        const double accum_norm = nrm2(accum.data(), accum.size());
        rep.converged = rep.correction_norm <= tol * accum_norm;

        if (dec.breakdown) {
            // The Krylov space closed: the result is exact (up to roundoff).
            rep.breakdown = true;
            rep.converged = true;
            break;
        }
        if (rep.converged) break;

        start.assign(dec.v(dec.m), dec.v(dec.m) + n);
        eta_pending = dec.eta_next;
    }

    if (report) *report = rep;
    return accum;
}

DenseMatrix phi_small_dense(const DenseMatrix& H, int k) {
    if (H.n() > 1024)
        throw std::invalid_argument("phi_small_dense: n > 1024 (pm guard)");
    return detail::phi_dense(k, H);
}

} // namespace etdsim
