#pragma once
/// @file krylov.hpp
/// @brief Restarted Krylov approximation of phi_k(A)b: per-cycle Arnoldi
///        decompositions chained through a block lower-bidiagonal Hessenberg
///        matrix, accumulating one additive correction per cycle so only the
///        current basis block is ever stored.

#include "etdsim/dense.hpp"

#include <functional>
#include <span>
#include <vector>

namespace etdsim {

/// Linear operator v -> A v given by a callback; n is the vector length.
struct LinOp {
    int n = 0;
    std::function<void(std::span<const double>, std::span<double>)> apply;
};

/// One Arnoldi cycle A V_m = V_{m+1} H_tilde.
struct ArnoldiDecomposition {
    int n = 0;
    int m = 0;              ///< achieved subspace dimension (<= requested)
    std::vector<double> V;  ///< n x (m+1) basis, column-major (m+1 columns)
    std::vector<double> H;  ///< (m+1) x m Hessenberg, column-major, ld = m+1
    double eta_next = 0.0;  ///< eta_{m+1,m}
    bool breakdown = false; ///< subspace closed at dimension m

    double h(int i, int j) const { return H[static_cast<std::size_t>(j) * (m + 1) + i]; }
    const double* v(int j) const { return V.data() + static_cast<std::size_t>(j) * n; }
};

/// Modified Gram-Schmidt Arnoldi with one full reorthogonalization pass.
/// Breakdown is flagged when the next residual norm falls below
/// 1e-14 * (an estimate of ||A|| from the largest ||A v_j|| seen); the exact
/// invariant subspace found so far is returned.  Throws on a zero start vector.
ArnoldiDecomposition arnoldi(const LinOp& A, std::span<const double> b, int m);

/// Outcome bookkeeping for restarted_phi_apply.
struct RestartReport {
    int cycles = 0;
    bool converged = false;
    bool breakdown = false;      ///< a cycle closed the Krylov space (result exact)
    double correction_norm = 0.0; ///< last additive correction, absolute
};

/// Approximate phi_k(A) b by restarting: cycle p runs an m-step Arnoldi from
/// the previous continuation vector, extends the block Hessenberg matrix
/// H_hat_p (diagonal blocks H_j, subdiagonal coupling eta_j e_1 e_m^T),
/// evaluates phi_k(H_hat_p) e_1 on the full pm x pm block matrix, and adds the
/// trailing-block part through the current basis:
///   phi^p = phi^{p-1} + beta V_p [phi_k(H_hat_p) e_1]_trailing.
/// Stops when the correction norm drops to tol * ||phi^p|| or after max_cycles
/// (reported via RestartReport; non-convergence is the caller's decision).
std::vector<double> restarted_phi_apply(const LinOp& A, std::span<const double> b,
                                        int k, int m, int max_cycles, double tol,
                                        RestartReport* report = nullptr);

/// phi_k of a small dense matrix (the assembled block Hessenberg); guarded to
/// n <= 1024, accuracy per the dense oracle contract.
DenseMatrix phi_small_dense(const DenseMatrix& H, int k);

} // namespace etdsim
