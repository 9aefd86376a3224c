#pragma once
/// @file dense.hpp
/// @brief Small square dense matrices (row-major) for test oracles, the
///        restarted-Krylov block Hessenberg evaluations, and block assembly.

#include <vector>

namespace etdsim {

class BandedMatrix;

class DenseMatrix {
public:
    DenseMatrix() = default;
    explicit DenseMatrix(int n) : n_(n), a_(static_cast<std::size_t>(n) * n, 0.0) {}

    static DenseMatrix identity(int n);
    static DenseMatrix from_banded(const BandedMatrix& A);

    int n() const { return n_; }
    double& at(int i, int j) { return a_[static_cast<std::size_t>(i) * n_ + j]; }
    double at(int i, int j) const { return a_[static_cast<std::size_t>(i) * n_ + j]; }
    const double* data() const { return a_.data(); }
    double* data() { return a_.data(); }

    void scale(double alpha);
    void add_scaled_identity(double alpha);
    /// this += alpha * B
    void add_scaled(const DenseMatrix& B, double alpha);
    double norm_inf() const;
    double max_abs_diff(const DenseMatrix& B) const;

    /// y = A x
    void matvec(const double* x, double* y) const;

private:
    int n_ = 0;
    std::vector<double> a_;
};

/// C = A * B (saxpy-ordered product over the runtime kernel backend).
DenseMatrix dense_matmul(const DenseMatrix& A, const DenseMatrix& B);

} // namespace etdsim
