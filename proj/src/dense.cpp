/// @file dense.cpp

#include "etdsim/dense.hpp"
#include "etdsim/banded.hpp"
#include "etdsim/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace etdsim {

DenseMatrix DenseMatrix::identity(int n) {
    DenseMatrix I(n);
    for (int i = 0; i < n; ++i) I.at(i, i) = 1.0;
    return I;
}

DenseMatrix DenseMatrix::from_banded(const BandedMatrix& A) {
    DenseMatrix D(A.n());
    const std::vector<double> a = A.to_dense();
    std::copy(a.begin(), a.end(), D.data());
    return D;
}

void DenseMatrix::scale(double alpha) {
    kern::scal(alpha, a_.data(), a_.size());
}

void DenseMatrix::add_scaled_identity(double alpha) {
    for (int i = 0; i < n_; ++i) at(i, i) += alpha;
}

void DenseMatrix::add_scaled(const DenseMatrix& B, double alpha) {
    if (B.n() != n_) throw std::invalid_argument("DenseMatrix: dimension mismatch");
    kern::axpy(alpha, B.a_.data(), a_.data(), a_.size());
}

double DenseMatrix::norm_inf() const {
    double m = 0.0;
    for (int i = 0; i < n_; ++i) {
        double s = 0.0;
        for (int j = 0; j < n_; ++j) s += std::abs(at(i, j));
        m = std::max(m, s);
    }
    return m;
}

double DenseMatrix::max_abs_diff(const DenseMatrix& B) const {
    if (B.n() != n_) throw std::invalid_argument("DenseMatrix: dimension mismatch");
    double m = 0.0;
    for (std::size_t t = 0; t < a_.size(); ++t)
        m = std::max(m, std::abs(a_[t] - B.a_[t]));
    return m;
}

void DenseMatrix::matvec(const double* x, double* y) const {
    for (int i = 0; i < n_; ++i)
        y[i] = kern::dot(a_.data() + static_cast<std::size_t>(i) * n_, x,
                         static_cast<std::size_t>(n_));
}

DenseMatrix dense_matmul(const DenseMatrix& A, const DenseMatrix& B) {
    const int n = A.n();
    if (B.n() != n) throw std::invalid_argument("dense_matmul: dimension mismatch");
    DenseMatrix C(n);
    // C(i, :) += A(i, k) * B(k, :)
    for (int i = 0; i < n; ++i) {
        double* c = C.data() + static_cast<std::size_t>(i) * n;
        for (int k = 0; k < n; ++k) {
            const double aik = A.at(i, k);
            if (aik != 0.0)
                kern::axpy(aik, B.data() + static_cast<std::size_t>(k) * n, c,
                           static_cast<std::size_t>(n));
        }
    }
    return C;
}

} // namespace etdsim
