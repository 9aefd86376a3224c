/// @file banded.cpp

#include "etdsim/banded.hpp"
#include "etdsim/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace etdsim {

BandedMatrix::BandedMatrix(int n, int lower_bw, int upper_bw)
    : n_(n), lower_(lower_bw), upper_(upper_bw) {
    if (n < 1) throw std::invalid_argument("BandedMatrix: n must be >= 1");
    if (lower_bw < 0 || upper_bw < 0 || lower_bw >= n || upper_bw >= n)
        throw std::invalid_argument("BandedMatrix: bandwidths must lie in [0, n)");
    offset_.resize(static_cast<std::size_t>(lower_ + upper_) + 1);
    std::size_t total = 0;
    for (int d = -lower_; d <= upper_; ++d) {
        offset_[static_cast<std::size_t>(d + lower_)] = total;
        total += static_cast<std::size_t>(n_ - std::abs(d));
    }
    data_.assign(total, 0.0);
}

BandedMatrix BandedMatrix::identity(int n) {
    BandedMatrix I(n, 0, 0);
    for (int i = 0; i < n; ++i) I.diag(0)[i] = 1.0;
    return I;
}

double* BandedMatrix::diag(int d) {
    if (d < -lower_ || d > upper_)
        throw std::out_of_range("BandedMatrix::diag: outside declared band");
    return data_.data() + offset_[static_cast<std::size_t>(d + lower_)];
}

const double* BandedMatrix::diag(int d) const {
    if (d < -lower_ || d > upper_)
        throw std::out_of_range("BandedMatrix::diag: outside declared band");
    return data_.data() + offset_[static_cast<std::size_t>(d + lower_)];
}

std::size_t BandedMatrix::diag_length(int d) const {
    return static_cast<std::size_t>(n_ - std::abs(d));
}

double BandedMatrix::at(int i, int j) const {
    if (i < 0 || i >= n_ || j < 0 || j >= n_)
        throw std::out_of_range("BandedMatrix::at: index out of range");
    const int d = j - i;
    if (d < -lower_ || d > upper_) return 0.0;
    return diag(d)[std::min(i, j)];
}

void BandedMatrix::set(int i, int j, double v) {
    if (i < 0 || i >= n_ || j < 0 || j >= n_)
        throw std::out_of_range("BandedMatrix::set: index out of range");
    const int d = j - i;
    if (d < -lower_ || d > upper_)
        throw std::out_of_range("BandedMatrix::set: entry outside declared band");
    diag(d)[std::min(i, j)] = v;
}

void BandedMatrix::scale(double alpha) {
    kern::scal(alpha, data_.data(), data_.size());
}

void BandedMatrix::add_scaled_identity(double alpha) {
    double* d0 = diag(0);
    for (int i = 0; i < n_; ++i) d0[i] += alpha;
}

double BandedMatrix::norm_inf() const {
    std::vector<double> row_sum(static_cast<std::size_t>(n_), 0.0);
    for (int d = -lower_; d <= upper_; ++d) {
        const double* v = diag(d);
        const int i0 = std::max(0, -d);
        const std::size_t len = diag_length(d);
        for (std::size_t t = 0; t < len; ++t)
            row_sum[static_cast<std::size_t>(i0) + t] += std::abs(v[t]);
    }
    double m = 0.0;
    for (double s : row_sum) m = std::max(m, s);
    return m;
}

double BandedMatrix::max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
}

void BandedMatrix::trim() {
    auto diag_is_zero = [this](int d) {
        const double* v = diag(d);
        const std::size_t len = diag_length(d);
        for (std::size_t t = 0; t < len; ++t)
            if (v[t] != 0.0) return false;
        return true;
    };
    int new_lower = lower_, new_upper = upper_;
    while (new_lower > 0 && diag_is_zero(-new_lower)) --new_lower;
    while (new_upper > 0 && diag_is_zero(new_upper)) --new_upper;
    if (new_lower == lower_ && new_upper == upper_) return;

    BandedMatrix out(n_, new_lower, new_upper);
    for (int d = -new_lower; d <= new_upper; ++d) {
        const double* src = diag(d);
        std::copy(src, src + diag_length(d), out.diag(d));
    }
    *this = std::move(out);
}

std::vector<double> BandedMatrix::to_dense() const {
    std::vector<double> a(static_cast<std::size_t>(n_) * n_, 0.0);
    for (int d = -lower_; d <= upper_; ++d) {
        const double* v = diag(d);
        const std::size_t len = diag_length(d);
        for (std::size_t t = 0; t < len; ++t) {
            const int i = static_cast<int>(t) + std::max(0, -d);
            const int j = i + d;
            a[static_cast<std::size_t>(i) * n_ + j] = v[t];
        }
    }
    return a;
}

BandedMatrix banded_matmul(const BandedMatrix& A, const BandedMatrix& B) {
    const int n = A.n();
    if (B.n() != n)
        throw std::invalid_argument("banded_matmul: dimension mismatch");
    const int lower = std::min(n - 1, A.lower_bandwidth() + B.lower_bandwidth());
    const int upper = std::min(n - 1, A.upper_bandwidth() + B.upper_bandwidth());
    BandedMatrix C(n, lower, upper);

    // C(i, i+dA+dB) += A(i, i+dA) * B(i+dA, i+dA+dB), accumulated per diagonal
    // pair over the contiguous row window where all three entries exist.
    for (int dA = -A.lower_bandwidth(); dA <= A.upper_bandwidth(); ++dA) {
        const double* a = A.diag(dA);
        for (int dB = -B.lower_bandwidth(); dB <= B.upper_bandwidth(); ++dB) {
            const int dC = dA + dB;
            if (dC < -lower || dC > upper) continue;
            const double* b = B.diag(dB);
            const int i_min = std::max({0, -dA, -dC});
            const int i_max = std::min({n - 1, n - 1 - dA, n - 1 - dC});
            if (i_min > i_max) continue;
            const std::size_t len = static_cast<std::size_t>(i_max - i_min + 1);
            double* c = C.diag(dC) + (i_min + std::min(dC, 0));
            const double* ap = a + (i_min + std::min(dA, 0));
            const double* bp = b + (i_min + dA + std::min(dB, 0));
            kern::emadd(c, ap, bp, len);
        }
    }
    return C;
}

BandedMatrix banded_add(double alpha, const BandedMatrix& A, double beta,
                        const BandedMatrix& B) {
    const int n = A.n();
    if (B.n() != n)
        throw std::invalid_argument("banded_add: dimension mismatch");
    const int lower = std::max(A.lower_bandwidth(), B.lower_bandwidth());
    const int upper = std::max(A.upper_bandwidth(), B.upper_bandwidth());
    BandedMatrix C(n, lower, upper);
    for (int d = -lower; d <= upper; ++d) {
        double* c = C.diag(d);
        const std::size_t len = C.diag_length(d);
        if (d >= -A.lower_bandwidth() && d <= A.upper_bandwidth())
            kern::axpy(alpha, A.diag(d), c, len);
        if (d >= -B.lower_bandwidth() && d <= B.upper_bandwidth())
            kern::axpy(beta, B.diag(d), c, len);
    }
    return C;
}

void banded_matvec(const BandedMatrix& A, const double* x, double* y) {
    const int n = A.n();
    std::fill(y, y + n, 0.0);
    for (int d = -A.lower_bandwidth(); d <= A.upper_bandwidth(); ++d) {
        const double* v = A.diag(d);
        const std::size_t len = A.diag_length(d);
        if (d >= 0)
            kern::emadd(y, v, x + d, len);
        else
            kern::emadd(y - d, v, x, len);
    }
}

std::vector<double> thomas_solve(const BandedMatrix& T,
                                 std::span<const double> b) {
    const int n = T.n();
    if (T.lower_bandwidth() > 1 || T.upper_bandwidth() > 1)
        throw std::invalid_argument("thomas_solve: matrix is not tridiagonal");
    if (static_cast<int>(b.size()) != n)
        throw std::invalid_argument("thomas_solve: rhs size mismatch");

    std::vector<double> diag(T.diag(0), T.diag(0) + n);
    std::vector<double> sub(static_cast<std::size_t>(std::max(0, n - 1)), 0.0);
    std::vector<double> sup(sub.size(), 0.0);
    if (T.lower_bandwidth() == 1)
        std::copy(T.diag(-1), T.diag(-1) + n - 1, sub.begin());
    if (T.upper_bandwidth() == 1)
        std::copy(T.diag(1), T.diag(1) + n - 1, sup.begin());

    std::vector<double> x(b.begin(), b.end());
    for (int i = 1; i < n; ++i) {
        const double piv = diag[i - 1];
        if (piv == 0.0) throw std::runtime_error("thomas_solve: zero pivot");
        const double m = sub[i - 1] / piv;
        diag[i] -= m * sup[i - 1];
        x[i] -= m * x[i - 1];
    }
    if (diag[n - 1] == 0.0) throw std::runtime_error("thomas_solve: zero pivot");
    x[n - 1] /= diag[n - 1];
    for (int i = n - 2; i >= 0; --i)
        x[i] = (x[i] - sup[i] * x[i + 1]) / diag[i];
    return x;
}

} // namespace etdsim
