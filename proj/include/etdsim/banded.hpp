#pragma once
/// @file banded.hpp
/// @brief Square banded matrix with diagonal-major storage, plus the banded
///        products, matrix-vector products, and tridiagonal solves used by the
///        vertical-operator pipeline.

#include <cstddef>
#include <span>
#include <vector>

namespace etdsim {

/// Square matrix with explicit lower/upper bandwidth.  Entries are stored by
/// diagonals: diagonal d (d = 0 main, d > 0 super, d < 0 sub) holds n - |d|
/// values, with entry t of diagonal d sitting at row (d >= 0 ? t : t - d) and
/// column (d >= 0 ? t + d : t).  Reads outside the declared band return exact
/// zero.  When a product's bandwidth would reach or exceed n the band is
/// clamped to n - 1, i.e. storage degenerates smoothly to a (redundant) dense
/// layout without a representation switch.
class BandedMatrix {
public:
    BandedMatrix() = default;
    BandedMatrix(int n, int lower_bw, int upper_bw);

    static BandedMatrix identity(int n);

    int n() const { return n_; }
    int lower_bandwidth() const { return lower_; }
    int upper_bandwidth() const { return upper_; }

    /// Pointer to the contiguous values of diagonal d; length diag_length(d).
    /// d must lie within [-lower_bandwidth(), upper_bandwidth()].
    double* diag(int d);
    const double* diag(int d) const;
    std::size_t diag_length(int d) const;

    /// Entry (i, j); exact 0.0 outside the declared band.
    double at(int i, int j) const;
    /// Assign entry (i, j); throws std::out_of_range outside the band.
    void set(int i, int j, double v);

    void scale(double alpha);
    /// A += alpha * I
    void add_scaled_identity(double alpha);
    /// Max absolute row sum.
    double norm_inf() const;
    /// Largest absolute entry.
    double max_abs() const;
    /// Shrink the declared band to the outermost diagonals holding a nonzero
    /// entry (declared bandwidth == structural bandwidth afterwards).
    void trim();

    /// Row-major n*n dense copy.
    std::vector<double> to_dense() const;

private:
    int n_ = 0, lower_ = 0, upper_ = 0;
    std::vector<double> data_;
    std::vector<std::size_t> offset_; // per-diagonal start, index d + lower_
};

/// Exact banded product.  Result bandwidths are the sums of the operand
/// bandwidths, clamped to n - 1.  Cost O((1+b_A)(1+b_B) n).
BandedMatrix banded_matmul(const BandedMatrix& A, const BandedMatrix& B);

/// alpha*A + beta*B with the union band.
BandedMatrix banded_add(double alpha, const BandedMatrix& A, double beta,
                        const BandedMatrix& B);

/// y = A x (overwrites y).
void banded_matvec(const BandedMatrix& A, const double* x, double* y);

/// Solve T x = b for tridiagonal T (bandwidths <= 1) by the Thomas algorithm
/// without pivoting; intended for diagonally dominant systems such as
/// I - dt*D_z.  Throws std::runtime_error on a vanishing pivot.
std::vector<double> thomas_solve(const BandedMatrix& T,
                                 std::span<const double> b);

} // namespace etdsim
