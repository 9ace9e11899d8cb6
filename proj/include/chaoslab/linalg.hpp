#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace chaoslab {

/// Largest supported matrix dimension. Everything in this library is aimed
/// at small dense systems; storage is inline so products never allocate.
inline constexpr std::size_t kMaxDim = 8;

using Vector = std::vector<double>;

/**
 * Dense square real matrix of dimension 1..kMaxDim, row-major, stored inline.
 *
 * Construction from user data validates shape and finiteness. Arithmetic
 * does not re-validate; the norm and spectrum routines reject non-finite
 * input instead.
 */
class Matrix {
public:
    Matrix() = default;

    /// Zero matrix of the given dimension.
    explicit Matrix(std::size_t dim);

    /// From row-major entries; entries.size() must equal dim*dim.
    Matrix(std::size_t dim, std::span<const double> row_major);

    /// Nested rows, e.g. {{1, 1}, {0, 1}}.
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    static Matrix identity(std::size_t dim);
    static Matrix diagonal(std::span<const double> diag);
    static Matrix scalar(std::size_t dim, double value);

    std::size_t dim() const noexcept { return dim_; }

    double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * kMaxDim + c]; }
    double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * kMaxDim + c]; }

    Matrix transpose() const;
    double trace() const noexcept;
    double max_abs() const noexcept;
    double frobenius() const noexcept;
    bool is_finite() const noexcept;

    /// Row-major copy of the entries.
    std::vector<double> row_major() const;

    Matrix& operator*=(double s) noexcept;
    Matrix& operator+=(const Matrix& rhs);
    Matrix& operator-=(const Matrix& rhs);

    friend Matrix operator*(const Matrix& a, const Matrix& b);
    friend Vector operator*(const Matrix& a, std::span<const double> x);
    friend Matrix operator*(double s, Matrix a) noexcept { return a *= s; }
    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }

    friend bool operator==(const Matrix& a, const Matrix& b) noexcept;

private:
    std::size_t dim_ = 0;
    std::array<double, kMaxDim * kMaxDim> data_{};
};

/// Submatrix copy of rows/cols [offset, offset + size).
Matrix block(const Matrix& m, std::size_t row, std::size_t col, std::size_t size);

/// Assemble a 2x2 block matrix [[a, b], [c, d]] of equal-size blocks.
Matrix assemble_blocks(const Matrix& a, const Matrix& b, const Matrix& c, const Matrix& d);

/// Euclidean vector norm.
double norm2(std::span<const double> x) noexcept;

// ---------------------------------------------------------------------------
// Norms and spectra

/// Largest singular value, sqrt(lambda_max(A^T A)).
double op_norm(const Matrix& a);

/// Smallest singular value, sqrt(lambda_min(A^T A)); zero for singular input.
double co_norm(const Matrix& a);

/// Eigenvalues of a symmetric matrix, ascending, by cyclic Jacobi rotations.
std::vector<double> sym_eigs(const Matrix& g);

/// Inverse by Gaussian elimination with partial pivoting. Throws
/// InvalidInput when a pivot vanishes.
Matrix inverse(const Matrix& a);

struct Spectrum {
    double radius = 0.0;
    std::size_t roots_found = 0;
    /// Largest normwise backward error of the characteristic-polynomial roots.
    double residual = 0.0;
    std::vector<std::complex<double>> eigenvalues;
};

/**
 * Spectral radius through the characteristic polynomial.
 *
 * The matrix is balanced (Parlett-Reinsch, radix 2) and scaled to unit max
 * entry, its characteristic polynomial is formed by Faddeev-LeVerrier, and
 * the roots are found by Aberth-Ehrlich simultaneous iteration. Tight root
 * clusters (the numerical image of a defective eigenvalue) are replaced by
 * their centroid. Throws ConvergenceError if the iteration cap is reached
 * with a backward error above 1e-10.
 */
Spectrum spectral_radius(const Matrix& a);

/// Coefficients c_0..c_d of det(lambda I - A), c_d = 1.
std::vector<double> characteristic_polynomial(const Matrix& a);

/// Roots of sum_k c_k z^k via Aberth-Ehrlich; c.back() must be nonzero.
std::vector<std::complex<double>> polynomial_roots(std::span<const double> coeffs, double* residual = nullptr);

// ---------------------------------------------------------------------------
// Overflow-safe running products

/**
 * A matrix stored as exp(log_scale) * unit with op_norm(unit) in [0.5, 2].
 *
 * Long switching products reach magnitudes like 2^±1000 and beyond; this
 * keeps the direction in a well-scaled matrix and the size in a log.
 */
class LogScaledMatrix {
public:
    LogScaledMatrix() = default;
    explicit LogScaledMatrix(const Matrix& m);

    static LogScaledMatrix identity(std::size_t dim);

    std::size_t dim() const noexcept { return unit_.dim(); }
    const Matrix& unit() const noexcept { return unit_; }
    double log_scale() const noexcept { return log_scale_; }

    /// Returns factor * this, renormalized.
    [[nodiscard]] LogScaledMatrix left_multiplied(const Matrix& factor) const;

    /// Returns this * rhs (rhs applied first).
    [[nodiscard]] LogScaledMatrix operator*(const LogScaledMatrix& rhs) const;

    double log_op_norm() const;
    double log_co_norm() const;

    /// exp(log_scale) * unit; may overflow to inf for extreme scales.
    Matrix to_matrix() const;

private:
    LogScaledMatrix(const Matrix& unit, double log_scale);
    void renormalize();

    Matrix unit_;
    double log_scale_ = 0.0;
};

}  // namespace chaoslab
