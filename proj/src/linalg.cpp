#include "chaoslab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "chaoslab/errors.hpp"

namespace chaoslab {

namespace {

void check_dim(std::size_t dim) {
    if (dim < 1 || dim > kMaxDim) {
        throw InvalidInput("matrix dimension " + std::to_string(dim) + " outside supported range 1.." +
                           std::to_string(kMaxDim));
    }
}

void require_finite(const Matrix& a, const char* op) {
    if (!a.is_finite()) {
        throw InvalidInput(std::string(op) + ": matrix has non-finite entries");
    }
}

// A^T A with exact symmetry.
Matrix gram(const Matrix& a) {
    const std::size_t d = a.dim();
    Matrix g(d);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = i; j < d; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < d; ++k) s += a(k, i) * a(k, j);
            g(i, j) = s;
            g(j, i) = s;
        }
    }
    return g;
}

std::vector<double> jacobi_eigenvalues(Matrix a) {
    const std::size_t d = a.dim();
    constexpr int kMaxSweeps = 100;
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        double off = 0.0;
        double diag = 0.0;
        for (std::size_t p = 0; p < d; ++p) {
            diag += a(p, p) * a(p, p);
            for (std::size_t q = p + 1; q < d; ++q) off += a(p, q) * a(p, q);
        }
        if (off == 0.0 || off <= 1e-34 * diag) break;

        for (std::size_t p = 0; p + 1 < d; ++p) {
            for (std::size_t q = p + 1; q < d; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double app = a(p, p);
                const double aqq = a(q, q);
                // Skip rotations that cannot change either diagonal entry.
                if (std::abs(apq) < 1e-18 * std::min(std::abs(app), std::abs(aqq))) {
                    a(p, q) = a(q, p) = 0.0;
                    continue;
                }
                const double theta = (aqq - app) / (2.0 * apq);
                const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < d; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < d; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                a(p, q) = a(q, p) = 0.0;
            }
        }
    }
    std::vector<double> eig(d);
    for (std::size_t i = 0; i < d; ++i) eig[i] = a(i, i);
    std::sort(eig.begin(), eig.end());
    return eig;
}

}  // namespace

Matrix::Matrix(std::size_t dim) : dim_(dim) { check_dim(dim); }

Matrix::Matrix(std::size_t dim, std::span<const double> row_major) : dim_(dim) {
    check_dim(dim);
    if (row_major.size() != dim * dim) {
        throw InvalidInput("expected " + std::to_string(dim * dim) + " entries, got " +
                           std::to_string(row_major.size()));
    }
    for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = 0; c < dim; ++c) (*this)(r, c) = row_major[r * dim + c];
    if (!is_finite()) throw InvalidInput("matrix has non-finite entries");
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) : dim_(rows.size()) {
    check_dim(dim_);
    std::size_t r = 0;
    for (const auto& row : rows) {
        if (row.size() != dim_) throw InvalidInput("matrix must be square");
        std::size_t c = 0;
        for (double v : row) (*this)(r, c++) = v;
        ++r;
    }
    if (!is_finite()) throw InvalidInput("matrix has non-finite entries");
}

Matrix Matrix::identity(std::size_t dim) { return scalar(dim, 1.0); }

Matrix Matrix::scalar(std::size_t dim, double value) {
    Matrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = value;
    return m;
}

Matrix Matrix::diagonal(std::span<const double> diag) {
    Matrix m(diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
    return m;
}

Matrix Matrix::transpose() const {
    Matrix t(dim_);
    for (std::size_t r = 0; r < dim_; ++r)
        for (std::size_t c = 0; c < dim_; ++c) t(c, r) = (*this)(r, c);
    return t;
}

double Matrix::trace() const noexcept {
    double s = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) s += (*this)(i, i);
    return s;
}

double Matrix::max_abs() const noexcept {
    double m = 0.0;
    for (std::size_t r = 0; r < dim_; ++r)
        for (std::size_t c = 0; c < dim_; ++c) m = std::max(m, std::abs((*this)(r, c)));
    return m;
}

double Matrix::frobenius() const noexcept {
    const double scale = max_abs();
    if (scale == 0.0 || !std::isfinite(scale)) return scale;
    double s = 0.0;
    for (std::size_t r = 0; r < dim_; ++r)
        for (std::size_t c = 0; c < dim_; ++c) {
            const double v = (*this)(r, c) / scale;
            s += v * v;
        }
    return scale * std::sqrt(s);
}

bool Matrix::is_finite() const noexcept {
    for (std::size_t r = 0; r < dim_; ++r)
        for (std::size_t c = 0; c < dim_; ++c)
            if (!std::isfinite((*this)(r, c))) return false;
    return true;
}

std::vector<double> Matrix::row_major() const {
    std::vector<double> out;
    out.reserve(dim_ * dim_);
    for (std::size_t r = 0; r < dim_; ++r)
        for (std::size_t c = 0; c < dim_; ++c) out.push_back((*this)(r, c));
    return out;
}

Matrix& Matrix::operator*=(double s) noexcept {
    for (std::size_t r = 0; r < dim_; ++r)
        for (std::size_t c = 0; c < dim_; ++c) (*this)(r, c) *= s;
    return *this;
}

Matrix& Matrix::operator+=(const Matrix& rhs) {
    if (rhs.dim_ != dim_) throw InvalidInput("dimension mismatch in matrix sum");
    for (std::size_t r = 0; r < dim_; ++r)
        for (std::size_t c = 0; c < dim_; ++c) (*this)(r, c) += rhs(r, c);
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& rhs) {
    if (rhs.dim_ != dim_) throw InvalidInput("dimension mismatch in matrix difference");
    for (std::size_t r = 0; r < dim_; ++r)
        for (std::size_t c = 0; c < dim_; ++c) (*this)(r, c) -= rhs(r, c);
    return *this;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.dim_ != b.dim_) throw InvalidInput("dimension mismatch in matrix product");
    const std::size_t d = a.dim_;
    Matrix out(d);
    for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t k = 0; k < d; ++k) {
            const double ark = a(r, k);
            if (ark == 0.0) continue;
            for (std::size_t c = 0; c < d; ++c) out(r, c) += ark * b(k, c);
        }
    }
    return out;
}

Vector operator*(const Matrix& a, std::span<const double> x) {
    if (x.size() != a.dim_) throw InvalidInput("dimension mismatch in matrix-vector product");
    Vector y(a.dim_, 0.0);
    for (std::size_t r = 0; r < a.dim_; ++r) {
        double s = 0.0;
        for (std::size_t c = 0; c < a.dim_; ++c) s += a(r, c) * x[c];
        y[r] = s;
    }
    return y;
}

bool operator==(const Matrix& a, const Matrix& b) noexcept {
    if (a.dim_ != b.dim_) return false;
    for (std::size_t r = 0; r < a.dim_; ++r)
        for (std::size_t c = 0; c < a.dim_; ++c)
            if (a(r, c) != b(r, c)) return false;
    return true;
}

Matrix block(const Matrix& m, std::size_t row, std::size_t col, std::size_t size) {
    if (row + size > m.dim() || col + size > m.dim()) throw InvalidInput("block outside matrix");
    Matrix out(size);
    for (std::size_t r = 0; r < size; ++r)
        for (std::size_t c = 0; c < size; ++c) out(r, c) = m(row + r, col + c);
    return out;
}

Matrix assemble_blocks(const Matrix& a, const Matrix& b, const Matrix& c, const Matrix& d) {
    const std::size_t n = a.dim();
    if (b.dim() != n || c.dim() != n || d.dim() != n) throw InvalidInput("blocks must share a dimension");
    Matrix out(2 * n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t s = 0; s < n; ++s) {
            out(r, s) = a(r, s);
            out(r, n + s) = b(r, s);
            out(n + r, s) = c(r, s);
            out(n + r, n + s) = d(r, s);
        }
    }
    return out;
}

double norm2(std::span<const double> x) noexcept {
    double scale = 0.0;
    for (double v : x) scale = std::max(scale, std::abs(v));
    if (scale == 0.0 || !std::isfinite(scale)) return scale;
    double s = 0.0;
    for (double v : x) s += (v / scale) * (v / scale);
    return scale * std::sqrt(s);
}

std::vector<double> sym_eigs(const Matrix& g) {
    require_finite(g, "sym_eigs");
    const double tol = 1e-12 * std::max(1.0, g.max_abs());
    for (std::size_t i = 0; i < g.dim(); ++i)
        for (std::size_t j = i + 1; j < g.dim(); ++j)
            if (std::abs(g(i, j) - g(j, i)) > tol) throw InvalidInput("sym_eigs: matrix is not symmetric");
    return jacobi_eigenvalues(g);
}

double op_norm(const Matrix& a) {
    require_finite(a, "op_norm");
    const double scale = a.max_abs();
    if (scale == 0.0) return 0.0;
    Matrix unit = a;
    unit *= 1.0 / scale;
    const auto eig = jacobi_eigenvalues(gram(unit));
    return scale * std::sqrt(std::max(eig.back(), 0.0));
}

Matrix inverse(const Matrix& a) {
    require_finite(a, "inverse");
    const std::size_t d = a.dim();
    Matrix lu = a;
    Matrix inv = Matrix::identity(d);
    for (std::size_t col = 0; col < d; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < d; ++r)
            if (std::abs(lu(r, col)) > std::abs(lu(pivot, col))) pivot = r;
        if (lu(pivot, col) == 0.0) throw InvalidInput("inverse: matrix is singular");
        if (pivot != col) {
            for (std::size_t c = 0; c < d; ++c) {
                std::swap(lu(pivot, c), lu(col, c));
                std::swap(inv(pivot, c), inv(col, c));
            }
        }
        const double p = lu(col, col);
        for (std::size_t r = 0; r < d; ++r) {
            if (r == col) continue;
            const double f = lu(r, col) / p;
            if (f == 0.0) continue;
            for (std::size_t c = 0; c < d; ++c) {
                lu(r, c) -= f * lu(col, c);
                inv(r, c) -= f * inv(col, c);
            }
        }
    }
    for (std::size_t r = 0; r < d; ++r) {
        const double p = lu(r, r);
        for (std::size_t c = 0; c < d; ++c) inv(r, c) /= p;
    }
    return inv;
}

double co_norm(const Matrix& a) {
    require_finite(a, "co_norm");
    const double scale = a.max_abs();
    if (scale == 0.0) return 0.0;
    Matrix unit = a;
    unit *= 1.0 / scale;
    const auto eig = jacobi_eigenvalues(gram(unit));
    const double lo = std::max(eig.front(), 0.0);
    const double hi = eig.back();
    // The Gram route loses relative accuracy like cond^2 * eps; past cond ~ 1e3
    // switch to 1 / op_norm(A^-1), which loses only cond * eps.
    if (lo >= 1e-6 * hi) return scale * std::sqrt(lo);
    Matrix inv;
    try {
        inv = inverse(unit);
    } catch (const InvalidInput&) {
        return scale * std::sqrt(lo);
    }
    if (!inv.is_finite()) return scale * std::sqrt(lo);
    const double inv_norm = op_norm(inv);
    return inv_norm > 0.0 ? scale / inv_norm : 0.0;
}

}  // namespace chaoslab
