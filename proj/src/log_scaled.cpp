#include <cmath>

#include "chaoslab/errors.hpp"
#include "chaoslab/linalg.hpp"

namespace chaoslab {

LogScaledMatrix::LogScaledMatrix(const Matrix& m) : unit_(m), log_scale_(0.0) {
    if (!m.is_finite()) throw InvalidInput("LogScaledMatrix: non-finite entries");
    renormalize();
}

LogScaledMatrix::LogScaledMatrix(const Matrix& unit, double log_scale) : unit_(unit), log_scale_(log_scale) {
    renormalize();
}

LogScaledMatrix LogScaledMatrix::identity(std::size_t dim) { return LogScaledMatrix(Matrix::identity(dim), 0.0); }

void LogScaledMatrix::renormalize() {
    const double m = unit_.max_abs();
    if (m == 0.0) return;  // zero matrix: nothing to normalize
    const double d = static_cast<double>(unit_.dim());
    // max_abs <= op_norm <= d * max_abs; only pay for op_norm when the cheap
    // bounds cannot decide.
    if (m >= 0.5 && d * m <= 2.0) return;
    double n = m > 2.0 || d * m < 0.5 ? 0.0 : op_norm(unit_);
    if (n >= 0.5 && n <= 2.0) return;
    if (n == 0.0) n = op_norm(unit_);
    if (!std::isfinite(n) || n == 0.0) throw InvalidInput("LogScaledMatrix: cannot renormalize");
    unit_ *= 1.0 / n;
    log_scale_ += std::log(n);
}

LogScaledMatrix LogScaledMatrix::left_multiplied(const Matrix& factor) const {
    return LogScaledMatrix(factor * unit_, log_scale_);
}

LogScaledMatrix LogScaledMatrix::operator*(const LogScaledMatrix& rhs) const {
    return LogScaledMatrix(unit_ * rhs.unit_, log_scale_ + rhs.log_scale_);
}

double LogScaledMatrix::log_op_norm() const { return log_scale_ + std::log(op_norm(unit_)); }

double LogScaledMatrix::log_co_norm() const { return log_scale_ + std::log(co_norm(unit_)); }

Matrix LogScaledMatrix::to_matrix() const {
    Matrix m = unit_;
    m *= std::exp(log_scale_);
    return m;
}

}  // namespace chaoslab
