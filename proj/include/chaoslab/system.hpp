#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "chaoslab/linalg.hpp"
#include "chaoslab/word.hpp"

namespace chaoslab {

/// Ratio co_norm / op_norm below which a generator counts as singular.
inline constexpr double kSingularityTolerance = 1e-12;

/**
 * The generators S_1..S_K of x_n = S_{sigma(n)} x_{n-1}.
 *
 * Every generator must be finite, share one dimension and be nonsingular
 * (co_norm > 1e-12 * op_norm). Validation errors name the 1-based label of
 * the offending matrix.
 */
class MatrixSystem {
public:
    MatrixSystem() = default;
    explicit MatrixSystem(std::vector<Matrix> generators, std::string name = {});

    std::size_t dim() const noexcept { return generators_.empty() ? 0 : generators_.front().dim(); }
    int size() const noexcept { return static_cast<int>(generators_.size()); }
    const std::string& name() const noexcept { return name_; }

    /// Generator for 1-based label k.
    const Matrix& operator[](int label) const;
    const std::vector<Matrix>& generators() const noexcept { return generators_; }

    /// Inverse of the generator for 1-based label k.
    const Matrix& inverse(int label) const;

    /// {c * S_k}.
    MatrixSystem scaled(double factor) const;

private:
    std::vector<Matrix> generators_;
    std::vector<Matrix> inverses_;
    std::string name_;
};

/// S_{w(n)} ... S_{w(1)}: the first symbol is applied first (rightmost).
/// The empty word gives the identity with log-scale 0.
LogScaledMatrix word_product(const MatrixSystem& sys, const Word& w);

/**
 * A running product P together with P^{-1}, both log-scaled. The co-norm is
 * read as 1 / ||P^{-1}||, which stays accurate when P is so badly
 * conditioned that its smallest singular value is lost to rounding in P
 * itself.
 */
class TrackedProduct {
public:
    explicit TrackedProduct(std::size_t dim);

    /// P <- S_s P.
    void push(const MatrixSystem& sys, Symbol s);
    /// P <- B P, where B is another tracked product.
    void apply(const TrackedProduct& block);

    const LogScaledMatrix& forward() const noexcept { return forward_; }
    const LogScaledMatrix& backward() const noexcept { return backward_; }
    double log_op_norm() const { return forward_.log_op_norm(); }
    double log_co_norm() const { return -backward_.log_op_norm(); }

private:
    LogScaledMatrix forward_;
    LogScaledMatrix backward_;
};

TrackedProduct tracked_product(const MatrixSystem& sys, const Word& w);

/// Same product without log scaling, for short words.
Matrix plain_product(const MatrixSystem& sys, const Word& w);

/// The paired shears alpha*[[1,1],[0,1]] and beta*[[1,0],[1,1]].
MatrixSystem shear_pair(double alpha, double beta);

/// {diag(1/2, 1/2), diag(2, 2)}.
MatrixSystem halving_doubling_pair();

}  // namespace chaoslab
