#include "chaoslab/system.hpp"

#include <cmath>
#include <string>

#include "chaoslab/errors.hpp"

namespace chaoslab {

MatrixSystem::MatrixSystem(std::vector<Matrix> generators, std::string name)
    : generators_(std::move(generators)), name_(std::move(name)) {
    if (generators_.empty()) throw InvalidInput("a system needs at least one generator");
    const std::size_t d = generators_.front().dim();
    for (std::size_t k = 0; k < generators_.size(); ++k) {
        const auto label = std::to_string(k + 1);
        const Matrix& s = generators_[k];
        if (s.dim() != d) throw InvalidInput("matrix " + label + " has dimension " + std::to_string(s.dim()) +
                                             ", expected " + std::to_string(d));
        if (!s.is_finite()) throw InvalidInput("matrix " + label + " has non-finite entries");
        const double hi = op_norm(s);
        const double lo = co_norm(s);
        if (hi == 0.0 || lo <= kSingularityTolerance * hi) {
            throw InvalidInput("matrix " + label + " is singular (co-norm/op-norm = " + std::to_string(hi > 0 ? lo / hi : 0.0) +
                               "); generators must be nonsingular");
        }
        inverses_.push_back(chaoslab::inverse(s));
    }
}

const Matrix& MatrixSystem::operator[](int label) const {
    if (label < 1 || label > size()) throw InvalidInput("generator label " + std::to_string(label) + " out of range");
    return generators_[static_cast<std::size_t>(label - 1)];
}

const Matrix& MatrixSystem::inverse(int label) const {
    if (label < 1 || label > size()) throw InvalidInput("generator label " + std::to_string(label) + " out of range");
    return inverses_[static_cast<std::size_t>(label - 1)];
}

MatrixSystem MatrixSystem::scaled(double factor) const {
    if (!(factor > 0.0) || !std::isfinite(factor)) throw InvalidInput("scale factor must be positive and finite");
    std::vector<Matrix> g = generators_;
    for (auto& m : g) m *= factor;
    return MatrixSystem(std::move(g), name_);
}

LogScaledMatrix word_product(const MatrixSystem& sys, const Word& w) {
    if (w.alphabet() != sys.size()) throw InvalidInput("word alphabet does not match the system");
    LogScaledMatrix p = LogScaledMatrix::identity(sys.dim());
    for (Symbol s : w.symbols()) p = p.left_multiplied(sys[s]);
    return p;
}

TrackedProduct::TrackedProduct(std::size_t dim)
    : forward_(LogScaledMatrix::identity(dim)), backward_(LogScaledMatrix::identity(dim)) {}

void TrackedProduct::push(const MatrixSystem& sys, Symbol s) {
    forward_ = forward_.left_multiplied(sys[s]);
    backward_ = backward_ * LogScaledMatrix(sys.inverse(s));
}

void TrackedProduct::apply(const TrackedProduct& block) {
    forward_ = block.forward_ * forward_;
    backward_ = backward_ * block.backward_;
}

TrackedProduct tracked_product(const MatrixSystem& sys, const Word& w) {
    if (w.alphabet() != sys.size()) throw InvalidInput("word alphabet does not match the system");
    TrackedProduct p(sys.dim());
    for (Symbol s : w.symbols()) p.push(sys, s);
    return p;
}

Matrix plain_product(const MatrixSystem& sys, const Word& w) {
    if (w.alphabet() != sys.size()) throw InvalidInput("word alphabet does not match the system");
    Matrix p = Matrix::identity(sys.dim());
    for (Symbol s : w.symbols()) p = sys[s] * p;
    return p;
}

MatrixSystem shear_pair(double alpha, double beta) {
    if (alpha == 0.0 || beta == 0.0) throw InvalidInput("shear parameters must be nonzero");
    Matrix upper{{1, 1}, {0, 1}};
    Matrix lower{{1, 0}, {1, 1}};
    upper *= alpha;
    lower *= beta;
    return MatrixSystem({upper, lower}, "shear-pair");
}

MatrixSystem halving_doubling_pair() {
    return MatrixSystem({Matrix::scalar(2, 0.5), Matrix::scalar(2, 2.0)}, "halving-doubling");
}

}  // namespace chaoslab
