#include <cmath>
#include <algorithm>
#include <deque>
#include <limits>
#include <optional>

#include "chaoslab/stability.hpp"

namespace chaoslab {

namespace {

constexpr double kSpanTolerance = 1e-10;

double frobenius_dot(const Matrix& a, const Matrix& b) {
    double s = 0.0;
    for (std::size_t r = 0; r < a.dim(); ++r)
        for (std::size_t c = 0; c < a.dim(); ++c) s += a(r, c) * b(r, c);
    return s;
}

// Reduce m against an orthonormal basis (two Gram-Schmidt passes). Returns
// the normalized remainder if it is independent at the span tolerance.
std::optional<Matrix> independent_part(Matrix m, const std::vector<Matrix>& basis) {
    const double original = m.frobenius();
    if (original == 0.0) return std::nullopt;
    for (int pass = 0; pass < 2; ++pass) {
        for (const auto& b : basis) {
            Matrix proj = b;
            proj *= frobenius_dot(m, b);
            m -= proj;
        }
    }
    const double rest = m.frobenius();
    if (rest <= kSpanTolerance * original) return std::nullopt;
    m *= 1.0 / rest;
    return m;
}

double vdot(const Vector& a, const Vector& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

std::vector<Vector> orthonormalize(const std::vector<Vector>& vectors) {
    double scale = 0.0;
    for (const auto& v : vectors) scale = std::max(scale, norm2(v));
    std::vector<Vector> q;
    for (Vector v : vectors) {
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& b : q) {
                const double c = vdot(v, b);
                for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * b[i];
            }
        const double n = norm2(v);
        if (n <= kSpanTolerance * scale) continue;
        for (auto& x : v) x /= n;
        q.push_back(std::move(v));
    }
    return q;
}

bool same_subspace(const std::vector<Vector>& a, const std::vector<Vector>& b) {
    if (a.size() != b.size()) return false;
    // Every vector of a lies in span(b).
    for (const auto& v : a) {
        Vector r = v;
        for (const auto& u : b) {
            const double c = vdot(r, u);
            for (std::size_t i = 0; i < r.size(); ++i) r[i] -= c * u[i];
        }
        if (norm2(r) > 1e-8) return false;
    }
    return true;
}

}  // namespace

AlgebraReport irreducibility(const MatrixSystem& sys) {
    const std::size_t d = sys.dim();
    AlgebraReport report;
    Matrix id = Matrix::identity(d);
    id *= 1.0 / std::sqrt(static_cast<double>(d));
    report.basis.push_back(id);
    std::deque<std::size_t> pending{0};
    while (!pending.empty() && report.basis.size() < d * d) {
        const std::size_t idx = pending.front();
        pending.pop_front();
        for (int s = 1; s <= sys.size(); ++s) {
            if (auto m = independent_part(sys[s] * report.basis[idx], report.basis)) {
                report.basis.push_back(*m);
                pending.push_back(report.basis.size() - 1);
                if (report.basis.size() == d * d) break;
            }
        }
    }
    report.dimension = report.basis.size();
    report.irreducible = report.dimension == d * d;
    return report;
}

UnboundedProbe product_unbounded_probe(const MatrixSystem& sys, std::size_t n_max) {
    const std::size_t d = sys.dim();
    const double growth_ratio = std::log(1.25);
    auto assess = [&](SubspaceGrowth& g) {
        const auto& v = g.curve.log_max_norms;
        const std::size_t half = v.size() / 2;
        g.head_max_log = -std::numeric_limits<double>::infinity();
        g.tail_max_log = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i < half) g.head_max_log = std::max(g.head_max_log, v[i]);
            else g.tail_max_log = std::max(g.tail_max_log, v[i]);
        }
        g.growing = half > 0 && g.tail_max_log >= g.head_max_log + growth_ratio;
    };

    UnboundedProbe probe;
    SubspaceGrowth full;
    full.full_space = true;
    full.curve = growth_curve(sys, n_max);
    assess(full);
    probe.subspaces.push_back(std::move(full));

    const auto algebra = irreducibility(sys);
    if (algebra.irreducible) return probe;

    std::vector<std::vector<Vector>> seen;
    for (std::size_t i = 0; i < d; ++i) {
        Vector e(d, 0.0);
        e[i] = 1.0;
        std::vector<Vector> images;
        for (const auto& b : algebra.basis) images.push_back(b * e);
        auto q = orthonormalize(images);
        if (q.empty() || q.size() == d) continue;
        bool duplicate = false;
        for (const auto& s : seen) duplicate = duplicate || same_subspace(q, s);
        if (duplicate) continue;
        seen.push_back(q);

        const std::size_t r = q.size();
        std::vector<Matrix> restricted;
        for (const auto& s : sys.generators()) {
            Matrix m(r);
            for (std::size_t a = 0; a < r; ++a) {
                const Vector sq = s * q[a];
                for (std::size_t b = 0; b < r; ++b) m(b, a) = vdot(q[b], sq);
            }
            restricted.push_back(m);
        }
        SubspaceGrowth g;
        g.basis = q;
        g.curve = growth_curve(MatrixSystem(std::move(restricted), sys.name()), n_max);
        assess(g);
        probe.subspaces.push_back(std::move(g));
    }
    return probe;
}

}  // namespace chaoslab
