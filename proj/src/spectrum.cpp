#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <numeric>

#include "chaoslab/errors.hpp"
#include "chaoslab/linalg.hpp"

namespace chaoslab {

namespace {

using cplx = std::complex<double>;

constexpr int kAberthMaxIterations = 1000;
constexpr double kAcceptResidual = 1e-10;

// Parlett-Reinsch balancing with radix-2 scalings (exact in floating point).
Matrix balance(Matrix a) {
    const std::size_t d = a.dim();
    constexpr double radix = 2.0;
    constexpr double sqrdx = radix * radix;
    bool done = false;
    for (int pass = 0; pass < 100 && !done; ++pass) {
        done = true;
        for (std::size_t i = 0; i < d; ++i) {
            double r = 0.0;
            double c = 0.0;
            for (std::size_t j = 0; j < d; ++j) {
                if (j == i) continue;
                c += std::abs(a(j, i));
                r += std::abs(a(i, j));
            }
            if (c == 0.0 || r == 0.0) continue;
            double g = r / radix;
            double f = 1.0;
            const double s = c + r;
            while (c < g) {
                f *= radix;
                c *= sqrdx;
            }
            g = r * radix;
            while (c > g) {
                f /= radix;
                c /= sqrdx;
            }
            if ((c + r) / f < 0.95 * s) {
                done = false;
                const double inv = 1.0 / f;
                for (std::size_t j = 0; j < d; ++j) a(i, j) *= inv;
                for (std::size_t j = 0; j < d; ++j) a(j, i) *= f;
            }
        }
    }
    return a;
}

cplx horner(std::span<const double> c, cplx z) {
    cplx p = c.back();
    for (std::size_t k = c.size() - 1; k-- > 0;) p = p * z + c[k];
    return p;
}

cplx horner_derivative(std::span<const double> c, cplx z) {
    const std::size_t n = c.size() - 1;
    cplx p = static_cast<double>(n) * c[n];
    for (std::size_t k = n - 1; k >= 1; --k) p = p * z + static_cast<double>(k) * c[k];
    return p;
}

// |p(z)| / sum |c_k| |z|^k
double backward_error(std::span<const double> c, cplx z) {
    double denom = 0.0;
    const double az = std::abs(z);
    for (std::size_t k = c.size(); k-- > 0;) denom = denom * az + std::abs(c[k]);
    const double num = std::abs(horner(c, z));
    return denom > 0.0 ? num / denom : num;
}

// Coefficients of the k-th derivative.
std::vector<double> derivative(std::span<const double> c, std::size_t k) {
    std::vector<double> out;
    for (std::size_t j = k; j < c.size(); ++j) {
        double f = c[j];
        for (std::size_t i = 0; i < k; ++i) f *= static_cast<double>(j - i);
        out.push_back(f);
    }
    return out;
}

// A root of multiplicity m splits into a ring of radius ~eps^(1/m) around the
// true value. Such a cluster is replaced by the simple root of p^(m-1) near
// its centroid, provided p and its first m-1 derivatives all (nearly) vanish
// there. Clusters that fail the check are split at a finer scale.
class ClusterRefiner {
public:
    ClusterRefiner(std::span<const double> p, std::vector<cplx>& roots) : p_(p), roots_(roots) {
        for (const auto& z : roots) scale_ = std::max(scale_, std::abs(z));
    }

    void run() {
        if (roots_.size() < 2 || scale_ == 0.0) return;
        std::vector<std::size_t> all(roots_.size());
        std::iota(all.begin(), all.end(), 0);
        refine(all, 0.05 * scale_);
    }

private:
    void refine(const std::vector<std::size_t>& members, double tol) {
        const std::size_t n = members.size();
        std::vector<std::size_t> parent(n);
        std::iota(parent.begin(), parent.end(), 0);
        auto find = [&](std::size_t i) {
            while (parent[i] != i) i = parent[i] = parent[parent[i]];
            return i;
        };
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (std::abs(roots_[members[i]] - roots_[members[j]]) <= tol) parent[find(i)] = find(j);
        std::vector<std::vector<std::size_t>> groups(n);
        for (std::size_t i = 0; i < n; ++i) groups[find(i)].push_back(members[i]);
        for (const auto& g : groups) {
            if (g.size() < 2) continue;
            if (!try_merge(g) && tol > 1e-9 * scale_) refine(g, tol / 10.0);
        }
    }

    bool try_merge(const std::vector<std::size_t>& group) {
        constexpr double eps = std::numeric_limits<double>::epsilon();
        const std::size_t m = group.size();
        cplx c = 0.0;
        double worst_member = eps;
        for (auto i : group) {
            c += roots_[i];
            worst_member = std::max(worst_member, backward_error(p_, roots_[i]));
        }
        c /= static_cast<double>(m);
        const auto q = derivative(p_, m - 1);
        for (int it = 0; it < 50 && q.size() > 1; ++it) {
            const cplx dq = horner_derivative(q, c);
            if (dq == cplx(0.0, 0.0)) break;
            const cplx step = horner(q, c) / dq;
            if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) return false;
            c -= step;
            if (std::abs(step) <= eps * std::max(std::abs(c), 1e-300)) break;
        }
        if (backward_error(p_, c) > 16.0 * worst_member) return false;
        for (std::size_t k = 1; k + 1 < m; ++k)
            if (backward_error(derivative(p_, k), c) > 1e-10) return false;
        for (auto i : group) roots_[i] = c;
        return true;
    }

    std::span<const double> p_;
    std::vector<cplx>& roots_;
    double scale_ = 0.0;
};

}  // namespace

std::vector<double> characteristic_polynomial(const Matrix& a) {
    const std::size_t d = a.dim();
    std::vector<double> c(d + 1, 0.0);
    c[d] = 1.0;
    Matrix m(d);  // M_0 = 0
    for (std::size_t k = 1; k <= d; ++k) {
        m = a * m;
        for (std::size_t i = 0; i < d; ++i) m(i, i) += c[d - k + 1];
        c[d - k] = -(a * m).trace() / static_cast<double>(k);
    }
    return c;
}

std::vector<cplx> polynomial_roots(std::span<const double> coeffs, double* residual) {
    if (coeffs.empty() || coeffs.back() == 0.0) throw InvalidInput("polynomial_roots: leading coefficient is zero");
    std::vector<double> c(coeffs.begin(), coeffs.end());
    for (auto& v : c) v /= coeffs.back();

    // Exact zero roots are deflated up front; Aberth only converges linearly on them.
    std::size_t zeros = 0;
    while (zeros + 1 < c.size() && c[zeros] == 0.0) ++zeros;
    std::span<const double> p(c.data() + zeros, c.size() - zeros);
    const std::size_t n = p.size() - 1;

    std::vector<cplx> roots(zeros, cplx(0.0, 0.0));
    if (residual) *residual = 0.0;
    if (n == 0) return roots;
    if (n == 1) {
        roots.emplace_back(-p[0], 0.0);
        return roots;
    }

    // Initial ring: radius from the coefficient magnitudes (half the Fujiwara bound).
    double radius = 0.0;
    for (std::size_t k = 1; k <= n; ++k)
        radius = std::max(radius, std::pow(std::abs(p[n - k]), 1.0 / static_cast<double>(k)));
    if (radius == 0.0) radius = 1.0;
    std::vector<cplx> z(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double angle = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n) + 0.4;
        z[j] = std::polar(radius, angle);
    }

    std::vector<bool> converged(n, false);
    constexpr double eps = std::numeric_limits<double>::epsilon();
    for (int it = 0; it < kAberthMaxIterations; ++it) {
        bool all = true;
        for (std::size_t j = 0; j < n; ++j) {
            if (converged[j]) continue;
            if (backward_error(p, z[j]) <= 4.0 * eps) {
                converged[j] = true;
                continue;
            }
            const cplx pz = horner(p, z[j]);
            const cplx dz = horner_derivative(p, z[j]);
            cplx sum = 0.0;
            for (std::size_t k = 0; k < n; ++k)
                if (k != j) sum += 1.0 / (z[j] - z[k]);
            const cplx ratio = pz / dz;
            const cplx w = ratio / (1.0 - ratio * sum);
            if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) continue;
            z[j] -= w;
            if (std::abs(w) <= 2.0 * eps * std::abs(z[j])) converged[j] = true;
            all = all && converged[j];
        }
        if (all && std::all_of(converged.begin(), converged.end(), [](bool b) { return b; })) break;
    }

    double worst = 0.0;
    for (const auto& root : z) worst = std::max(worst, backward_error(p, root));
    if (residual) *residual = worst;
    if (worst > kAcceptResidual) throw ConvergenceError("Aberth iteration did not converge", worst);
    roots.insert(roots.end(), z.begin(), z.end());
    return roots;
}

Spectrum spectral_radius(const Matrix& a) {
    if (!a.is_finite()) throw InvalidInput("spectral_radius: matrix has non-finite entries");
    Spectrum out;
    const std::size_t d = a.dim();
    if (d == 1) {
        out.radius = std::abs(a(0, 0));
        out.roots_found = 1;
        out.eigenvalues = {cplx(a(0, 0), 0.0)};
        return out;
    }
    Matrix b = balance(a);
    const double scale = b.max_abs();
    if (scale == 0.0) {
        out.roots_found = d;
        out.eigenvalues.assign(d, cplx(0.0, 0.0));
        return out;
    }
    b *= 1.0 / scale;
    const auto coeffs = characteristic_polynomial(b);
    double residual = 0.0;
    auto roots = polynomial_roots(coeffs, &residual);
    ClusterRefiner(coeffs, roots).run();
    double radius = 0.0;
    for (auto& r : roots) {
        r *= scale;
        radius = std::max(radius, std::abs(r));
    }
    out.radius = radius;
    out.roots_found = roots.size();
    out.residual = residual;
    out.eigenvalues = std::move(roots);
    return out;
}

}  // namespace chaoslab
