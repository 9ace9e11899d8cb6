#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "chaoslab/errors.hpp"
#include "chaoslab/stability.hpp"

namespace chaoslab {

namespace {

// Least-squares slope of y against x.
double slope(const std::vector<double>& x, const std::vector<double>& y) {
    const auto n = static_cast<double>(x.size());
    if (x.size() < 2) return 0.0;
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxx > 0.0 ? sxy / sxx : 0.0;
}

void fit(GrowthCurve& c) {
    const std::size_t n_max = c.log_max_norms.size();
    if (n_max == 0) return;
    c.fit_from = std::max<std::size_t>(1, (n_max + 1) / 2);
    c.fit_to = n_max;
    std::vector<double> envelope(n_max);
    double running = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n_max; ++i) envelope[i] = running = std::max(running, c.log_max_norms[i]);

    std::vector<double> ln_n, n_lin, raw, env;
    for (std::size_t n = c.fit_from; n <= c.fit_to; ++n) {
        if (c.even_only && n % 2 != 0) continue;
        ln_n.push_back(std::log(static_cast<double>(n)));
        n_lin.push_back(static_cast<double>(n));
        raw.push_back(c.log_max_norms[n - 1]);
        env.push_back(envelope[n - 1]);
    }
    c.fitted_exponent = slope(ln_n, env);
    c.raw_exponent = slope(ln_n, raw);
    c.log_rate = slope(n_lin, raw);
    if (c.log_rate < -0.1 && c.raw_exponent < -3.0) {
        c.shape = GrowthShape::GeometricDecay;
    } else if (c.log_rate > 0.1 && c.raw_exponent > 3.0) {
        c.shape = GrowthShape::GeometricGrowth;
    } else if (c.fitted_exponent < 0.5) {
        c.shape = GrowthShape::Bounded;
    } else {
        c.shape = GrowthShape::Polynomial;
    }
}

}  // namespace

const char* to_string(GrowthShape s) {
    switch (s) {
        case GrowthShape::Bounded:
            return "bounded";
        case GrowthShape::Polynomial:
            return "polynomial";
        case GrowthShape::GeometricDecay:
            return "geometric-decay";
        case GrowthShape::GeometricGrowth:
            return "geometric-growth";
    }
    return "unknown";
}

GrowthCurve growth_curve(const MatrixSystem& sys, std::size_t n_max, const GrowthOptions& options) {
    if (n_max < 1) throw InvalidInput("growth_curve needs n_max >= 1");
    const int k = sys.size();
    GrowthCurve curve;
    curve.even_only = options.even_only;

    constexpr double kSeedMargin = 1e-9;
    constexpr double kPruneSlack = 1e-12;

    for (std::size_t n = 1; n <= n_max; ++n) {
        // Any maximizer of length n-1 extended by one symbol gives a value
        // the exact maximum cannot fall below.
        double seed = -std::numeric_limits<double>::infinity();
        if (n > 1) {
            const auto base = word_product(sys, curve.argmax.back());
            for (Symbol s = 1; s <= k; ++s) seed = std::max(seed, base.left_multiplied(sys[s]).log_op_norm());
            seed -= kSeedMargin * std::max(1.0, std::abs(seed));
        }
        double best = -std::numeric_limits<double>::infinity();
        std::vector<Symbol> best_path;
        std::vector<Symbol> path;
        bool aborted = false;

        std::function<void(const LogScaledMatrix&)> visit = [&](const LogScaledMatrix& p) {
            for (Symbol s = 1; s <= k && !aborted; ++s) {
                if (++curve.nodes > options.budget) {
                    aborted = true;
                    return;
                }
                const LogScaledMatrix q = p.left_multiplied(sys[s]);
                const double lq = q.log_op_norm();
                path.push_back(s);
                if (path.size() == n) {
                    if (lq > best) {
                        best = lq;
                        best_path = path;
                    }
                } else {
                    const double bound = lq + curve.log_max_norms[n - path.size() - 1];
                    const double threshold = std::max(seed, best + kPruneSlack);
                    if (bound >= threshold) visit(q);
                }
                path.pop_back();
            }
        };
        visit(LogScaledMatrix::identity(sys.dim()));
        if (aborted) {
            curve.truncated = true;
            break;
        }
        curve.log_max_norms.push_back(best);
        curve.argmax.emplace_back(best_path, k);
    }
    fit(curve);
    return curve;
}

MatrixSystem build_block_shear_system(double alpha, double beta, double scale) {
    if (alpha == 0.0 || beta == 0.0 || scale == 0.0) throw InvalidInput("block system parameters must be nonzero");
    Matrix f1{{1, 1}, {0, 1}};
    Matrix f2{{1, 0}, {1, 1}};
    f1 *= scale * alpha;
    f2 *= scale * beta;
    const Matrix zero(2);
    return MatrixSystem({assemble_blocks(f1, f1, zero, f1), assemble_blocks(f2, f2, zero, f2)}, "block-shear");
}

double block_shear_normalization(double alpha, double beta) {
    const Matrix f1{{alpha, alpha}, {0, alpha}};
    const Matrix f2{{beta, 0}, {beta, beta}};
    return 1.0 / std::sqrt(spectral_radius(f2 * f1).radius);
}

double block_identity_error(const MatrixSystem& block_sys, const Word& w) {
    if (block_sys.dim() != 4) throw InvalidInput("block check needs a 4x4 system");
    const Matrix p = plain_product(block_sys, w);
    Matrix expected = block(p, 0, 0, 2);
    expected *= static_cast<double>(w.size());
    Matrix diff = block(p, 0, 2, 2);
    diff -= expected;
    const double scale = expected.max_abs();
    return scale > 0.0 ? diff.max_abs() / scale : diff.max_abs();
}

int floor_exponent(int d) {
    // Floor division so that d = 1 gives -1.
    const int half = d >= 0 ? d / 2 : -((-d + 1) / 2);
    return half - 1;
}

ExtremalNormTable extremal_norm_estimate(const MatrixSystem& sys, std::size_t horizon,
                                         const std::vector<Vector>& probes, std::uint64_t budget) {
    if (horizon < 1) throw InvalidInput("extremal_norm_estimate needs horizon >= 1");
    for (const auto& x : probes)
        if (x.size() != sys.dim()) throw InvalidInput("probe vector has wrong dimension");
    const auto k = static_cast<std::uint64_t>(sys.size());

    ExtremalNormTable table;
    table.probes = probes;
    std::size_t reach = 0;
    {
        std::uint64_t level = 1, total = 0;
        while (reach < horizon) {
            if (level > budget / k) break;
            level *= k;
            if (total + level > budget) break;
            total += level;
            ++reach;
        }
    }
    table.truncated = reach < horizon;
    table.horizon = reach;

    // best[m][p]: max over words of length exactly m.
    std::vector<std::vector<double>> best(reach + 1, std::vector<double>(probes.size(), 0.0));
    for (std::size_t p = 0; p < probes.size(); ++p) best[0][p] = norm2(probes[p]);

    std::function<void(const std::vector<Vector>&, std::size_t)> visit = [&](const std::vector<Vector>& xs,
                                                                               std::size_t depth) {
        if (depth == reach) return;
        for (int s = 1; s <= sys.size(); ++s) {
            std::vector<Vector> ys;
            ys.reserve(xs.size());
            for (std::size_t p = 0; p < xs.size(); ++p) {
                ys.push_back(sys[s] * xs[p]);
                best[depth + 1][p] = std::max(best[depth + 1][p], norm2(ys.back()));
            }
            visit(ys, depth + 1);
        }
    };
    visit(probes, 0);

    table.values.assign(probes.size(), 0.0);
    table.previous.assign(probes.size(), 0.0);
    for (std::size_t p = 0; p < probes.size(); ++p) {
        for (std::size_t m = 0; m <= reach; ++m) {
            table.values[p] = std::max(table.values[p], best[m][p]);
            if (m + 1 <= reach) table.previous[p] = std::max(table.previous[p], best[m][p]);
        }
        if (table.values[p] > 0.0)
            table.stabilization =
                std::max(table.stabilization, (table.values[p] - table.previous[p]) / table.values[p]);
    }
    return table;
}

}  // namespace chaoslab
