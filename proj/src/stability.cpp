#include "chaoslab/stability.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "chaoslab/errors.hpp"
#include "chaoslab/parallel.hpp"

namespace chaoslab {

namespace {

constexpr double kTieTolerance = 1e-12;

double log_radius(const LogScaledMatrix& p) {
    return p.log_scale() + std::log(spectral_radius(p.unit()).radius);
}

bool shorter_or_earlier(const Word& a, const Word& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
}

}  // namespace

StabilityVerdict periodic_stability(const MatrixSystem& sys, std::size_t max_len, double tol, std::uint64_t budget) {
    if (max_len < 1) throw InvalidInput("periodic_stability needs max_len >= 1");
    if (!(tol >= 0.0 && tol < 1.0)) throw InvalidInput("tolerance must lie in [0, 1)");
    StabilityVerdict v;
    v.tol = tol;
    v.worst_radius = -std::numeric_limits<double>::infinity();
    const double log_bound = std::log1p(-tol);
    bool failed = false;

    for (std::size_t len = 1; len <= max_len; ++len) {
        std::vector<Word> necklaces;
        try {
            necklaces = enumerate_necklaces(sys.size(), len, budget);
        } catch (const ResourceError&) {
            v.budget_exhausted = true;
            break;
        }
        if (v.words_checked + necklaces.size() > budget) {
            v.budget_exhausted = true;
            break;
        }
        std::vector<double> radii(necklaces.size());
        parallel_for(necklaces.size(), [&](std::size_t i) {
            radii[i] = log_radius(word_product(sys, necklaces[i])) / static_cast<double>(len);
        });
        for (std::size_t i = 0; i < necklaces.size(); ++i) {
            const double r = std::exp(radii[i]);
            if (v.worst_word.empty() || r > v.worst_radius * (1.0 + kTieTolerance)) {
                v.worst_radius = r;
                v.worst_word = necklaces[i];
            }
            if (!(radii[i] < log_bound)) failed = true;
        }
        v.words_checked += necklaces.size();
        v.checked_length = len;
        if (!failed) v.stable_up_to = len;
    }
    v.stable = !failed;
    return v;
}

JsrBracket jsr_bracket(const MatrixSystem& sys, std::uint64_t budget, double target_gap) {
    const int k = sys.size();
    if (budget < static_cast<std::uint64_t>(k)) throw InvalidInput("jsr_bracket budget must be at least K");
    if (!(target_gap >= 0.0)) throw InvalidInput("target gap must be nonnegative");

    JsrBracket out;
    out.upper = std::numeric_limits<double>::infinity();

    auto offer_lower = [&](double r, const std::vector<Symbol>& path) {
        Word w(path, k);
        const bool better = r > out.lower * (1.0 + kTieTolerance);
        const bool tie = !better && r >= out.lower * (1.0 - kTieTolerance);
        if (out.lower_witness.empty() || better) {
            out.lower = r;
            out.lower_witness = std::move(w);
        } else if (tie && shorter_or_earlier(w, out.lower_witness)) {
            out.lower = std::max(out.lower, r);
            out.lower_witness = std::move(w);
        }
    };

    for (std::size_t depth = 1;; ++depth) {
        std::uint64_t nodes = 0;
        bool aborted = false;
        double pass_upper = 0.0;
        std::vector<Symbol> path;

        // value = min over prefixes of ||prefix||^(1/len) along the path.
        std::function<void(const LogScaledMatrix&, double)> visit = [&](const LogScaledMatrix& p, double value) {
            struct Child {
                Symbol s;
                LogScaledMatrix q;
                double norm_value;
                double value;
            };
            std::vector<Child> children;
            children.reserve(static_cast<std::size_t>(k));
            const double len = static_cast<double>(path.size() + 1);
            for (Symbol s = 1; s <= k && !aborted; ++s) {
                if (++nodes > budget - out.budget_spent) {
                    aborted = true;
                    break;
                }
                LogScaledMatrix q = p.left_multiplied(sys[s]);
                const double nv = std::exp(q.log_op_norm() / len);
                path.push_back(s);
                offer_lower(std::exp(log_radius(q) / len), path);
                path.pop_back();
                children.push_back({s, std::move(q), nv, std::min(value, nv)});
            }
            if (aborted) return;
            std::stable_sort(children.begin(), children.end(),
                             [](const Child& a, const Child& b) { return a.norm_value > b.norm_value; });
            for (auto& c : children) {
                if (aborted) return;
                if (c.value <= out.lower + target_gap || path.size() + 1 >= depth) {
                    pass_upper = std::max(pass_upper, c.value);
                    continue;
                }
                path.push_back(c.s);
                visit(c.q, c.value);
                path.pop_back();
            }
        };
        visit(LogScaledMatrix::identity(sys.dim()), std::numeric_limits<double>::infinity());

        out.budget_spent += std::min<std::uint64_t>(nodes, budget - out.budget_spent);
        if (aborted) {
            out.budget_exhausted = true;
            break;
        }
        out.upper = std::min(out.upper, pass_upper);
        out.depth_reached = depth;
        if (out.upper - out.lower <= target_gap) {
            out.converged = true;
            break;
        }
        if (out.budget_spent >= budget) {
            out.budget_exhausted = true;
            break;
        }
    }
    out.upper = std::max(out.upper, out.lower);
    return out;
}

}  // namespace chaoslab
