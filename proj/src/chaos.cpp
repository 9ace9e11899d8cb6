#include "chaoslab/chaos.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <string>

#include "chaoslab/errors.hpp"

namespace chaoslab {

namespace {

double log_threshold(std::size_t k) { return std::log(static_cast<double>(k)); }

// Better = shorter, then lexicographically smaller.
bool shorter_or_earlier(const Word& a, const std::optional<Word>& b) {
    if (!b) return true;
    if (a.size() != b->size()) return a.size() < b->size();
    return a < *b;
}

TrackedProduct power(const TrackedProduct& base, std::size_t exponent) {
    TrackedProduct result(base.forward().dim());
    TrackedProduct b = base;
    while (exponent > 0) {
        if (exponent & 1U) result.apply(b);
        exponent >>= 1U;
        if (exponent) {
            const TrackedProduct copy = b;
            b.apply(copy);
        }
    }
    return result;
}

}  // namespace

HypothesisCheck verify_hypothesis(const MatrixSystem& sys, const Word& contracting, const Word& expanding,
                                  double tol) {
    if (contracting.empty() || expanding.empty()) throw InvalidInput("hypothesis words must be nonempty");
    HypothesisCheck check;
    const auto pi = word_product(sys, contracting);
    const auto pj = tracked_product(sys, expanding);
    check.contracting_norm = std::exp(pi.log_op_norm());
    check.expanding_co_norm = std::exp(pj.log_co_norm());
    const bool contracts = check.contracting_norm < 1.0 - tol;
    const bool expands = check.expanding_co_norm > 1.0 + tol;
    if (contracts && expands) {
        check.witness = HypothesisWitness{contracting, expanding, check.contracting_norm, check.expanding_co_norm};
    } else if (!contracts) {
        check.refusal = "op_norm of contracting word product is " + std::to_string(check.contracting_norm) +
                        ", not below 1";
    } else {
        check.refusal = "co_norm of expanding word product is " + std::to_string(check.expanding_co_norm) +
                        ", not above 1";
    }
    return check;
}

WordSearchResult find_words(const MatrixSystem& sys, const WordSearchOptions& options) {
    WordSearchResult result;
    const int k = sys.size();
    const double log_lo = std::log1p(-options.tol);
    const double log_hi = std::log1p(options.tol);

    // Deepest length whose full tree fits in the node budget.
    std::size_t depth = 0;
    {
        std::uint64_t level = 1;
        std::uint64_t nodes = 0;
        while (depth < options.max_length) {
            if (level > options.budget / static_cast<std::uint64_t>(k)) break;
            level *= static_cast<std::uint64_t>(k);
            if (nodes + level > options.budget) break;
            nodes += level;
            ++depth;
        }
    }
    result.exhaustive_length = depth;

    auto consider = [&](const Word& w, const TrackedProduct& p) {
        if (shorter_or_earlier(w, result.contracting)) {
            const double lop = p.log_op_norm();
            if (lop < log_lo) {
                result.contracting = w;
                result.contracting_norm = std::exp(lop);
            }
        }
        if (shorter_or_earlier(w, result.expanding)) {
            const double lco = p.log_co_norm();
            if (lco > log_hi) {
                result.expanding = w;
                result.expanding_co_norm = std::exp(lco);
            }
        }
    };
    auto needed_depth = [&]() {
        std::size_t limit = depth;
        if (result.contracting && result.expanding)
            limit = std::min(limit, std::max(result.contracting->size(), result.expanding->size()));
        return limit;
    };

    std::vector<Symbol> path;
    std::function<void(const TrackedProduct&)> dfs = [&](const TrackedProduct& p) {
        if (path.size() >= needed_depth()) return;
        for (Symbol s = 1; s <= k; ++s) {
            path.push_back(s);
            TrackedProduct q = p;
            q.push(sys, s);
            consider(Word(path, k), q);
            dfs(q);
            path.pop_back();
        }
    };
    dfs(TrackedProduct(sys.dim()));

    // Powers of short words for the lengths the exhaustive scan could not reach.
    const std::size_t base_limit = std::min(options.max_power_base, depth);
    std::vector<std::pair<Word, TrackedProduct>> bases;
    for (std::size_t p = 1; p <= base_limit; ++p) {
        for (auto& w : enumerate_words(k, p, options.budget)) {
            auto prod = tracked_product(sys, w);
            bases.emplace_back(std::move(w), std::move(prod));
        }
    }
    for (std::size_t len = depth + 1; len <= options.max_length; ++len) {
        if (result.contracting && result.expanding) break;
        std::map<Word, TrackedProduct> candidates;
        for (const auto& [u, pu] : bases) {
            if (len % u.size() != 0 || u.size() == len) continue;
            Word w = u.power(len / u.size());
            if (!candidates.contains(w)) candidates.emplace(std::move(w), power(pu, len / u.size()));
        }
        for (const auto& [w, p] : candidates) consider(w, p);
    }

    if (result.contracting && result.expanding) {
        result.witness = HypothesisWitness{*result.contracting, *result.expanding, result.contracting_norm,
                                           result.expanding_co_norm};
    }
    return result;
}

Construction construct_chaotic_law(const MatrixSystem& sys, const HypothesisWitness& witness, const Word& prefix,
                                   std::size_t k_max, const ConstructionOptions& options) {
    const auto check = verify_hypothesis(sys, witness.contracting, witness.expanding);
    if (!check.witness) throw InvalidInput("stale witness: " + check.refusal);
    if (prefix.alphabet() != sys.size()) throw InvalidInput("prefix alphabet does not match the system");

    ChaosCertificate cert;
    cert.prefix = prefix;
    cert.contracting = witness.contracting;
    cert.expanding = witness.expanding;
    cert.margin = options.margin;

    if (k_max == 0) {
        const Symbol fallback = prefix.empty() ? witness.contracting[0] : prefix.symbols().back();
        return {std::move(cert), SwitchingLaw::explicit_prefix(prefix, fallback)};
    }

    const TrackedProduct si = tracked_product(sys, witness.contracting);
    const TrackedProduct sj = tracked_product(sys, witness.expanding);
    TrackedProduct running = tracked_product(sys, prefix);
    std::uint64_t time = prefix.size();

    for (std::size_t k = 1; k <= k_max; ++k) {
        const double target = log_threshold(k);
        Crossing crossing;
        crossing.k = k;
        ExponentPair pair{0, 0};

        double lop = 0.0;
        do {
            if (pair.contract >= options.max_exponent)
                throw ResourceError("contracting exponent for k=" + std::to_string(k) + " exceeds cap");
            running.apply(si);
            ++pair.contract;
            time += witness.contracting.size();
            lop = running.log_op_norm();
        } while (!(lop < -target - options.margin));
        crossing.time_below = time;
        crossing.log_op_norm = lop;

        double lco = 0.0;
        do {
            if (pair.expand >= options.max_exponent)
                throw ResourceError("expanding exponent for k=" + std::to_string(k) + " exceeds cap");
            running.apply(sj);
            ++pair.expand;
            time += witness.expanding.size();
            lco = running.log_co_norm();
        } while (!(lco > target + options.margin));
        crossing.time_above = time;
        crossing.log_co_norm = lco;

        if (!(pair.contract < pair.expand)) cert.order_exceptions.push_back(k);
        cert.schedule.push_back(pair);
        cert.crossings.push_back(crossing);
    }

    SwitchingLaw law = SwitchingLaw::constructed(prefix, witness.contracting, witness.expanding, cert.schedule);
    return {std::move(cert), std::move(law)};
}

CertificateCheck verify_certificate(const MatrixSystem& sys, const ChaosCertificate& cert) {
    CertificateCheck out;
    out.sound = true;
    Word w = cert.prefix;
    for (std::size_t idx = 0; idx < cert.schedule.size(); ++idx) {
        const double t = log_threshold(idx + 1);
        w = w.concat(cert.contracting.power(static_cast<std::size_t>(cert.schedule[idx].contract)));
        const double c_slack = -t - tracked_product(sys, w).log_op_norm();
        w = w.concat(cert.expanding.power(static_cast<std::size_t>(cert.schedule[idx].expand)));
        const double e_slack = tracked_product(sys, w).log_co_norm() - t;
        out.contract_slack.push_back(c_slack);
        out.expand_slack.push_back(e_slack);
        if (!(c_slack > 0.0) || !(e_slack > 0.0)) out.sound = false;
    }
    return out;
}

Trajectory simulate(const MatrixSystem& sys, const SwitchingLaw& law, const Vector& x0, std::uint64_t horizon,
                    std::uint64_t budget) {
    if (x0.size() != sys.dim()) throw InvalidInput("initial state has wrong dimension");
    if (law.alphabet() != sys.size()) throw InvalidInput("law alphabet does not match the system");
    if (horizon > budget) throw ResourceError("horizon " + std::to_string(horizon) + " exceeds budget");
    for (double v : x0)
        if (!std::isfinite(v)) throw InvalidInput("initial state has non-finite entries");

    Trajectory tr;
    tr.initial = x0;
    tr.symbols = law.take(horizon);
    tr.states.reserve(static_cast<std::size_t>(horizon));

    const double m0 = norm2(x0);
    tr.zero_initial = (m0 == 0.0);
    Vector u = x0;
    double log_mag = -std::numeric_limits<double>::infinity();
    if (!tr.zero_initial) {
        for (auto& v : u) v /= m0;
        log_mag = std::log(m0);
    }
    for (Symbol s : tr.symbols.symbols()) {
        if (!tr.zero_initial) {
            Vector y = sys[s] * u;
            const double m = norm2(y);
            for (auto& v : y) v /= m;
            u = std::move(y);
            log_mag += std::log(m);
        }
        tr.states.push_back({u, log_mag});
    }
    return tr;
}

bool CrossingTable::complete() const {
    return std::all_of(rows.begin(), rows.end(), [](const CrossingRow& r) { return r.first_below && r.first_above; });
}

namespace {

CrossingTable init_table(std::size_t k_max, std::uint64_t horizon) {
    if (k_max < 1 || horizon < 1) throw InvalidInput("scan needs k_max >= 1 and horizon >= 1");
    CrossingTable table;
    table.horizon = horizon;
    table.min_log_op = std::numeric_limits<double>::infinity();
    table.max_log_co = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k <= k_max; ++k) table.rows.push_back({k, std::nullopt, std::nullopt});
    return table;
}

void record(CrossingTable& table, std::uint64_t n, double log_below_value, double log_above_value) {
    table.min_log_op = std::min(table.min_log_op, log_below_value);
    table.max_log_co = std::max(table.max_log_co, log_above_value);
    for (auto& row : table.rows) {
        const double t = log_threshold(row.k);
        if (!row.first_below && log_below_value < -t) row.first_below = n;
        if (!row.first_above && log_above_value > t) row.first_above = n;
    }
}

}  // namespace

CrossingTable chaos_scan(const MatrixSystem& sys, const SwitchingLaw& law, std::size_t k_max, std::uint64_t horizon) {
    if (law.alphabet() != sys.size()) throw InvalidInput("law alphabet does not match the system");
    CrossingTable table = init_table(k_max, horizon);
    TrackedProduct p(sys.dim());
    for (std::uint64_t n = 1; n <= horizon; ++n) {
        p.push(sys, law.eval(n));
        record(table, n, p.log_op_norm(), p.log_co_norm());
    }
    return table;
}

CrossingTable orbit_scan(const Trajectory& trajectory, std::size_t k_max) {
    CrossingTable table = init_table(k_max, std::max<std::uint64_t>(trajectory.states.size(), 1));
    if (trajectory.zero_initial) return table;
    const double log0 = std::log(norm2(trajectory.initial));
    for (std::size_t i = 0; i < trajectory.states.size(); ++i) {
        const double rel = trajectory.states[i].log_magnitude - log0;
        record(table, i + 1, rel, rel);
    }
    return table;
}

PeriodicClassification classify_periodic(const MatrixSystem& sys, const Word& word) {
    if (word.empty()) throw InvalidInput("classify_periodic needs a nonempty word");
    const auto p = word_product(sys, word);
    const double log_radius = p.log_scale() + std::log(spectral_radius(p.unit()).radius);
    PeriodicClassification out;
    out.radius = std::exp(log_radius);
    out.normalized_radius = std::exp(log_radius / static_cast<double>(word.size()));
    out.cls = log_radius < std::log1p(-1e-12) ? PeriodicClass::Contracting : PeriodicClass::NonchaoticExpandingOrNeutral;
    return out;
}

const char* to_string(PeriodicClass c) {
    switch (c) {
        case PeriodicClass::Contracting:
            return "contracting";
        case PeriodicClass::NonchaoticExpandingOrNeutral:
            return "nonchaotic-expanding-or-neutral";
    }
    return "unknown";
}

}  // namespace chaoslab
