#include "chaoslab/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "chaoslab/errors.hpp"

namespace chaoslab::io {

namespace fs = std::filesystem;

json parse_json(const std::string& text, const std::string& origin) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1, column = 1;
        const std::size_t stop = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
        for (std::size_t i = 0; i < stop; ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        std::size_t line_begin = text.rfind('\n', stop == 0 ? 0 : stop - 1);
        line_begin = (line_begin == std::string::npos || stop == 0) ? 0 : line_begin + 1;
        const std::size_t line_end = text.find('\n', line_begin);
        const std::string context = text.substr(line_begin, line_end == std::string::npos ? std::string::npos
                                                                                       : line_end - line_begin);
        throw InvalidInput(origin + ":" + std::to_string(line) + ":" + std::to_string(column) +
                           ": malformed JSON near '" + context + "'");
    }
}

json read_json_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_json(buf.str(), path.string());
}

void write_atomic(const fs::path& path, const std::string& content) {
    const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
    const fs::path tmp = dir / ("." + path.filename().string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw InvalidInput("cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out) throw InvalidInput("write failed for " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp);
        throw InvalidInput("cannot move output into place at " + path.string() + ": " + ec.message());
    }
}

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    std::ostringstream out;
    out << std::hex << std::setw(16) << std::setfill('0') << h;
    return out.str();
}

namespace {

template <typename T>
T require(const json& j, const char* key, const std::string& where) {
    if (!j.is_object() || !j.contains(key)) throw InvalidInput(where + ": missing field '" + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw InvalidInput(where + ": field '" + key + "' has the wrong type");
    }
}

double number(const json& v, const std::string& where) {
    if (!v.is_number()) throw InvalidInput(where + ": expected a number");
    return v.get<double>();
}

Matrix matrix_from_json(const json& m, std::size_t d, const std::string& label) {
    const std::string where = "matrix " + label;
    if (!m.is_array()) throw InvalidInput(where + ": expected an array");
    std::vector<double> flat;
    if (!m.empty() && m.front().is_array()) {
        if (m.size() != d) throw InvalidInput(where + ": expected " + std::to_string(d) + " rows");
        for (const auto& row : m) {
            if (!row.is_array() || row.size() != d)
                throw InvalidInput(where + ": every row needs " + std::to_string(d) + " entries");
            for (const auto& v : row) flat.push_back(number(v, where));
        }
    } else {
        if (m.size() != d * d) throw InvalidInput(where + ": expected " + std::to_string(d * d) + " entries");
        for (const auto& v : m) flat.push_back(number(v, where));
    }
    for (double v : flat)
        if (!std::isfinite(v)) throw InvalidInput(where + " has non-finite entries");
    return Matrix(d, flat);
}

Word word_from_json(const json& j, int alphabet, const std::string& where) {
    if (j.is_string()) return Word::parse(j.get<std::string>(), alphabet);
    if (!j.is_array()) throw InvalidInput(where + ": a word is an array of symbols or a string");
    std::vector<Symbol> symbols;
    for (const auto& v : j) {
        if (!v.is_number_integer()) throw InvalidInput(where + ": symbols must be integers");
        symbols.push_back(v.get<Symbol>());
    }
    return Word(std::move(symbols), alphabet);
}

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (std::size_t r = 0; r < m.dim(); ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < m.dim(); ++c) row.push_back(m(r, c));
        rows.push_back(row);
    }
    return rows;
}

json optional_u64(const std::optional<std::uint64_t>& v) { return v ? json(*v) : json(nullptr); }

// JSON has no infinities; they become null.
json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

MatrixSystem system_from_json(const json& j) {
    if (!j.is_object()) throw InvalidInput("system file must be a JSON object");
    const auto dim = require<long long>(j, "dim", "system file");
    if (dim < 1 || dim > static_cast<long long>(kMaxDim))
        throw InvalidInput("system file: dim must lie in 1.." + std::to_string(kMaxDim));
    if (!j.contains("matrices") || !j.at("matrices").is_object() || j.at("matrices").empty())
        throw InvalidInput("system file: 'matrices' must be a nonempty object keyed by labels 1..K");
    const auto& mats = j.at("matrices");
    const std::size_t k = mats.size();
    std::vector<Matrix> generators;
    for (std::size_t label = 1; label <= k; ++label) {
        const auto key = std::to_string(label);
        if (!mats.contains(key))
            throw InvalidInput("system file: labels must be 1.." + std::to_string(k) + "; missing " + key);
        generators.push_back(matrix_from_json(mats.at(key), static_cast<std::size_t>(dim), key));
    }
    std::string name = j.contains("name") && j.at("name").is_string() ? j.at("name").get<std::string>() : "";
    return MatrixSystem(std::move(generators), std::move(name));
}

json system_to_json(const MatrixSystem& sys) {
    json mats = json::object();
    for (int k = 1; k <= sys.size(); ++k) mats[std::to_string(k)] = matrix_to_json(sys[k]);
    return json{{"name", sys.name()}, {"dim", sys.dim()}, {"matrices", mats}};
}

MatrixSystem load_system(const fs::path& path) { return system_from_json(read_json_file(path)); }

std::string system_digest(const MatrixSystem& sys) {
    json canonical = system_to_json(sys);
    canonical.erase("name");
    return fnv1a_hex(canonical.dump());
}

SwitchingLaw law_from_json(const json& j) {
    if (!j.is_object()) throw InvalidInput("law file must be a JSON object");
    const auto type = require<std::string>(j, "type", "law file");
    const std::string where = "law file (" + type + ")";
    auto alphabet_field = [&] {
        const auto k = require<int>(j, "alphabet", where);
        if (k < 1) throw InvalidInput(where + ": alphabet must be at least 1");
        return k;
    };

    SwitchingLaw law = [&] {
        if (type == "doubling") return doubling_law();
        const int k = alphabet_field();
        if (type == "periodic") {
            if (!j.contains("word")) throw InvalidInput(where + ": missing field 'word'");
            return SwitchingLaw::periodic(word_from_json(j.at("word"), k, where));
        }
        if (type == "explicit") {
            if (!j.contains("prefix")) throw InvalidInput(where + ": missing field 'prefix'");
            std::optional<Symbol> fallback;
            if (j.contains("fallback")) fallback = require<Symbol>(j, "fallback", where);
            return SwitchingLaw::explicit_prefix(word_from_json(j.at("prefix"), k, where), fallback);
        }
        if (type == "blocks") {
            if (!j.contains("blocks") || !j.at("blocks").is_array())
                throw InvalidInput(where + ": 'blocks' must be an array of [symbol, length]");
            std::vector<SymbolBlock> blocks;
            for (const auto& b : j.at("blocks")) {
                if (!b.is_array() || b.size() != 2 || !b[0].is_number_integer() || !b[1].is_number_integer())
                    throw InvalidInput(where + ": each block is [symbol, length]");
                blocks.push_back({b[0].get<Symbol>(), b[1].get<std::uint64_t>()});
            }
            std::optional<BlockRule> rule;
            if (j.contains("rule")) {
                const auto& r = j.at("rule");
                BlockRule br;
                br.symbols = require<std::vector<Symbol>>(r, "symbols", where + " rule");
                br.first = require<std::uint64_t>(r, "first", where + " rule");
                br.ratio = r.contains("ratio") ? require<double>(r, "ratio", where + " rule") : 1.0;
                br.increment = r.contains("increment") ? require<std::uint64_t>(r, "increment", where + " rule") : 0;
                rule = std::move(br);
            }
            return SwitchingLaw::blocks(std::move(blocks), k, std::move(rule));
        }
        if (type == "constructed") {
            for (const char* key : {"prefix", "i", "j", "schedule"})
                if (!j.contains(key)) throw InvalidInput(where + ": missing field '" + key + "'");
            std::vector<ExponentPair> schedule;
            for (const auto& p : j.at("schedule")) {
                if (!p.is_array() || p.size() != 2 || !p[0].is_number_integer() || !p[1].is_number_integer())
                    throw InvalidInput(where + ": each schedule entry is [l, L]");
                schedule.push_back({p[0].get<std::uint64_t>(), p[1].get<std::uint64_t>()});
            }
            return SwitchingLaw::constructed(word_from_json(j.at("prefix"), k, where),
                                             word_from_json(j.at("i"), k, where), word_from_json(j.at("j"), k, where),
                                             std::move(schedule));
        }
        throw InvalidInput("law file: unknown type '" + type + "'");
    }();

    if (type == "doubling" && j.contains("alphabet") && alphabet_field() != 2)
        throw InvalidInput(where + ": the doubling law uses alphabet 2");
    if (j.contains("offset")) {
        const auto offset = require<std::uint64_t>(j, "offset", where);
        if (offset > 0) law = law.shift(offset);
    }
    return law;
}

json law_to_json(const SwitchingLaw& law) {
    json j{{"alphabet", law.alphabet()}};
    switch (law.kind()) {
        case SwitchingLaw::Kind::Periodic:
            j["type"] = "periodic";
            j["word"] = to_json(law.word());
            break;
        case SwitchingLaw::Kind::Explicit:
            j["type"] = "explicit";
            j["prefix"] = to_json(law.prefix());
            j["fallback"] = law.fallback();
            break;
        case SwitchingLaw::Kind::Blocks: {
            j["type"] = "blocks";
            json blocks = json::array();
            for (const auto& b : law.block_schedule()) blocks.push_back({b.symbol, b.length});
            j["blocks"] = blocks;
            if (const auto& r = law.rule())
                j["rule"] = {{"symbols", r->symbols}, {"first", r->first}, {"ratio", r->ratio},
                             {"increment", r->increment}};
            break;
        }
        case SwitchingLaw::Kind::Constructed: {
            j["type"] = "constructed";
            j["prefix"] = to_json(law.prefix());
            j["i"] = to_json(law.contracting_word());
            j["j"] = to_json(law.expanding_word());
            json schedule = json::array();
            for (const auto& p : law.exponents()) schedule.push_back({p.contract, p.expand});
            j["schedule"] = schedule;
            break;
        }
    }
    if (law.offset() > 0) j["offset"] = law.offset();
    return j;
}

SwitchingLaw load_law(const fs::path& path) { return law_from_json(read_json_file(path)); }

json to_json(const Word& w) { return json(w.symbols()); }

json to_json(const WordSearchResult& r) {
    json j{{"witnessFound", r.witness.has_value()}, {"exhaustiveLength", r.exhaustive_length}};
    j["contracting"] = r.contracting ? to_json(*r.contracting) : json(nullptr);
    j["contractingNorm"] = r.contracting ? json(r.contracting_norm) : json(nullptr);
    j["expanding"] = r.expanding ? to_json(*r.expanding) : json(nullptr);
    j["expandingCoNorm"] = r.expanding ? json(r.expanding_co_norm) : json(nullptr);
    return j;
}

json to_json(const HypothesisCheck& r) {
    return json{{"holds", r.witness.has_value()},
                {"contractingNorm", r.contracting_norm},
                {"expandingCoNorm", r.expanding_co_norm},
                {"refusal", r.refusal}};
}

json to_json(const ChaosCertificate& c) {
    json schedule = json::array();
    for (const auto& p : c.schedule) schedule.push_back({p.contract, p.expand});
    json crossings = json::array();
    for (const auto& x : c.crossings) {
        crossings.push_back({{"k", x.k},
                             {"timeBelow", x.time_below},
                             {"logOpNorm", x.log_op_norm},
                             {"timeAbove", x.time_above},
                             {"logCoNorm", x.log_co_norm}});
    }
    return json{{"prefix", to_json(c.prefix)},       {"contracting", to_json(c.contracting)},
                {"expanding", to_json(c.expanding)}, {"schedule", schedule},
                {"blockEnds", crossings},            {"orderExceptions", c.order_exceptions},
                {"margin", c.margin}};
}

json to_json(const CertificateCheck& c) {
    return json{{"sound", c.sound}, {"contractSlack", c.contract_slack}, {"expandSlack", c.expand_slack}};
}

json to_json(const CrossingTable& t) {
    json rows = json::array();
    for (const auto& r : t.rows)
        rows.push_back({{"k", r.k}, {"firstBelow", optional_u64(r.first_below)},
                        {"firstAbove", optional_u64(r.first_above)}});
    return json{{"horizon", t.horizon},
                {"complete", t.complete()},
                {"minLogOpNorm", finite_or_null(t.min_log_op)},
                {"maxLogCoNorm", finite_or_null(t.max_log_co)},
                {"rows", rows}};
}

json to_json(const PeriodicClassification& c) {
    return json{{"class", to_string(c.cls)}, {"radius", finite_or_null(c.radius)},
                {"normalizedRadius", c.normalized_radius}};
}

json to_json(const StabilityVerdict& v) {
    return json{{"stable", v.stable},
                {"periodicallyStableUpTo", v.stable_up_to},
                {"checkedLength", v.checked_length},
                {"budgetExhausted", v.budget_exhausted},
                {"worstWord", to_json(v.worst_word)},
                {"worstRadius", v.worst_radius},
                {"tol", v.tol},
                {"wordsChecked", v.words_checked}};
}

json to_json(const JsrBracket& b) {
    return json{{"lower", b.lower},
                {"upper", finite_or_null(b.upper)},
                {"lowerWitness", to_json(b.lower_witness)},
                {"depthReached", b.depth_reached},
                {"budgetSpent", b.budget_spent},
                {"converged", b.converged},
                {"budgetExhausted", b.budget_exhausted}};
}

json to_json(const GrowthCurve& c) {
    json log10_norms = json::array();
    json words = json::array();
    for (std::size_t i = 0; i < c.log_max_norms.size(); ++i) {
        log10_norms.push_back(c.log_max_norms[i] / std::log(10.0));
        words.push_back(to_json(c.argmax[i]));
    }
    return json{{"log10MaxNorms", log10_norms},
                {"argmax", words},
                {"fittedExponent", c.fitted_exponent},
                {"rawExponent", c.raw_exponent},
                {"logRate", c.log_rate},
                {"shape", to_string(c.shape)},
                {"fitRange", {c.fit_from, c.fit_to}},
                {"evenOnly", c.even_only},
                {"truncated", c.truncated},
                {"nodes", c.nodes}};
}

json to_json(const ExtremalNormTable& t) {
    return json{{"probes", t.probes},   {"values", t.values},
                {"previous", t.previous}, {"stabilization", t.stabilization},
                {"horizon", t.horizon}, {"truncated", t.truncated}};
}

json to_json(const AlgebraReport& a) {
    return json{{"irreducible", a.irreducible}, {"algebraDimension", a.dimension}};
}

json to_json(const UnboundedProbe& p) {
    json subspaces = json::array();
    for (const auto& s : p.subspaces) {
        subspaces.push_back({{"fullSpace", s.full_space},
                             {"basis", s.basis},
                             {"verdict", s.growing ? "growing" : "bounded-so-far"},
                             {"headMaxLog10", s.head_max_log / std::log(10.0)},
                             {"tailMaxLog10", s.tail_max_log / std::log(10.0)},
                             {"shape", to_string(s.curve.shape)}});
    }
    return json{{"subspaces", subspaces}};
}

json to_json(const LyapunovEstimate& e) {
    return json{{"mean", e.mean},
                {"stderr", e.stderr_mean},
                {"samples", e.samples},
                {"horizon", e.horizon},
                {"seed", e.seed},
                {"measure", "iid-uniform"}};
}

json to_json(const BJEvidence& e) {
    json thresholds = json::array();
    for (const auto& t : e.run_thresholds) thresholds.push_back({t.run_length, t.latest_start});
    json per_symbol = json::array();
    for (const auto& s : e.per_symbol) {
        std::uint64_t longest = 0;
        for (const auto& t : s.thresholds) longest = std::max(longest, t.run_length);
        per_symbol.push_back({{"symbol", s.symbol}, {"longestTailRun", longest}});
    }
    return json{{"verdict", to_string(e.verdict)},
                {"symbol", e.symbol ? json(*e.symbol) : json(nullptr)},
                {"runThresholds", thresholds},
                {"perSymbol", per_symbol},
                {"horizon", e.horizon},
                {"maxRun", e.max_run}};
}

json to_json(const DecayReport& r, bool full) {
    json j{{"verdict", r.decaying ? "decaying" : "not-decaying"},
           {"headMinLogNorm", r.head_min},
           {"tailMaxLogNorm", r.tail_max},
           {"tailRate", r.tail_rate},
           {"periodicallyStable", r.periodically_stable},
           {"stabilityLength", r.stability_length},
           {"warnings", r.warnings}};
    if (full) j["logNorms"] = r.log_norms;
    return j;
}

std::string trajectory_csv(const Trajectory& t) {
    std::ostringstream out;
    out << std::setprecision(17);
    out << "n,symbol,log10_magnitude";
    for (std::size_t i = 0; i < t.initial.size(); ++i) out << ",u" << (i + 1);
    out << '\n';
    for (std::size_t n = 0; n < t.states.size(); ++n) {
        const auto& s = t.states[n];
        out << (n + 1) << ',' << t.symbols.at(n + 1) << ',';
        if (std::isfinite(s.log_magnitude)) out << s.log_magnitude / std::log(10.0);
        else out << "-inf";
        for (double u : s.unit) out << ',' << u;
        out << '\n';
    }
    return out.str();
}

std::string growth_csv(const GrowthCurve& c) {
    std::ostringstream out;
    out << std::setprecision(17);
    out << "n,log10_max_norm,argmax_word\n";
    for (std::size_t i = 0; i < c.log_max_norms.size(); ++i)
        out << (i + 1) << ',' << c.log_max_norms[i] / std::log(10.0) << ",\"" << c.argmax[i].to_string() << "\"\n";
    return out.str();
}

}  // namespace chaoslab::io
