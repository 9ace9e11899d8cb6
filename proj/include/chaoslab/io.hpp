#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

#include "chaoslab/bj.hpp"
#include "chaoslab/chaos.hpp"
#include "chaoslab/stability.hpp"
#include "chaoslab/switching.hpp"
#include "chaoslab/system.hpp"

namespace chaoslab::io {

using nlohmann::json;

inline constexpr const char* kToolVersion = "0.1.0";

/// Parse JSON text; syntax errors become InvalidInput naming line and column.
json parse_json(const std::string& text, const std::string& origin = "<input>");
json read_json_file(const std::filesystem::path& path);

/// Write to a temporary file next to `path`, then rename over it.
void write_atomic(const std::filesystem::path& path, const std::string& content);

/// 64-bit FNV-1a of the bytes, as 16 hex digits.
std::string fnv1a_hex(const std::string& bytes);

/**
 * System description: {"name": str?, "dim": d, "matrices": {"1": M1, "2": M2, ...}}
 * where each M is either nested rows or a flat row-major array of d*d
 * numbers. Labels must be exactly 1..K.
 */
MatrixSystem system_from_json(const json& j);
json system_to_json(const MatrixSystem& sys);
MatrixSystem load_system(const std::filesystem::path& path);
/// Digest of the canonical serialization (independent of formatting).
std::string system_digest(const MatrixSystem& sys);

/**
 * Law description: {"alphabet": K, "type": ..., "offset": n?} with
 *   periodic:    "word": [s, ...]
 *   blocks:      "blocks": [[s, len], ...], "rule": {symbols, first, ratio, increment}?
 *   doubling:    (no parameters)
 *   explicit:    "prefix": [s, ...], "fallback": s?
 *   constructed: "prefix", "i", "j": words; "schedule": [[l, L], ...]
 * Words may also be given as strings like "1,2,2".
 */
SwitchingLaw law_from_json(const json& j);
json law_to_json(const SwitchingLaw& law);
SwitchingLaw load_law(const std::filesystem::path& path);

json to_json(const Word& w);
json to_json(const WordSearchResult& r);
json to_json(const HypothesisCheck& r);
json to_json(const ChaosCertificate& c);
json to_json(const CertificateCheck& c);
json to_json(const CrossingTable& t);
json to_json(const PeriodicClassification& c);
json to_json(const StabilityVerdict& v);
json to_json(const JsrBracket& b);
json to_json(const GrowthCurve& c);
json to_json(const ExtremalNormTable& t);
json to_json(const AlgebraReport& a);
json to_json(const UnboundedProbe& p);
json to_json(const LyapunovEstimate& e);
json to_json(const BJEvidence& e);
/// The log-norm series is summarized (first/last values) unless `full`.
json to_json(const DecayReport& r, bool full = false);

/// Columns n, symbol, log10_magnitude, u1..ud.
std::string trajectory_csv(const Trajectory& t);
/// Columns n, log10_max_norm, argmax_word.
std::string growth_csv(const GrowthCurve& c);

}  // namespace chaoslab::io
