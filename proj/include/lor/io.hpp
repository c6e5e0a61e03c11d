#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lor/basis.hpp"
#include "lor/core.hpp"
#include "lor/families.hpp"
#include "lor/solver.hpp"
#include "lor/stats.hpp"

namespace lor {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kRunSchema = "lor.run/1";

using Json = nlohmann::json;

// Exact integers serialize as JSON numbers while they fit the double-safe
// range, as decimal strings beyond it; both forms parse back.
Json bigint_to_json(const BigInt& v);
BigInt bigint_from_json(const Json& j);

Json params_to_json(const Params& p);
Params params_from_json(const Json& j);

Json weights_to_json(const WeightSequence& a);
WeightSequence weights_from_json(const Json& j);

// Plain weights text: whitespace-separated integers or rationals p/q
// ('#' starts a comment). Rational inputs are scaled by the LCM of the
// denominators (R_x is invariant under common scaling of (a, x)); the
// factor is reported so callers can scale x the same way.
struct ParsedWeights {
    WeightSequence sequence;
    BigInt scale;  // 1 when all entries were integers
};
ParsedWeights parse_weights_text(const std::string& text);

// Reads either the plain text format or the JSON document form.
ParsedWeights parse_weights_file(const std::string& path);

Json profile_to_json(const ResilienceProfile& p);
Json qk_to_json(const QkResult& q);
Json basis_to_json(const AdditiveBasis& b);
Json estimate_to_json(const EstimateReport& r);
Json sweep_to_json(const SweepResult& s);
Json certify_to_json(const CertifyStats& c);
Json bestats_to_json(const BerryEsseenStats& b);

// The serialized run record: {schema, version, command, seed?, inputs,
// outputs}. Wall-clock time is deliberately not part of the record so
// that reruns are byte-identical.
Json make_run_record(const std::string& command, const Json& inputs, const Json& outputs,
                     std::optional<uint64_t> seed);

// Canonical text form (sorted keys, fixed indentation, trailing newline).
std::string record_to_string(const Json& record);

// "4096:131072:x2" (geometric), "16:64:+16" (arithmetic) or "a,b,c".
std::vector<int64_t> parse_n_grid(const std::string& text);

// CSV renderings (plot-ready): sweep rows and profile counts; other
// payloads flatten to key,value lines.
std::string to_csv(const std::string& command, const Json& outputs);

}  // namespace lor
