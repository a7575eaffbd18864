#pragma once

// JSON forms of rationals, balls, spaces, sets, witnesses and certificates.
// Rationals are "p/q" strings in lowest terms; naturals are decimal strings.

#include "cochain/approx.hpp"

#include <json.hpp>

#include <string>

namespace cochain::io {

using nlohmann::json;

/// Malformed input (maps to exit status 1 in the command line tool).
struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// j[key], or FormatError naming the missing field.
const json& need_field(const json& j, const char* key);

json rational_json(const Rational& r);
Rational rational_from_json(const json& j);
json point_json(const Point& p);
Point point_from_json(const json& j);
json ball_json(const Ball& b);
Ball ball_from_json(const json& j);
json union_json(std::span<const Ball> u);
BallUnion union_from_json(const json& j);

/// {"kind":"euclidean","n":2} or {"kind":"hilbert-cube"}.
json space_json(const Space& space);
SpacePtr space_from_json(const json& j);
/// "euclidean:2", "R2", "hilbert-cube" or a JSON object.
SpacePtr parse_space(const std::string& text);

/// Builtin shape definitions or {"shape":"custom","complement_program":...,"bound":{...}}.
CoCeSetPtr set_from_json(const json& spec, const Space& space);

json witness_json(const Witness& w);
/// Faces, k0 and n; the sampler is rebuilt from "sampler" when present.
Witness witness_from_json(const json& j, ProblemKind kind, std::uint64_t default_seed = 0);

/// Witness file: {"kind":"sphere"|"cell","space":...,"k0":..,"faces":[...],
/// "sampler":{...},"boundary":{set definition, cells only}}.
Problem problem_from_json(const json& set_spec, const json* witness_file, const SpacePtr& space_override,
                          std::uint64_t rng_seed = 0);

json proper_witness_json(const ProperWitness& w);
ProperWitness proper_witness_from_json(const json& j);

/// Chain as {n, m, cells: [[ball code, ...], ...]} with decimal ball codes.
json chain_json(const Space& space, const Chain& chain);
Chain chain_from_json(const Space& space, const json& j);

/// Above this many cells the chain code l is omitted (recorded as null).
inline constexpr std::size_t kMaxCodedCells = 256;

json certificate_json(const Problem& problem, const Approximation& result);
/// Report for a search that ran out of fuel.
json timeout_json(const Problem& problem, const Approximation& result);

/// SHA-256 (hex) of the canonical dump of the document without "digest".
std::string digest(const json& document);

struct VerifyOutcome {
  int status = 0;  // 0 ok, 1 malformed, 3 failed item
  std::string failed;  // condition group or consistency item
  std::string message;
};

/// Replays the recorded conditions with fresh fuel, then checks consistency
/// of the recorded data, then the digest.
VerifyOutcome verify_certificate(const json& document, unsigned extra_fuel = 8);

}  // namespace cochain::io
