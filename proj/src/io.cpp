#include "cochain/io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cstdio>
#include <set>
#include <stdexcept>

namespace cochain::io {

namespace {

[[noreturn]] void fail(const std::string& what) { throw FormatError(what); }

const json& need(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) fail(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

std::size_t need_size(const json& j, const char* key) {
  const auto& v = need(j, key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
    fail(std::string("field \"") + key + "\" must be a natural number");
  return v.get<std::size_t>();
}

std::string decimal(const Natural& n) { return n.get_str(10); }

}  // namespace

const json& need_field(const json& j, const char* key) { return need(j, key); }

json rational_json(const Rational& r) { return to_string(r); }

Rational rational_from_json(const json& j) {
  try {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long>());
  } catch (const std::invalid_argument& e) {
    fail(e.what());
  }
  fail("expected a rational \"p/q\"");
}

json point_json(const Point& p) {
  json a = json::array();
  for (const auto& x : p) a.push_back(rational_json(x));
  return a;
}

Point point_from_json(const json& j) {
  if (!j.is_array()) fail("expected an array of rationals");
  Point p;
  for (const auto& x : j) p.push_back(rational_from_json(x));
  return p;
}

json ball_json(const Ball& b) { return {{"center", point_json(b.center())}, {"radius", rational_json(b.radius())}}; }

Ball ball_from_json(const json& j) {
  Rational r = rational_from_json(need(j, "radius"));
  if (sgn(r) <= 0) fail("ball radius must be positive");
  return Ball(point_from_json(need(j, "center")), r);
}

json union_json(std::span<const Ball> u) {
  json a = json::array();
  for (const auto& b : u) a.push_back(ball_json(b));
  return a;
}

BallUnion union_from_json(const json& j) {
  if (!j.is_array()) fail("expected an array of balls");
  BallUnion u;
  for (const auto& b : j) u.push_back(ball_from_json(b));
  return u;
}

json space_json(const Space& space) {
  if (space.kind() == "euclidean") return {{"kind", "euclidean"}, {"n", space.dimension()}};
  return {{"kind", space.kind()}};
}

SpacePtr space_from_json(const json& j) {
  auto kind = need(j, "kind");
  if (!kind.is_string()) fail("space kind must be a string");
  auto k = kind.get<std::string>();
  if (k == "euclidean") {
    auto n = need_size(j, "n");
    if (n == 0 || n > 16) fail("euclidean dimension must be between 1 and 16");
    return euclidean_space(n);
  }
  if (k == "hilbert-cube") return hilbert_cube_space();
  fail("unknown space kind '" + k + "'");
}

SpacePtr parse_space(const std::string& text) {
  if (!text.empty() && text.front() == '{') {
    try {
      return space_from_json(json::parse(text));
    } catch (const json::exception& e) {
      fail(e.what());
    }
  }
  if (text == "hilbert-cube" || text == "hilbert") return hilbert_cube_space();
  std::string digits;
  if (text.rfind("euclidean:", 0) == 0)
    digits = text.substr(10);
  else if (text.size() > 1 && (text[0] == 'R' || text[0] == 'r'))
    digits = text.substr(1);
  if (digits.empty() || !std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; }) ||
      digits.size() > 2)
    fail("unknown space '" + text + "' (use euclidean:N, RN or hilbert-cube)");
  return space_from_json({{"kind", "euclidean"}, {"n", std::stoul(digits)}});
}

CoCeSetPtr set_from_json(const json& spec, const Space& space) {
  if (!spec.is_object()) fail("set definition must be a JSON object");
  auto shape_name = need(spec, "shape");
  if (!shape_name.is_string()) fail("set shape must be a string");
  if (shape_name.get<std::string>() == "custom") {
    const auto& prog = need(spec, "complement_program");
    if (!prog.is_string() || prog.get<std::string>().empty()) fail("complement_program must be a command");
    Ball bound = ball_from_json(need(spec, "bound"));
    if (space.dimension() != 0 && bound.dim() != space.dimension()) fail("bounding ball dimension does not match the space");
    return program_set(prog.get<std::string>(), bound, bound.dim());
  }
  try {
    auto shape = shape_from_json(spec);
    if (space.kind() != "euclidean" || space.dimension() != shape->dim())
      fail("shape '" + shape->name() + "' lives in R^" + std::to_string(shape->dim()) + ", not in the given space");
    return shape_set(shape);
  } catch (const std::invalid_argument& e) {
    fail(e.what());
  }
}

json witness_json(const Witness& w) {
  json faces = json::array();
  for (std::size_t i = 0; i < w.faces.size(); ++i)
    for (int rho = 0; rho < 2; ++rho)
      faces.push_back({{"axis", i + 1}, {"side", rho}, {"balls", union_json(w.faces[i][rho])}});
  json out = {{"n", w.n}, {"k0", w.k0}, {"faces", faces}};
  if (!w.sampler_spec.is_null()) out["sampler"] = w.sampler_spec;
  return out;
}

Witness witness_from_json(const json& j, ProblemKind kind, std::uint64_t default_seed) {
  Witness w;
  w.n = need_size(j, "n");
  if (w.n == 0 || w.n > 8) fail("witness dimension must be between 1 and 8");
  w.k0 = static_cast<unsigned>(need_size(j, "k0"));
  if (w.k0 > 60) fail("k0 too large");
  w.faces.resize(w.n);
  std::set<std::pair<std::size_t, int>> seen;
  const auto& faces = need(j, "faces");
  if (!faces.is_array()) fail("faces must be an array");
  for (const auto& f : faces) {
    auto axis = need_size(f, "axis");
    auto side = need_size(f, "side");
    if (axis < 1 || axis > w.n || side > 1) fail("face selector out of range");
    if (!seen.insert({axis, static_cast<int>(side)}).second) fail("duplicate face set");
    w.faces[axis - 1][side] = union_from_json(need(f, "balls"));
    if (w.faces[axis - 1][side].empty()) fail("empty face set");
  }
  if (seen.size() != 2 * w.n) fail("witness needs a face set for every axis and side");
  if (j.contains("sampler")) {
    w.sampler_spec = j.at("sampler");
    if (w.sampler_spec.contains("perturb") && !w.sampler_spec.contains("seed")) w.sampler_spec["seed"] = default_seed;
    try {
      w.sampler = sampler_from_json(w.sampler_spec, kind);
    } catch (const std::exception& e) {
      fail(std::string("sampler: ") + e.what());
    }
  }
  return w;
}

Problem problem_from_json(const json& set_spec, const json* witness_file, const SpacePtr& space_override,
                          std::uint64_t rng_seed) {
  try {
    if (!witness_file) {
      Problem p = builtin_problem(set_spec);
      if (space_override && (space_override->kind() != p.space->kind() ||
                             space_override->dimension() != p.space->dimension()))
        fail("the builtin shape does not live in the requested space");
      return p;
    }
    const json& wf = *witness_file;
    Problem p;
    auto kind = need(wf, "kind").get<std::string>();
    if (kind == "sphere")
      p.kind = ProblemKind::sphere;
    else if (kind == "cell")
      p.kind = ProblemKind::cell;
    else
      fail("witness kind must be \"sphere\" or \"cell\"");
    if (space_override)
      p.space = space_override;
    else if (wf.contains("space"))
      p.space = space_from_json(wf.at("space"));
    else
      p.space = euclidean_space(shape_from_json(set_spec)->dim());
    p.set = set_from_json(set_spec, *p.space);
    if (p.kind == ProblemKind::cell) p.boundary = set_from_json(need(wf, "boundary"), *p.space);
    p.witness = witness_from_json(wf, p.kind, rng_seed);
    return p;
  } catch (const FormatError&) {
    throw;
  } catch (const std::exception& e) {
    fail(e.what());
  }
}

json proper_witness_json(const ProperWitness& w) {
  json j = {{"cells", {w.cell_a, w.cell_b}}, {"balls", {w.ball_u, w.ball_v}}};
  if (w.on_segment) {
    j["s"] = rational_json(w.s);
    j["t"] = rational_json(w.t);
  } else {
    j["p"] = point_json(w.p);
    j["q"] = point_json(w.q);
  }
  return j;
}

ProperWitness proper_witness_from_json(const json& j) {
  ProperWitness w;
  const auto& cells = need(j, "cells");
  const auto& balls = need(j, "balls");
  if (!cells.is_array() || cells.size() != 2 || !balls.is_array() || balls.size() != 2)
    fail("properness witness needs two cells and two balls");
  w.cell_a = cells[0].get<std::size_t>();
  w.cell_b = cells[1].get<std::size_t>();
  w.ball_u = balls[0].get<std::size_t>();
  w.ball_v = balls[1].get<std::size_t>();
  if (j.contains("s")) {
    w.on_segment = true;
    w.s = rational_from_json(j.at("s"));
    w.t = rational_from_json(need(j, "t"));
  } else {
    w.p = point_from_json(need(j, "p"));
    w.q = point_from_json(need(j, "q"));
  }
  return w;
}

json chain_json(const Space& space, const Chain& chain) {
  json cells = json::array();
  for (const auto& cell : chain.cells()) {
    json members = json::array();
    for (const auto& b : cell) members.push_back(decimal(space.ball_index(b)));
    cells.push_back(std::move(members));
  }
  return {{"n", chain.n()}, {"m", chain.m()}, {"cells", std::move(cells)}};
}

Chain chain_from_json(const Space& space, const json& j) {
  auto n = need_size(j, "n");
  auto m = need_size(j, "m");
  if (n == 0 || n > 8 || m == 0) fail("chain dimensions out of range");
  const auto& cells = need(j, "cells");
  if (!cells.is_array()) fail("chain cells must be an array");
  std::size_t expected = 1;
  for (std::size_t i = 0; i < n; ++i) expected *= m + 1;
  if (cells.size() != expected) fail("chain has the wrong number of cells");
  std::vector<BallUnion> out;
  out.reserve(expected);
  for (const auto& cell : cells) {
    if (!cell.is_array() || cell.empty()) fail("chain cells must be nonempty arrays of ball codes");
    BallUnion u;
    for (const auto& code : cell) {
      if (!code.is_string()) fail("ball codes must be decimal strings");
      try {
        u.push_back(space.ball_at(parse_natural(code.get<std::string>())));
      } catch (const std::exception& e) {
        fail(std::string("bad ball code: ") + e.what());
      }
    }
    out.push_back(std::move(u));
  }
  return Chain(n, m, std::move(out));
}

std::string digest(const json& document) {
  json copy = document;
  if (copy.is_object()) copy.erase("digest");
  std::string text = copy.dump();
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(text.data(), text.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 computation failed");
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    hex += buf;
  }
  return hex;
}

namespace {

json header(const Problem& problem, const Approximation& result) {
  json doc;
  doc["kind"] = kind_name(problem.kind) + "-approximation";
  doc["k"] = result.k;
  doc["bound"] = rational_json(result.bound);
  doc["space"] = space_json(*problem.space);
  doc["set"] = problem.set->spec();
  if (problem.boundary) doc["boundary"] = problem.boundary->spec();
  return doc;
}

json conditions_json(const ConditionReport& report) {
  json out = json::object();
  for (const auto& c : report.conditions) {
    json v = {{"verdict", c.verdict.is_yes() ? "yes" : "not-yet"}, {"stage", c.verdict.stage}};
    if (!c.verdict.note.empty()) v["note"] = c.verdict.note;
    if (c.verdict.refuted) v["refuted"] = true;
    out[c.name] = std::move(v);
  }
  return out;
}

}  // namespace

json certificate_json(const Problem& problem, const Approximation& result) {
  if (!result.certified || !result.candidate) throw std::invalid_argument("certificate_json: result is not certified");
  const Chain& chain = result.candidate->chain;
  json doc = header(problem, result);
  doc["balls"] = union_json(result.balls);
  json c;
  c["l"] = nullptr;
  if (chain.size() <= kMaxCodedCells) {
    try {
      c["l"] = decimal(chain_code(*problem.space, chain));
    } catch (const std::length_error&) {
    }
  }
  c["k0"] = problem.witness.k0;
  c["epsilon"] = rational_json(result.epsilon);
  c["chain"] = chain_json(*problem.space, chain);
  c["witness"] = witness_json(problem.witness);
  c["conditions"] = conditions_json(result.report);
  json ws = json::array();
  for (const auto& w : result.report.proper_witnesses) ws.push_back(proper_witness_json(w));
  c["witnesses"] = std::move(ws);
  c["fuel"] = result.fuel;
  c["provenance"] = provenance_name(result.candidate->provenance);
  if (result.candidate->provenance == Provenance::seeded)
    c["seed"] = {{"m", result.candidate->m}, {"subdivisions", result.candidate->subdivisions}};
  else
    c["seed"] = {{"code", decimal(result.candidate->code.value_or(Natural(0)))}};
  doc["certificate"] = std::move(c);
  doc["digest"] = digest(doc);
  return doc;
}

json timeout_json(const Problem& problem, const Approximation& result) {
  json doc = header(problem, result);
  doc["certified"] = false;
  doc["fuel"] = result.fuel;
  json cands = json::array();
  for (const auto& c : result.candidates) {
    json e = {{"candidate", c.label}, {"state", c.state}};
    if (!c.note.empty()) e["note"] = c.note;
    cands.push_back(std::move(e));
  }
  doc["candidates"] = std::move(cands);
  return doc;
}

VerifyOutcome verify_certificate(const json& doc, unsigned extra_fuel) {
  auto failed = [](std::string item, std::string message) {
    return VerifyOutcome{3, std::move(item), std::move(message)};
  };
  Problem problem;
  Chain chain;
  unsigned k = 0, fuel = 0;
  Rational bound, epsilon;
  json cert;
  std::vector<ProperWitness> witnesses;
  BallUnion balls;
  try {
    if (!doc.is_object()) fail("certificate must be a JSON object");
    auto kind = need(doc, "kind").get<std::string>();
    if (kind == "sphere-approximation")
      problem.kind = ProblemKind::sphere;
    else if (kind == "cell-approximation")
      problem.kind = ProblemKind::cell;
    else
      fail("unknown certificate kind '" + kind + "'");
    k = static_cast<unsigned>(need_size(doc, "k"));
    if (k > 60) fail("precision too large");
    bound = rational_from_json(need(doc, "bound"));
    problem.space = space_from_json(need(doc, "space"));
    problem.set = set_from_json(need(doc, "set"), *problem.space);
    if (problem.kind == ProblemKind::cell) problem.boundary = set_from_json(need(doc, "boundary"), *problem.space);
    balls = union_from_json(need(doc, "balls"));
    cert = need(doc, "certificate");
    problem.witness = witness_from_json(need(cert, "witness"), problem.kind);
    chain = chain_from_json(*problem.space, need(cert, "chain"));
    if (chain.n() != problem.witness.n) fail("chain and witness dimensions differ");
    fuel = static_cast<unsigned>(need_size(cert, "fuel"));
    epsilon = rational_from_json(need(cert, "epsilon"));
    const auto& ws = need(cert, "witnesses");
    if (!ws.is_array()) fail("witnesses must be an array");
    for (const auto& w : ws) witnesses.push_back(proper_witness_from_json(w));
    need(cert, "conditions");
    need(cert, "k0");
    need(cert, "l");
    need(cert, "provenance");
    need(doc, "digest");
  } catch (const std::exception& e) {
    // A sealed document that no longer parses was edited after sealing.
    if (doc.is_object() && doc.contains("digest") && doc.at("digest").is_string() &&
        doc.at("digest").get<std::string>() != digest(doc))
      return failed("digest", std::string("digest mismatch (") + e.what() + ")");
    return {1, "format", e.what()};
  }

  // Conditions, with fresh fuel.
  unsigned replay_fuel = std::max(fuel, 1U) + extra_fuel;
  CheckOptions options;
  ConditionReport report;
  try {
    report = check_conditions(problem, chain, k, replay_fuel, options);
  } catch (const std::exception& e) {
    return failed("conditions", e.what());
  }
  if (!report.all_yes(problem.kind)) {
    std::string blamed = report.blamed().value_or("conditions");
    const Verdict* v = nullptr;
    for (const auto& c : report.conditions)
      if (!c.verdict.is_yes()) v = &c.verdict;
    return failed(blamed, "condition " + blamed + " does not re-verify" + (v && !v->note.empty() ? ": " + v->note : ""));
  }

  if (auto v = validate_witness(problem, replay_fuel); !v.is_yes())
    return failed("witness", "witness face sets do not validate: " + v.note);

  // Consistency of the recorded data.
  const auto& recorded = cert.at("conditions");
  for (const auto& name : condition_names(problem.kind)) {
    if (!recorded.is_object() || !recorded.contains(name) || !recorded.at(name).is_object() ||
        recorded.at(name).value("verdict", "") != "yes")
      return failed(condition_group(name), "condition " + name + " is not recorded as confirmed");
  }
  if (bound != approximation_bound(problem.kind, k)) return failed("bound", "bound does not match the precision");
  if (epsilon != condition_epsilon(problem, k)) return failed("epsilon", "epsilon does not match k + k0");
  if (!cert.at("k0").is_number_unsigned() || cert.at("k0").get<unsigned>() != problem.witness.k0)
    return failed("k0", "k0 differs from the witness");
  if (union_json(balls) != union_json(output_balls(problem, chain)))
    return failed("balls", "output balls differ from the chain's union");
  if (!cert.at("l").is_null()) {
    try {
      if (!cert.at("l").is_string() || parse_natural(cert.at("l").get<std::string>()) != chain_code(*problem.space, chain))
        return failed("l", "chain code does not match the chain");
    } catch (const std::exception& e) {
      return failed("l", e.what());
    }
  }
  auto prov = cert.at("provenance");
  if (!prov.is_string() || (prov != "seeded" && prov != "enumerated"))
    return failed("provenance", "unknown provenance");
  {
    auto view = problem.kind == ProblemKind::sphere ? restrict_boundary(chain) : full_view(chain);
    std::set<std::pair<std::size_t, std::size_t>> need_pairs;
    for (auto [a, b] : adjacent_pairs(view)) need_pairs.insert({a, b});
    std::set<std::pair<std::size_t, std::size_t>> have;
    for (const auto& w : witnesses) {
      if (!check_witness(*problem.space, chain, w, epsilon, replay_fuel))
        return failed("witnesses", "a properness witness does not hold");
      have.insert({std::min(w.cell_a, w.cell_b), std::max(w.cell_a, w.cell_b)});
    }
    if (have != need_pairs) return failed("witnesses", "properness witnesses do not match the adjacent pairs");
  }

  if (!doc.at("digest").is_string() || doc.at("digest").get<std::string>() != digest(doc))
    return failed("digest", "digest mismatch");
  return {0, "", "ok"};
}

}  // namespace cochain::io
