#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>

#include "json.hpp"

#include "cpc/adversary.hpp"
#include "cpc/centerpoint.hpp"
#include "cpc/cutplane.hpp"
#include "cpc/depth.hpp"
#include "cpc/error.hpp"
#include "cpc/measure.hpp"
#include "cpc/oracle.hpp"

namespace cpc {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

enum class Command { Depth, Centerpoint, Solve, AdversaryRun, Bench };

constexpr std::string_view to_string(Command c) {
  switch (c) {
    case Command::Depth: return "depth";
    case Command::Centerpoint: return "centerpoint";
    case Command::Solve: return "solve";
    case Command::AdversaryRun: return "adversary-run";
    case Command::Bench: return "bench";
  }
  return "unknown";
}

struct PolytopeDesc {
  std::optional<Box> box;
  std::vector<std::vector<double>> rows;  // a . x <= b as [a..., b]

  Polytope build() const { return box ? box->polytope() : Polytope::from_rows(rows); }
};

struct MeasureDesc {
  MeasureFamily family = MeasureFamily::UniformPolytope;
  std::vector<WeightedPoint> points;
  PolytopeDesc polytope;
  int n = 0, d = 0;

  Measure build() const {
    switch (family) {
      case MeasureFamily::FinitePointMass: return Measure::finite(points);
      case MeasureFamily::UniformPolytope: return Measure::uniform(polytope.build());
      case MeasureFamily::LatticeCounting: return Measure::lattice(polytope.build());
      case MeasureFamily::MixedInteger: return Measure::mixed(polytope.build(), n, d);
    }
    fail(ErrorKind::InvalidArgument, "unknown measure family");
  }
};

struct ObjectiveDesc {
  FirstOrderOracle::Kind kind = FirstOrderOracle::Kind::AffineMax;
  std::vector<Vector> a;
  std::vector<double> b;
  Eigen::MatrixXd Q;
  Vector c;
  double r = 0.0;
  std::vector<ObjectiveDesc> parts;

  FirstOrderOracle build() const {
    switch (kind) {
      case FirstOrderOracle::Kind::AffineMax: return FirstOrderOracle::affine_max(a, b);
      case FirstOrderOracle::Kind::ConvexQuadratic: return FirstOrderOracle::quadratic(Q, c, r);
      case FirstOrderOracle::Kind::Sum: {
        std::vector<FirstOrderOracle> ps;
        for (const auto& p : parts) ps.push_back(p.build());
        return FirstOrderOracle::sum(std::move(ps));
      }
      case FirstOrderOracle::Kind::Adversarial: break;
    }
    fail(ErrorKind::SchemaError, "objective: adversaries are declared with adversary-run");
  }
};

struct AdversaryDesc {
  AdversaryKind kind = AdversaryKind::IntegerFiber;
  int n = 2, d = 0, B = 8;
  std::optional<Box> E0;

  std::shared_ptr<AdversaryState> build() const {
    switch (kind) {
      case AdversaryKind::ContinuousMedian: return std::make_shared<AdversaryState>(AdversaryState::continuous_median(*E0));
      case AdversaryKind::IntegerFiber: return std::make_shared<AdversaryState>(AdversaryState::integer_fiber(n, B));
      case AdversaryKind::MixedFiber: return std::make_shared<AdversaryState>(AdversaryState::mixed_fiber(n, d, B));
    }
    return nullptr;
  }

  ConstraintSet constraint_set() const {
    switch (kind) {
      case AdversaryKind::ContinuousMedian: return ConstraintSet::continuous(2);
      case AdversaryKind::IntegerFiber: return ConstraintSet::lattice(n);
      case AdversaryKind::MixedFiber: return ConstraintSet::mixed(n, d);
    }
    return ConstraintSet::continuous(2);
  }
};

struct ProblemFile {
  int schema_version = kSchemaVersion;
  Command command = Command::Depth;
  std::optional<std::string> id;
  std::optional<MeasureDesc> measure;
  std::optional<Point> point;
  std::optional<ConstraintSet> S;
  std::optional<ObjectiveDesc> objective;
  std::optional<AdversaryDesc> adversary;
  std::optional<Box> E0;
  std::optional<double> delta;
  std::optional<double> eps;
  std::optional<double> C;
  std::optional<std::uint64_t> seed;
  std::optional<Strategy> strategy;
  std::optional<std::string> method;
  std::optional<int> budget;
  std::vector<json> instances;  // bench only; parsed one by one when run
};

namespace detail {

// Strict view of a JSON object: every key must be consumed before done().
class Fields {
 public:
  Fields(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(ErrorKind::SchemaError, path_ + ": expected an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  const json& get(const std::string& key) {
    if (!j_.contains(key)) fail(ErrorKind::SchemaError, at(key) + ": missing required field \"" + key + "\"");
    seen_.insert(key);
    return j_.at(key);
  }

  std::string at(const std::string& key) const { return path_ + "." + key; }

  double number(const std::string& key) {
    const json& v = get(key);
    if (!v.is_number()) fail(ErrorKind::SchemaError, at(key) + ": expected a number");
    return v.get<double>();
  }

  std::optional<double> opt_number(const std::string& key) {
    if (!has(key)) return std::nullopt;
    return number(key);
  }

  std::int64_t integer(const std::string& key) {
    const json& v = get(key);
    if (!v.is_number_integer()) fail(ErrorKind::SchemaError, at(key) + ": expected an integer");
    return v.get<std::int64_t>();
  }

  std::optional<std::int64_t> opt_integer(const std::string& key) {
    if (!has(key)) return std::nullopt;
    return integer(key);
  }

  std::string string(const std::string& key) {
    const json& v = get(key);
    if (!v.is_string()) fail(ErrorKind::SchemaError, at(key) + ": expected a string");
    return v.get<std::string>();
  }

  std::optional<std::string> opt_string(const std::string& key) {
    if (!has(key)) return std::nullopt;
    return string(key);
  }

  const json& array(const std::string& key) {
    const json& v = get(key);
    if (!v.is_array()) fail(ErrorKind::SchemaError, at(key) + ": expected an array");
    return v;
  }

  void done() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) fail(ErrorKind::SchemaError, at(it.key()) + ": unknown field \"" + it.key() + "\"");
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

inline Vector vec(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) fail(ErrorKind::SchemaError, path + ": expected a nonempty array of numbers");
  Vector out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) fail(ErrorKind::SchemaError, path + "[" + std::to_string(i) + "]: expected a number");
    out(static_cast<Eigen::Index>(i)) = v[i].get<double>();
  }
  return out;
}

inline json to_json(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

inline Box parse_box(const json& j, const std::string& path) {
  Fields f(j, path);
  const Vector lo = vec(f.get("lower"), f.at("lower"));
  const Vector hi = vec(f.get("upper"), f.at("upper"));
  f.done();
  try {
    return Box(lo, hi);
  } catch (const Error& e) {
    fail(ErrorKind::SchemaError, path + ": " + e.what());
  }
}

inline json box_json(const Box& b) { return {{"lower", to_json(b.lower)}, {"upper", to_json(b.upper)}}; }

inline PolytopeDesc parse_polytope(const json& j, const std::string& path) {
  Fields f(j, path);
  PolytopeDesc p;
  if (f.has("box") == f.has("rows")) fail(ErrorKind::SchemaError, path + ": exactly one of \"box\" or \"rows\" is required");
  if (f.has("box")) p.box = parse_box(f.get("box"), f.at("box"));
  else {
    const json& rows = f.array("rows");
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const Vector r = vec(rows[i], f.at("rows") + "[" + std::to_string(i) + "]");
      if (r.size() < 2) fail(ErrorKind::SchemaError, f.at("rows") + "[" + std::to_string(i) + "]: a row needs a coefficient and a bound");
      p.rows.emplace_back(r.data(), r.data() + r.size());
    }
  }
  f.done();
  return p;
}

inline json polytope_json(const PolytopeDesc& p) {
  if (p.box) return {{"box", box_json(*p.box)}};
  return {{"rows", p.rows}};
}

inline MeasureFamily parse_family(const std::string& s, const std::string& path) {
  for (auto f : {MeasureFamily::FinitePointMass, MeasureFamily::UniformPolytope, MeasureFamily::LatticeCounting, MeasureFamily::MixedInteger})
    if (s == to_string(f)) return f;
  fail(ErrorKind::SchemaError, path + ": unknown measure family \"" + s + "\"");
}

inline MeasureDesc parse_measure(const json& j, const std::string& path) {
  Fields f(j, path);
  MeasureDesc m;
  m.family = parse_family(f.string("family"), f.at("family"));
  if (m.family == MeasureFamily::FinitePointMass) {
    const json& pts = f.array("points");
    std::vector<double> w(pts.size(), 1.0);
    if (f.has("weights")) {
      const json& ws = f.array("weights");
      if (ws.size() != pts.size()) fail(ErrorKind::SchemaError, f.at("weights") + ": length differs from points");
      const Vector wv = vec(ws, f.at("weights"));
      for (std::size_t i = 0; i < w.size(); ++i) w[i] = wv(static_cast<Eigen::Index>(i));
    }
    for (std::size_t i = 0; i < pts.size(); ++i) m.points.push_back({vec(pts[i], f.at("points") + "[" + std::to_string(i) + "]"), w[i]});
  } else {
    m.polytope = parse_polytope(f.get("polytope"), f.at("polytope"));
    if (m.family == MeasureFamily::MixedInteger) {
      m.n = static_cast<int>(f.integer("n"));
      m.d = static_cast<int>(f.integer("d"));
    }
  }
  f.done();
  return m;
}

inline json measure_json(const MeasureDesc& m) {
  json j = {{"family", std::string(to_string(m.family))}};
  if (m.family == MeasureFamily::FinitePointMass) {
    json pts = json::array(), ws = json::array();
    for (const auto& wp : m.points) {
      pts.push_back(to_json(wp.point));
      ws.push_back(wp.weight);
    }
    j["points"] = pts;
    j["weights"] = ws;
  } else {
    j["polytope"] = polytope_json(m.polytope);
    if (m.family == MeasureFamily::MixedInteger) {
      j["n"] = m.n;
      j["d"] = m.d;
    }
  }
  return j;
}

inline ConstraintSet parse_constraint_set(const json& j, const std::string& path) {
  Fields f(j, path);
  const std::string kind = f.string("kind");
  std::optional<ConstraintSet> s;
  try {
    if (kind == "continuous") s = ConstraintSet::continuous(static_cast<int>(f.integer("dim")));
    else if (kind == "lattice") s = ConstraintSet::lattice(static_cast<int>(f.integer("n")));
    else if (kind == "mixed") {
      const int n = static_cast<int>(f.integer("n"));
      s = ConstraintSet::mixed(n, static_cast<int>(f.integer("d")));
    } else
      fail(ErrorKind::SchemaError, f.at("kind") + ": unknown constraint set \"" + kind + "\"");
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::SchemaError) throw;
    fail(ErrorKind::SchemaError, path + ": " + e.what());
  }
  f.done();
  return *s;
}

inline json constraint_set_json(const ConstraintSet& s) {
  switch (s.kind) {
    case ConstraintSet::Kind::Continuous: return {{"kind", "continuous"}, {"dim", s.conts}};
    case ConstraintSet::Kind::Lattice: return {{"kind", "lattice"}, {"n", s.ints}};
    case ConstraintSet::Kind::Mixed: return {{"kind", "mixed"}, {"n", s.ints}, {"d", s.conts}};
  }
  return {};
}

inline ObjectiveDesc parse_objective(const json& j, const std::string& path) {
  Fields f(j, path);
  ObjectiveDesc o;
  const std::string kind = f.string("kind");
  if (kind == "affine-max") {
    o.kind = FirstOrderOracle::Kind::AffineMax;
    const json& pieces = f.array("pieces");
    if (pieces.empty()) fail(ErrorKind::SchemaError, f.at("pieces") + ": needs at least one piece");
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      Fields p(pieces[i], f.at("pieces") + "[" + std::to_string(i) + "]");
      o.a.push_back(vec(p.get("a"), p.at("a")));
      o.b.push_back(p.number("b"));
      p.done();
    }
  } else if (kind == "quadratic") {
    o.kind = FirstOrderOracle::Kind::ConvexQuadratic;
    const json& rows = f.array("Q");
    o.c = vec(f.get("c"), f.at("c"));
    o.r = f.opt_number("r").value_or(0.0);
    const auto n = o.c.size();
    if (static_cast<Eigen::Index>(rows.size()) != n) fail(ErrorKind::SchemaError, f.at("Q") + ": must be square with the size of c");
    o.Q.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const Vector row = vec(rows[static_cast<std::size_t>(i)], f.at("Q") + "[" + std::to_string(i) + "]");
      if (row.size() != n) fail(ErrorKind::SchemaError, f.at("Q") + ": must be square with the size of c");
      o.Q.row(i) = row.transpose();
    }
  } else if (kind == "sum") {
    o.kind = FirstOrderOracle::Kind::Sum;
    const json& parts = f.array("parts");
    if (parts.empty()) fail(ErrorKind::SchemaError, f.at("parts") + ": needs at least one part");
    for (std::size_t i = 0; i < parts.size(); ++i) o.parts.push_back(parse_objective(parts[i], f.at("parts") + "[" + std::to_string(i) + "]"));
  } else {
    fail(ErrorKind::SchemaError, f.at("kind") + ": unknown objective \"" + kind + "\"");
  }
  f.done();
  return o;
}

inline json objective_json(const ObjectiveDesc& o) {
  switch (o.kind) {
    case FirstOrderOracle::Kind::AffineMax: {
      json pieces = json::array();
      for (std::size_t i = 0; i < o.a.size(); ++i) pieces.push_back({{"a", to_json(o.a[i])}, {"b", o.b[i]}});
      return {{"kind", "affine-max"}, {"pieces", pieces}};
    }
    case FirstOrderOracle::Kind::ConvexQuadratic: {
      json Q = json::array();
      for (Eigen::Index i = 0; i < o.Q.rows(); ++i) Q.push_back(to_json(o.Q.row(i).transpose()));
      return {{"kind", "quadratic"}, {"Q", Q}, {"c", to_json(o.c)}, {"r", o.r}};
    }
    case FirstOrderOracle::Kind::Sum: {
      json parts = json::array();
      for (const auto& p : o.parts) parts.push_back(objective_json(p));
      return {{"kind", "sum"}, {"parts", parts}};
    }
    case FirstOrderOracle::Kind::Adversarial: break;
  }
  return {};
}

inline Strategy parse_strategy(const json& j, const std::string& path) {
  Fields f(j, path);
  const std::string kind = f.string("kind");
  Strategy s;
  if (kind == "centerpoint") s.kind = Strategy::Kind::Centerpoint;
  else if (kind == "centroid") s.kind = Strategy::Kind::Centroid;
  else if (kind == "random") s.kind = Strategy::Kind::RandomFeasible;
  else fail(ErrorKind::SchemaError, f.at("kind") + ": unknown strategy \"" + kind + "\"");
  s.eps = f.opt_number("eps").value_or(s.eps);
  s.confidence = f.opt_number("confidence").value_or(s.confidence);
  s.C = f.opt_number("C").value_or(s.C);
  f.done();
  return s;
}

inline json strategy_json(const Strategy& s) {
  return {{"kind", std::string(to_string(s.kind))}, {"eps", s.eps}, {"confidence", s.confidence}, {"C", s.C}};
}

inline Strategy strategy_from_name(const std::string& name) {
  return parse_strategy(json{{"kind", name}}, "--strategy");
}

inline AdversaryDesc parse_adversary(const json& j, const std::string& path) {
  Fields f(j, path);
  AdversaryDesc a;
  const std::string kind = f.string("kind");
  if (kind == "continuous-median") {
    a.kind = AdversaryKind::ContinuousMedian;
    a.E0 = parse_box(f.get("E0"), f.at("E0"));
    if (a.E0->dim() != 2) fail(ErrorKind::SchemaError, f.at("E0") + ": the median adversary is planar");
    a.n = 2;
    a.d = 0;
    a.B = 0;
  } else if (kind == "integer-fiber") {
    a.kind = AdversaryKind::IntegerFiber;
    a.n = static_cast<int>(f.integer("n"));
    a.d = 0;
    a.B = static_cast<int>(f.integer("B"));
  } else if (kind == "mixed-fiber") {
    a.kind = AdversaryKind::MixedFiber;
    a.n = static_cast<int>(f.integer("n"));
    a.d = static_cast<int>(f.integer("d"));
    a.B = static_cast<int>(f.integer("B"));
  } else {
    fail(ErrorKind::SchemaError, f.at("kind") + ": unknown adversary \"" + kind + "\"");
  }
  if (a.kind != AdversaryKind::ContinuousMedian && (a.n < 1 || a.n > 3 || a.B < 1 || a.B > 4096 || a.d < 0 || a.d > 2 ||
                                                    (a.kind == AdversaryKind::MixedFiber && a.d < 1)))
    fail(ErrorKind::SchemaError, path + ": adversary parameters out of range");
  f.done();
  return a;
}

inline json adversary_json(const AdversaryDesc& a) {
  switch (a.kind) {
    case AdversaryKind::ContinuousMedian: return {{"kind", "continuous-median"}, {"E0", box_json(*a.E0)}};
    case AdversaryKind::IntegerFiber: return {{"kind", "integer-fiber"}, {"n", a.n}, {"B", a.B}};
    case AdversaryKind::MixedFiber: return {{"kind", "mixed-fiber"}, {"n", a.n}, {"d", a.d}, {"B", a.B}};
  }
  return {};
}

inline Command parse_command(const std::string& s, const std::string& path) {
  for (auto c : {Command::Depth, Command::Centerpoint, Command::Solve, Command::AdversaryRun, Command::Bench})
    if (s == to_string(c)) return c;
  fail(ErrorKind::SchemaError, path + ": unknown command \"" + s + "\"");
}

inline void positive(const std::optional<double>& v, const std::string& path) {
  if (v && !(*v > 0)) fail(ErrorKind::SchemaError, path + ": must be positive");
}

inline ProblemFile parse_document(const json& j) {
  Fields f(j, "$");
  ProblemFile p;
  p.schema_version = static_cast<int>(f.integer("schema_version"));
  if (p.schema_version != kSchemaVersion) fail(ErrorKind::SchemaError, "$.schema_version: unsupported version " + std::to_string(p.schema_version));
  p.command = parse_command(f.string("command"), "$.command");
  p.id = f.opt_string("id");
  if (auto s = f.opt_integer("seed")) {
    if (*s < 0) fail(ErrorKind::SchemaError, "$.seed: must be nonnegative");
    p.seed = static_cast<std::uint64_t>(*s);
  }
  switch (p.command) {
    case Command::Depth:
      p.measure = parse_measure(f.get("measure"), "$.measure");
      p.point = vec(f.get("point"), "$.point");
      break;
    case Command::Centerpoint:
      p.measure = parse_measure(f.get("measure"), "$.measure");
      p.method = f.opt_string("method").value_or("monte-carlo");
      if (f.has("S")) p.S = parse_constraint_set(f.get("S"), "$.S");
      p.eps = f.opt_number("eps");
      p.delta = f.opt_number("delta");
      p.C = f.opt_number("C");
      break;
    case Command::Solve:
      p.objective = parse_objective(f.get("objective"), "$.objective");
      p.S = parse_constraint_set(f.get("S"), "$.S");
      p.E0 = parse_box(f.get("E0"), "$.E0");
      p.delta = f.number("delta");
      if (f.has("measure")) p.measure = parse_measure(f.get("measure"), "$.measure");
      p.strategy = f.has("strategy") ? parse_strategy(f.get("strategy"), "$.strategy") : Strategy{};
      if (auto b = f.opt_integer("budget")) p.budget = static_cast<int>(*b);
      break;
    case Command::AdversaryRun:
      p.adversary = parse_adversary(f.get("adversary"), "$.adversary");
      p.delta = f.number("delta");
      p.strategy = f.has("strategy") ? parse_strategy(f.get("strategy"), "$.strategy") : Strategy{};
      if (auto b = f.opt_integer("budget")) p.budget = static_cast<int>(*b);
      break;
    case Command::Bench: {
      const json& inst = f.array("instances");
      p.instances.assign(inst.begin(), inst.end());
      break;
    }
  }
  positive(p.delta, "$.delta");
  positive(p.eps, "$.eps");
  positive(p.C, "$.C");
  if (p.budget && *p.budget < 1) fail(ErrorKind::SchemaError, "$.budget: must be positive");
  f.done();
  return p;
}

}  // namespace detail

inline ProblemFile parse_problem(std::string_view text) {
  json j;
  try {
    j = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    fail(ErrorKind::ParseError, std::string("malformed JSON: ") + e.what());
  }
  return detail::parse_document(j);
}

inline json to_json(const ProblemFile& p) {
  using namespace detail;
  json j = {{"schema_version", p.schema_version}, {"command", std::string(to_string(p.command))}};
  if (p.id) j["id"] = *p.id;
  if (p.seed) j["seed"] = *p.seed;
  if (p.measure) j["measure"] = measure_json(*p.measure);
  if (p.point) j["point"] = detail::to_json(*p.point);
  if (p.S) j["S"] = constraint_set_json(*p.S);
  if (p.objective) j["objective"] = objective_json(*p.objective);
  if (p.adversary) j["adversary"] = adversary_json(*p.adversary);
  if (p.E0) j["E0"] = box_json(*p.E0);
  if (p.delta) j["delta"] = *p.delta;
  if (p.eps) j["eps"] = *p.eps;
  if (p.C) j["C"] = *p.C;
  if (p.strategy) j["strategy"] = strategy_json(*p.strategy);
  if (p.method) j["method"] = *p.method;
  if (p.budget) j["budget"] = *p.budget;
  if (p.command == Command::Bench) j["instances"] = p.instances;
  return j;
}

// Canonical text: sorted keys, two-space indent, trailing newline.
inline std::string serialize(const ProblemFile& p) { return to_json(p).dump(2) + "\n"; }

inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t k) {
  std::uint64_t z = root + 0x9e3779b97f4a7c15ULL * (k + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline json depth_json(const DepthResult& r) {
  return {{"value", r.value}, {"witness", detail::to_json(r.witness.coords())}, {"exact", r.exact}, {"gap", r.gap}};
}

inline json run_depth(const ProblemFile& p) {
  const Measure m = p.measure->build();
  if (p.point->size() != m.dim()) fail(ErrorKind::SchemaError, "$.point: dimension differs from the measure");
  json out = depth_json(depth(m, *p.point));
  out["family"] = std::string(to_string(m.family()));
  return out;
}

inline json run_centerpoint(const ProblemFile& p) {
  const Measure m = p.measure->build();
  const std::string method = p.method.value_or("monte-carlo");
  json out;
  if (method == "monte-carlo") {
    ConstraintSet S = p.S ? *p.S : ConstraintSet::continuous(m.dim());
    if (!p.S && m.family() == MeasureFamily::LatticeCounting) S = ConstraintSet::lattice(m.dim());
    if (!p.S && m.family() == MeasureFamily::MixedInteger) S = ConstraintSet::mixed(m.n_int(), m.n_cont());
    RngState rng(p.seed.value_or(0));
    const auto r = centerpoint_monte_carlo(m, S, p.eps.value_or(0.1), p.delta.value_or(0.1), rng, p.C.value_or(0.5));
    out = {{"point", detail::to_json(r.point)}, {"sample_depth", r.depth.value}, {"method", r.method}, {"samples_used", r.samples_used},
           {"helly", r.guarantee.helly}, {"floor", r.guarantee.floor}};
    if (r.guarantee.grunbaum_floor) out["grunbaum_floor"] = *r.guarantee.grunbaum_floor;
    out["depth"] = depth_json(depth(m, r.point));
  } else if (method == "exact2d-int") {
    if (m.family() != MeasureFamily::LatticeCounting || m.dim() != 2) fail(ErrorKind::SchemaError, "$.method: exact2d-int needs a planar lattice measure");
    const auto r = centerpoint_lattice_2d(m);
    out = {{"point", detail::to_json(r.point)}, {"depth", depth_json(r.depth)}, {"method", r.method}, {"helly", r.guarantee.helly}, {"floor", r.guarantee.floor}};
  } else if (method == "lenstra") {
    if (m.family() != MeasureFamily::MixedInteger) fail(ErrorKind::SchemaError, "$.method: lenstra needs a mixed measure");
    const auto r = centerpoint_lenstra_mixed(*m.support_polytope(), m.n_int(), m.n_cont());
    out = {{"point", detail::to_json(r.point)}, {"depth", depth_json(r.depth)}, {"method", r.method}, {"floor", lenstra_depth_floor(m.n_int(), m.n_cont())}};
  } else if (method == "centroid") {
    if (m.family() != MeasureFamily::UniformPolytope) fail(ErrorKind::SchemaError, "$.method: centroid needs a uniform measure");
    const Point c = centroid(m);
    out = {{"point", detail::to_json(c)}, {"depth", depth_json(depth(m, c))}, {"method", "centroid"}};
    if (auto g = depth_guarantee(ConstraintSet::continuous(m.dim())).grunbaum_floor) out["grunbaum_floor"] = *g;
  } else {
    fail(ErrorKind::SchemaError, "$.method: unknown method \"" + method + "\"");
  }
  return out;
}

inline json report_json(const SolveReport& r) {
  json trace = json::array();
  for (const auto& row : r.trace)
    trace.push_back({{"point", detail::to_json(row.point)}, {"value", row.value}, {"subgradient", detail::to_json(row.subgradient)},
                     {"mass", row.mass}, {"mass_se", row.mass_se}, {"depth", row.depth}, {"depth_exact", row.depth_exact}});
  json j = {{"oracle_calls", r.oracle_calls}, {"stop_reason", std::string(to_string(r.stop_reason))}, {"initial_mass", r.initial_mass}, {"trace", trace}};
  j["best_point"] = r.best_point ? detail::to_json(*r.best_point) : json(nullptr);
  j["best_value"] = r.best_point ? json(r.best_value) : json(nullptr);
  j["upper_bound"] = r.bounds.upper ? json(*r.bounds.upper) : json(nullptr);
  j["lower_bound"] = r.bounds.lower ? json(*r.bounds.lower) : json(nullptr);
  return j;
}

// iteration,mass,best_value
inline std::string trace_csv(const SolveReport& r) {
  std::string out = "iteration,mass,best_value\n";
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < r.trace.size(); ++i) {
    best = std::min(best, r.trace[i].value);
    out += fmt::format("{},{},{}\n", i + 1, r.trace[i].mass, best);
  }
  return out;
}

inline Strategy strategy_with_seed(const ProblemFile& p) {
  Strategy s = p.strategy.value_or(Strategy{});
  s.seed = p.seed.value_or(0);
  if (p.eps) s.eps = *p.eps;
  if (p.C) s.C = *p.C;
  return s;
}

inline SolveReport run_solve(const ProblemFile& p) {
  FirstOrderOracle o = p.objective->build();
  if (o.dim() != p.S->dim() || p.E0->dim() != p.S->dim()) fail(ErrorKind::SchemaError, "$.objective: dimension differs from S or E0");
  const Strategy s = strategy_with_seed(p);
  const int budget = p.budget.value_or(kDefaultBudget);
  if (p.measure) return solve(o, *p.S, p.measure->build(), *p.E0, *p.delta, s, budget);
  return solve(o, *p.S, *p.E0, *p.delta, s, budget);
}

struct AdversaryRun {
  SolveReport report;
  std::int64_t lower_bound;
  ReplayCheck replay;
  std::size_t fallbacks;
};

inline AdversaryRun run_adversary(const ProblemFile& p) {
  auto st = p.adversary->build();
  FirstOrderOracle o = FirstOrderOracle::adversarial(st);
  const Box E0 = st->E0();
  AdversaryRun r;
  r.report = solve(o, p.adversary->constraint_set(), E0, *p.delta, strategy_with_seed(p), p.budget.value_or(kDefaultBudget));
  r.lower_bound = st->lower_bound(*p.delta);
  r.replay = replay(*st);
  r.fallbacks = st->fallbacks();
  return r;
}

inline json adversary_run_json(const ProblemFile& p, const AdversaryRun& r) {
  json j = report_json(r.report);
  j["adversary"] = detail::adversary_json(*p.adversary);
  j["strategy"] = std::string(to_string(strategy_with_seed(p).kind));
  j["lower_bound"] = r.lower_bound;
  j["replay_values_match"] = r.replay.values_match;
  j["replay_subgradients_maximal"] = r.replay.subgradients_maximal;
  j["fallback_answers"] = r.fallbacks;
  return j;
}

struct BenchRow {
  std::string id;
  std::string s_kind;
  int n = 0, d = 0;
  std::optional<int> B;
  double delta = 0.0;
  std::string strategy;
  std::size_t oracle_calls = 0;
  std::optional<std::int64_t> upper_bound, lower_bound;
  std::string status = "ok";
  std::string violation;
};

using BenchTable = std::vector<BenchRow>;

// Runs solve and adversary-run instances in input order; a failing instance becomes an error row.
inline BenchTable run_bench(const std::vector<json>& suite, std::uint64_t root_seed = 0) {
  BenchTable table;
  for (std::size_t k = 0; k < suite.size(); ++k) {
    BenchRow row;
    row.id = fmt::format("#{}", k);
    try {
      if (suite[k].is_object() && suite[k].contains("id") && suite[k]["id"].is_string()) row.id = suite[k]["id"].get<std::string>();
      ProblemFile p = detail::parse_document(suite[k]);
      if (!p.seed) p.seed = derive_seed(root_seed, k);
      if (p.command == Command::Solve) {
        const SolveReport r = run_solve(p);
        row.s_kind = std::string(to_string(p.S->kind));
        row.n = p.S->ints;
        row.d = p.S->conts;
        row.delta = *p.delta;
        row.strategy = std::string(to_string(strategy_with_seed(p).kind));
        row.oracle_calls = r.oracle_calls;
        row.upper_bound = r.bounds.upper;
        const Measure nu = p.measure ? p.measure->build() : standard_measure(*p.S, *p.E0);
        const bool exact_mass = nu.exact() && nu.dim() <= 2;
        if (strategy_with_seed(p).kind == Strategy::Kind::Centerpoint && exact_mass && r.bounds.upper &&
            static_cast<std::int64_t>(r.oracle_calls) > *r.bounds.upper)
          row.violation = "oracle_calls > upper_bound";
      } else if (p.command == Command::AdversaryRun) {
        const AdversaryRun r = run_adversary(p);
        const ConstraintSet S = p.adversary->constraint_set();
        row.s_kind = std::string(to_string(S.kind));
        row.n = S.ints;
        row.d = S.conts;
        if (p.adversary->kind != AdversaryKind::ContinuousMedian) row.B = p.adversary->B;
        row.delta = *p.delta;
        row.strategy = std::string(to_string(strategy_with_seed(p).kind));
        row.oracle_calls = r.report.oracle_calls;
        row.upper_bound = r.report.bounds.upper;
        row.lower_bound = r.lower_bound;
        if (static_cast<std::int64_t>(r.report.oracle_calls) < r.lower_bound) row.violation = "oracle_calls < lower_bound";
        if (!r.replay.values_match || !r.replay.subgradients_maximal) row.violation += row.violation.empty() ? "inconsistent adversary" : "; inconsistent adversary";
      } else {
        fail(ErrorKind::SchemaError, "$.command: bench instances must be solve or adversary-run");
      }
    } catch (const Error& e) {
      row.status = fmt::format("error: {}", e.what());
    }
    table.push_back(std::move(row));
  }
  return table;
}

namespace detail {

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

template <class T>
std::string opt_field(const std::optional<T>& v) {
  return v ? fmt::format("{}", *v) : std::string();
}

}  // namespace detail

inline std::string bench_csv(const BenchTable& t) {
  std::string out = "id,S,n,d,B,delta,strategy,oracle_calls,upper_bound,lower_bound,status,violation\n";
  for (const auto& r : t) {
    const bool ok = r.status == "ok";
    out += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{}\n", detail::csv_field(r.id), r.s_kind, ok ? std::to_string(r.n) : "",
                       ok ? std::to_string(r.d) : "", detail::opt_field(r.B), ok ? fmt::format("{}", r.delta) : "", r.strategy,
                       ok ? std::to_string(r.oracle_calls) : "", detail::opt_field(r.upper_bound), detail::opt_field(r.lower_bound),
                       detail::csv_field(r.status), detail::csv_field(r.violation));
  }
  return out;
}

inline json bench_json(const BenchTable& t) {
  json rows = json::array();
  for (const auto& r : t) {
    json j = {{"id", r.id}, {"status", r.status}};
    if (r.status == "ok") {
      j.update({{"S", r.s_kind}, {"n", r.n}, {"d", r.d}, {"delta", r.delta}, {"strategy", r.strategy}, {"oracle_calls", r.oracle_calls},
                {"violation", r.violation}});
      j["B"] = r.B ? json(*r.B) : json(nullptr);
      j["upper_bound"] = r.upper_bound ? json(*r.upper_bound) : json(nullptr);
      j["lower_bound"] = r.lower_bound ? json(*r.lower_bound) : json(nullptr);
    }
    rows.push_back(j);
  }
  return rows;
}

// CLI exit code for an error kind: 2 input, 3 numeric budget, 4 infeasible.
inline int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::ParseError:
    case ErrorKind::SchemaError:
    case ErrorKind::InvalidArgument:
    case ErrorKind::MalformedPolygon:
    case ErrorKind::DimensionTooLarge:
    case ErrorKind::Unbounded:
      return 2;
    case ErrorKind::BudgetExceeded:
    case ErrorKind::RejectionStall:
      return 3;
    case ErrorKind::Infeasible:
    case ErrorKind::EmptyRegion:
    case ErrorKind::EmptyLattice:
    case ErrorKind::InfeasibleStart:
      return 4;
    case ErrorKind::ZeroSubgradient:
    case ErrorKind::OutsideRegion:
      return 1;
  }
  return 1;
}

}  // namespace cpc
