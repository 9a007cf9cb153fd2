#include <gtest/gtest.h>

#include "cpc/problem.hpp"

using namespace cpc;

namespace {

const char* kSolve = R"({
  "schema_version": 1, "command": "solve", "seed": 4,
  "objective": {"kind": "quadratic", "Q": [[1, 0], [0, 1]], "c": [-0.6, -1.4], "r": 0.58},
  "S": {"kind": "lattice", "n": 2},
  "E0": {"lower": [0, 0], "upper": [4, 4]},
  "delta": 0.5,
  "strategy": {"kind": "centerpoint"}
})";

const char* kAdversary = R"({
  "schema_version": 1, "command": "adversary-run", "id": "fib",
  "adversary": {"kind": "integer-fiber", "n": 2, "B": 8},
  "delta": 0.5, "strategy": {"kind": "centroid"}
})";

ErrorKind kind_of(const std::string& text) {
  try {
    parse_problem(text);
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error for " << text;
  return ErrorKind::InvalidArgument;
}

std::string message_of(const std::string& text) {
  try {
    parse_problem(text);
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Parse, DepthDocument) {
  const ProblemFile p = parse_problem(R"({"schema_version": 1, "command": "depth",
    "measure": {"family": "finite", "points": [[0, 0], [3, 0], [0, 3]]}, "point": [1, 1]})");
  EXPECT_EQ(p.command, Command::Depth);
  const json out = run_depth(p);
  EXPECT_NEAR(out["value"].get<double>(), 1.0 / 3.0, 1e-12);
  EXPECT_TRUE(out["exact"].get<bool>());
}

TEST(Parse, SyntaxAndSchemaErrorsDiffer) {
  EXPECT_EQ(kind_of("{\"schema_version\": 1,"), ErrorKind::ParseError);
  EXPECT_EQ(kind_of("[1, 2"), ErrorKind::ParseError);
  EXPECT_EQ(kind_of("[]"), ErrorKind::SchemaError);
  EXPECT_EQ(kind_of(R"({"command": "depth"})"), ErrorKind::SchemaError);
  EXPECT_EQ(kind_of(R"({"schema_version": 2, "command": "depth"})"), ErrorKind::SchemaError);
  EXPECT_EQ(kind_of(R"({"schema_version": 1, "command": "fly"})"), ErrorKind::SchemaError);
}

TEST(Parse, UnknownKeyIsNamed) {
  std::string text = kSolve;
  text.replace(text.find("\"delta\""), 7, "\"delta\": 0.5, \"dleta\"");
  EXPECT_EQ(kind_of(text), ErrorKind::SchemaError);
  EXPECT_NE(message_of(text).find("dleta"), std::string::npos);

  std::string nested = kSolve;
  nested.replace(nested.find("\"r\""), 3, "\"rr\": 1, \"r\"");
  EXPECT_NE(message_of(nested).find("$.objective.rr"), std::string::npos);
}

TEST(Parse, MissingAndMistypedFields) {
  EXPECT_NE(message_of(R"({"schema_version": 1, "command": "solve"})").find("objective"), std::string::npos);
  std::string text = kSolve;
  text.replace(text.find("\"delta\": 0.5"), 12, "\"delta\": \"x\"");
  EXPECT_NE(message_of(text).find("$.delta"), std::string::npos);
  std::string neg = kSolve;
  neg.replace(neg.find("\"delta\": 0.5"), 12, "\"delta\": -1");
  EXPECT_EQ(kind_of(neg), ErrorKind::SchemaError);
}

TEST(Serialize, Idempotent) {
  const char* docs[] = {
      kSolve, kAdversary,
      R"({"schema_version": 1, "command": "centerpoint", "method": "lenstra",
          "measure": {"family": "mixed", "n": 1, "d": 1, "polytope": {"rows": [[-1, 0, 0], [1, 0, 1], [0, -1, 0], [0, 1, 0.5]]}}})",
      R"({"schema_version": 1, "command": "bench", "seed": 9, "instances": [{"a": 1}]})",
      R"({"schema_version": 1, "command": "adversary-run", "delta": 1,
          "adversary": {"kind": "continuous-median", "E0": {"lower": [0, 0], "upper": [32, 32]}}})",
  };
  for (const char* d : docs) {
    const std::string once = serialize(parse_problem(d));
    const std::string twice = serialize(parse_problem(once));
    EXPECT_EQ(once, twice);
  }
}

TEST(Run, SolveMatchesKnownMinimizer) {
  const SolveReport r = run_solve(parse_problem(kSolve));
  ASSERT_TRUE(r.best_point);
  EXPECT_EQ(*r.best_point, make_point({0, 1}));
  EXPECT_EQ(r.bounds.upper, iteration_upper_bound(0.25, 16, 0.5));
}

TEST(Run, CenterpointMethods) {
  const json lenstra = run_centerpoint(parse_problem(R"({"schema_version": 1, "command": "centerpoint", "method": "lenstra",
      "measure": {"family": "mixed", "n": 1, "d": 1, "polytope": {"rows": [[-1, 0, 0], [1, 0, 1], [0, -1, 0], [0, 1, 0.5]]}}})"));
  // two unit fibers: a tilted line keeps half of one and none of the other
  EXPECT_NEAR(lenstra["depth"]["value"].get<double>(), 0.25, 1e-9);
  const json lat = run_centerpoint(parse_problem(R"({"schema_version": 1, "command": "centerpoint", "method": "exact2d-int",
      "measure": {"family": "lattice", "polytope": {"box": {"lower": [0, 0], "upper": [2, 2]}}}})"));
  EXPECT_EQ(lat["point"], json::parse("[1.0, 1.0]"));
  // a generic line through the middle keeps four of the eight other points
  EXPECT_NEAR(lat["depth"]["value"].get<double>(), 5.0 / 9.0, 1e-12);
  const auto a = run_centerpoint(parse_problem(R"({"schema_version": 1, "command": "centerpoint", "seed": 3, "eps": 0.2,
      "measure": {"family": "uniform", "polytope": {"box": {"lower": [0, 0], "upper": [1, 1]}}}})"));
  const auto b = run_centerpoint(parse_problem(R"({"schema_version": 1, "command": "centerpoint", "seed": 3, "eps": 0.2,
      "measure": {"family": "uniform", "polytope": {"box": {"lower": [0, 0], "upper": [1, 1]}}}})"));
  EXPECT_EQ(a.dump(), b.dump());
  EXPECT_GE(a["depth"]["value"].get<double>(), 4.0 / 9.0 - 0.2);
}

TEST(Bench, RowsInOrderWithErrorRow) {
  std::vector<json> suite = {json::parse(kAdversary), json::parse(R"({"schema_version": 1, "command": "solve", "id": "bad"})"),
                             json::parse(kSolve)};
  const BenchTable t = run_bench(suite, 1);
  ASSERT_EQ(t.size(), 3u);
  EXPECT_EQ(t[0].id, "fib");
  EXPECT_EQ(t[0].status, "ok");
  EXPECT_GE(t[0].oracle_calls, 8u);
  EXPECT_EQ(t[0].lower_bound, 8);
  EXPECT_TRUE(t[0].violation.empty());
  EXPECT_EQ(t[1].id, "bad");
  EXPECT_EQ(t[1].status.rfind("error: SchemaError", 0), 0u);
  EXPECT_EQ(t[2].id, "#2");
  EXPECT_EQ(t[2].status, "ok");
  EXPECT_TRUE(t[2].violation.empty());
  EXPECT_EQ(bench_csv(t), bench_csv(run_bench(suite, 1)));
}

TEST(Bench, EmptySuite) {
  const BenchTable t = run_bench({});
  EXPECT_TRUE(t.empty());
  EXPECT_EQ(bench_csv(t), "id,S,n,d,B,delta,strategy,oracle_calls,upper_bound,lower_bound,status,violation\n");
}

TEST(Bench, CsvQuoting) {
  EXPECT_EQ(detail::csv_field("a,b"), "\"a,b\"");
  EXPECT_EQ(detail::csv_field("say \"x\""), "\"say \"\"x\"\"\"");
  EXPECT_EQ(detail::csv_field("plain"), "plain");
}

TEST(ExitCodes, Mapping) {
  EXPECT_EQ(exit_code(ErrorKind::ParseError), 2);
  EXPECT_EQ(exit_code(ErrorKind::SchemaError), 2);
  EXPECT_EQ(exit_code(ErrorKind::BudgetExceeded), 3);
  EXPECT_EQ(exit_code(ErrorKind::InfeasibleStart), 4);
  EXPECT_EQ(exit_code(ErrorKind::EmptyLattice), 4);
}
