#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "cpc/problem.hpp"

using namespace cpc;

namespace {

struct Options {
  std::string input, output, format = "json", method, strategy;
  std::optional<std::uint64_t> seed;
  std::optional<double> eps, delta, C;
  std::optional<int> budget;
};

void add_options(CLI::App* sub, Options& o) {
  sub->add_option("--input", o.input, "problem file (JSON)")->required();
  sub->add_option("--output", o.output, "write the result here instead of stdout");
  sub->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("--seed", o.seed, "root seed for all randomness");
  sub->add_option("--eps", o.eps, "centerpoint depth slack");
  sub->add_option("--delta", o.delta, "mass threshold (solve) or failure probability (centerpoint)");
  sub->add_option("--method", o.method, "monte-carlo, exact2d-int, lenstra or centroid");
  sub->add_option("--strategy", o.strategy, "centerpoint, centroid or random")->check(CLI::IsMember({"centerpoint", "centroid", "random"}));
  sub->add_option("--budget", o.budget, "maximum oracle calls")->check(CLI::PositiveNumber);
  sub->add_option("--C", o.C, "sample size constant")->check(CLI::PositiveNumber);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::ParseError, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void apply(const Options& o, ProblemFile& p) {
  if (o.seed) p.seed = *o.seed;
  if (o.eps) p.eps = *o.eps;
  if (o.delta) p.delta = *o.delta;
  if (o.C) p.C = *o.C;
  if (o.budget) p.budget = *o.budget;
  if (!o.method.empty()) p.method = o.method;
  if (!o.strategy.empty()) {
    Strategy s = detail::strategy_from_name(o.strategy);
    if (p.strategy) {
      s.eps = p.strategy->eps;
      s.confidence = p.strategy->confidence;
      s.C = p.strategy->C;
    }
    p.strategy = s;
  }
  if (p.delta && !(*p.delta > 0)) fail(ErrorKind::SchemaError, "--delta: must be positive");
  if (p.eps && !(*p.eps > 0)) fail(ErrorKind::SchemaError, "--eps: must be positive");
}

std::string point_cells(const json& pt) {
  std::string s;
  for (const auto& v : pt) s += fmt::format(",{}", v.get<double>());
  return s;
}

std::string depth_csv(const json& r) {
  return fmt::format("value,exact,gap,witness\n{},{},{}{}\n", r["value"].get<double>(), r["exact"].get<bool>() ? "true" : "false",
                     r["gap"].get<double>(), point_cells(r["witness"]));
}

std::string centerpoint_csv(const json& r) {
  return fmt::format("method,depth,point\n{},{}{}\n", r["method"].get<std::string>(), r["depth"]["value"].get<double>(), point_cells(r["point"]));
}

int run(Command cmd, const Options& o) {
  ProblemFile p = parse_problem(read_file(o.input));
  if (p.command != cmd) fail(ErrorKind::SchemaError, fmt::format("$.command: file declares \"{}\" but \"{}\" was requested", to_string(p.command), to_string(cmd)));
  apply(o, p);
  const bool csv = o.format == "csv";
  std::string text;
  int code = 0;
  switch (cmd) {
    case Command::Depth: {
      const json r = run_depth(p);
      text = csv ? depth_csv(r) : r.dump(2) + "\n";
      break;
    }
    case Command::Centerpoint: {
      const json r = run_centerpoint(p);
      text = csv ? centerpoint_csv(r) : r.dump(2) + "\n";
      break;
    }
    case Command::Solve: {
      const SolveReport r = run_solve(p);
      text = csv ? trace_csv(r) : report_json(r).dump(2) + "\n";
      if (r.stop_reason == StopReason::Budget) code = 3;
      break;
    }
    case Command::AdversaryRun: {
      const AdversaryRun r = run_adversary(p);
      text = csv ? trace_csv(r.report) : adversary_run_json(p, r).dump(2) + "\n";
      if (r.report.stop_reason == StopReason::Budget) code = 3;
      break;
    }
    case Command::Bench: {
      const BenchTable t = run_bench(p.instances, p.seed.value_or(0));
      text = csv ? bench_csv(t) : bench_json(t).dump(2) + "\n";
      break;
    }
  }
  if (o.output.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(o.output, std::ios::binary);
    if (!out) fail(ErrorKind::InvalidArgument, "cannot write " + o.output);
    out << text;
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Centerpoint cutting-plane toolkit"};
  app.require_subcommand(1);
  Options opts;
  const std::pair<Command, const char*> cmds[] = {
      {Command::Depth, "Tukey depth of a point under a measure"},
      {Command::Centerpoint, "approximate or exact centerpoint of a measure"},
      {Command::Solve, "minimize a convex objective over a mixed-integer set"},
      {Command::AdversaryRun, "play a solver against a resisting oracle"},
      {Command::Bench, "run a suite of solve and adversary-run instances"},
  };
  std::vector<std::pair<Command, CLI::App*>> subs;
  for (const auto& [c, help] : cmds) {
    CLI::App* sub = app.add_subcommand(std::string(to_string(c)), help);
    add_options(sub, opts);
    subs.emplace_back(c, sub);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    for (const auto& [c, sub] : subs)
      if (sub->parsed()) return run(c, opts);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  }
  return 2;
}
