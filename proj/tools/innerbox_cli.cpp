// innerbox run | compare

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "innerbox/benchmarks.hpp"
#include "innerbox/io.hpp"
#include "innerbox/parser.hpp"
#include "innerbox/solver.hpp"

using namespace innerbox;

namespace {

struct Options {
  std::string problem_file, bench;
  std::string algo = "ipabc", contractor = "bc3", strategy = "normal", schedule = "dfs";
  double eps = 1e-2, omega = 0.1, bc3_tol = 0.0, timeout = 600.0;
  bool first_only = false;
  std::string out_dir, svg;
  std::uint64_t seed = 0;
  std::vector<std::string> benches, algos;
  std::vector<double> eps_list;
};

void add_solver_flags(CLI::App* app, Options& o) {
  app->add_option("--omega", o.omega, "slice width of the quantified domain (jla)")->check(CLI::PositiveNumber);
  app->add_option("--contractor", o.contractor, "outer contractor")->check(CLI::IsMember({"hc", "bc3"}));
  app->add_option("--strategy", o.strategy, "inner operator strategy")
      ->check(CLI::IsMember({"simple", "preparse", "normal", "global"}));
  app->add_option("--schedule", o.schedule, "worklist discipline")->check(CLI::IsMember({"dfs", "semi"}));
  app->add_option("--bc3-tol", o.bc3_tol, "quasi-zero width for bc3 (0: canonical)")->check(CLI::NonNegativeNumber);
  app->add_option("--timeout", o.timeout, "seconds per run")->check(CLI::PositiveNumber);
  app->add_flag("--first-only", o.first_only, "stop at the first inner box");
  app->add_option("--seed", o.seed, "recorded in the config echo");
}

SolverConfig make_config(const Options& o, double eps) {
  SolverConfig cfg;
  cfg.epsilon = eps;
  cfg.omega = o.omega;
  cfg.contractor = parse_contractor(o.contractor);
  cfg.strategy = parse_strategy(o.strategy);
  cfg.schedule = parse_schedule(o.schedule);
  cfg.bc3_tolerance = o.bc3_tol;
  cfg.timeout_s = o.timeout;
  cfg.first_only = o.first_only;
  cfg.seed = o.seed;
  cfg.validate();
  return cfg;
}

int do_run(const Options& o) {
  Problem p;
  std::string source;
  if (!o.problem_file.empty()) {
    p = load_problem_file(o.problem_file);
    source = o.problem_file;
  } else {
    p = build_benchmark(o.bench).problem;
    source = o.bench;
  }
  const Algorithm algo = parse_algorithm(o.algo);
  SolverConfig cfg = make_config(o, o.eps);

  std::optional<std::pair<std::size_t, std::size_t>> svg_dims;
  if (!o.svg.empty()) {
    auto comma = o.svg.find(',');
    if (comma == std::string::npos) throw CLI::ValidationError("--svg", "expected <x-var>,<y-var>");
    auto x = p.initial_box.find(o.svg.substr(0, comma));
    auto y = p.initial_box.find(o.svg.substr(comma + 1));
    if (!x || !y) throw CLI::ValidationError("--svg", "variables not in the problem: " + o.svg);
    svg_dims = std::make_pair(*x, *y);
  }

  SolveResult r = solve(p, algo, cfg);
  const std::string name = o.bench.empty() ? std::filesystem::path(o.problem_file).stem().string() : o.bench;
  RunReport rep = make_report(name, algo, cfg, r.stats);
  std::string csv = to_csv({rep}, false);
  std::cout << csv;

  std::filesystem::path out = o.out_dir.empty() ? std::filesystem::path(".") : std::filesystem::path(o.out_dir);
  std::filesystem::create_directories(out);
  write_file_atomic(out / "paving.json", to_json(make_paving_file(p, r.paving, config_json(source, algo, cfg))));
  write_file_atomic(out / "report.csv", csv);
  if (svg_dims) write_file_atomic(out / "paving.svg", to_svg(r.paving, p.initial_box, svg_dims->first, svg_dims->second));

  if (r.paving.inner.empty() && r.paving.undecided.empty()) return 2;
  return 0;
}

int do_compare(const Options& o) {
  std::vector<RunReport> reports;
  for (const auto& bench : o.benches) {
    Problem p = build_benchmark(bench).problem;
    for (double eps : o.eps_list) {
      for (const auto& a : o.algos) {
        Algorithm algo = parse_algorithm(a);
        SolverConfig cfg = make_config(o, eps);
        SolveResult r = solve(p, algo, cfg);
        reports.push_back(make_report(bench, algo, cfg, r.stats));
        std::cerr << csv_rows({reports.back()}, false).front() << "\n";
      }
    }
  }
  std::string csv = to_csv(reports, true);
  std::cout << csv;
  if (!o.out_dir.empty()) {
    std::filesystem::create_directories(o.out_dir);
    write_file_atomic(std::filesystem::path(o.out_dir) / "report.csv", csv);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Inner and outer pavings of (universally quantified) inequality systems"};
  app.require_subcommand(1);
  Options o;

  auto* run = app.add_subcommand("run", "pave one problem");
  auto* src = run->add_option_group("source");
  src->add_option("--problem", o.problem_file, "problem file")->check(CLI::ExistingFile);
  src->add_option("--bench", o.bench, "built-in benchmark")->check(CLI::IsMember(benchmark_names()));
  src->require_option(1);
  run->add_option("--algo", o.algo, "paver")->check(CLI::IsMember({"ipabc", "jla", "sivia"}));
  run->add_option("--eps", o.eps, "stopping width")->check(CLI::PositiveNumber);
  run->add_option("--out", o.out_dir, "output directory");
  run->add_option("--svg", o.svg, "<x-var>,<y-var> for paving.svg");
  add_solver_flags(run, o);

  auto* cmp = app.add_subcommand("compare", "tabulate runs");
  cmp->add_option("--benches", o.benches, "benchmarks")->required()->delimiter(',')->check(
      CLI::IsMember(benchmark_names()));
  cmp->add_option("--algos", o.algos, "pavers")->required()->delimiter(',')->check(
      CLI::IsMember({"ipabc", "jla", "sivia"}));
  cmp->add_option("--eps-list", o.eps_list, "stopping widths")->required()->delimiter(',')->check(
      CLI::PositiveNumber);
  cmp->add_option("--out", o.out_dir, "directory for report.csv");
  add_solver_flags(cmp, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*run) return do_run(o);
    return do_compare(o);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const ParseError& e) {
    std::cerr << "problem file: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
