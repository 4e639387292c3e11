#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <numbers>

#include "innerbox/benchmarks.hpp"
#include "innerbox/parser.hpp"
#include "support.hpp"

using namespace innerbox;
using innerbox::fuzz::Gen;

#ifndef INNERBOX_BENCH_DIR
#error "INNERBOX_BENCH_DIR must point at the golden problem files"
#endif

namespace {

std::vector<double> random_free_point(const Problem& p, Gen& g) {
  std::vector<double> pt;
  for (std::size_t i = 0; i < p.dimension(); ++i)
    if (i != p.quantified_index()) pt.push_back(g.point_in(p.initial_box[i]));
  return pt;
}

}  // namespace

TEST(Benchmarks, Registry) {
  EXPECT_EQ(benchmark_names().size(), 12u);
  for (const auto& name : benchmark_names()) {
    Benchmark b = build_benchmark(name);
    EXPECT_EQ(b.name, name);
    EXPECT_NO_THROW(b.problem.validate()) << name;
    EXPECT_EQ(b.reconstructed, !b.note.empty()) << name;
  }
  EXPECT_THROW(build_benchmark("circle4"), std::invalid_argument);
  for (const char* n : {"circle2", "circle3", "pointpath", "projection5", "projection8"})
    EXPECT_TRUE(build_benchmark(n).reconstructed) << n;
  for (const char* n : {"parabola", "circle1", "robot", "garloffgraf1"}) EXPECT_FALSE(build_benchmark(n).reconstructed) << n;
}

TEST(Benchmarks, ParabolaShape) {
  Problem p = build_benchmark("parabola").problem;
  EXPECT_EQ(*p.variables, (VarNames{"a", "b", "c", "t"}));
  EXPECT_EQ(p.quantifier->domain, Interval(0, 2));
  EXPECT_EQ(print(p.constraints[0]), "a * t^2 + b * t + c - (2 * t - 1) >= 0");
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(p.initial_box[i], Interval(0, 1));
}

TEST(Benchmarks, SatelliteShape) {
  Problem p = build_benchmark("satellite").problem;
  EXPECT_EQ(p.constraints.size(), 3u);
  EXPECT_EQ(*p.variables, (VarNames{"theta", "phi", "psi", "t"}));
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(p.initial_box[i].lo(), 0.0);
    EXPECT_TRUE(p.initial_box[i].contains(2 * std::numbers::pi));
    EXPECT_LT(p.initial_box[i].hi(), 6.2832);
  }
  EXPECT_TRUE(p.quantifier->domain.contains(std::numbers::pi));
  EXPECT_TRUE(p.quantifier->domain.contains(-std::numbers::pi));
}

TEST(Benchmarks, GarloffGraf1Shape) {
  Problem p = build_benchmark("garloffgraf1").problem;
  EXPECT_FALSE(p.quantifier);
  EXPECT_EQ(p.initial_box[0], Interval(2, 10));
  EXPECT_EQ(p.initial_box[1], Interval(40, 50));
  EXPECT_EQ(print(p.constraints[0]), "(-5) * v^2 - 13 * v + v * w - w >= 0");
}

TEST(Benchmarks, RobotAndCircleShapes) {
  Problem r = build_benchmark("robot").problem;
  EXPECT_EQ(r.quantifier->domain, Interval(0, 2));
  EXPECT_EQ(r.initial_box[0], Interval(0, 5));
  EXPECT_EQ(r.initial_box[1], Interval(0, 5));
  for (std::size_t k = 1; k <= 3; ++k) {
    Problem c = build_benchmark("circle" + std::to_string(k)).problem;
    EXPECT_EQ(c.constraints.size(), k);
  }
  EXPECT_EQ(build_benchmark("projection4").problem.constraints.size(), 4u);
  EXPECT_EQ(build_benchmark("projection5").problem.constraints.size(), 5u);
  EXPECT_EQ(build_benchmark("projection8").problem.constraints.size(), 8u);
  EXPECT_EQ(build_benchmark("pointpath").problem.constraints.size(), 2u);
}

TEST(Benchmarks, GoldenFiles) {
  for (const auto& name : benchmark_names()) {
    std::filesystem::path file = std::filesystem::path(INNERBOX_BENCH_DIR) / (name + ".txt");
    ASSERT_TRUE(std::filesystem::exists(file)) << file;
    Problem built = build_benchmark(name).problem;
    Problem loaded = load_problem_file(file.string());
    EXPECT_EQ(loaded, built) << name;
    std::string text = print(built);
    std::ifstream in(file);
    std::string golden((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    EXPECT_EQ(golden, text) << name;
  }
}

TEST(Oracle, Examples) {
  std::vector<double> ones = {1, 1, 1}, zeros = {0, 0, 0};
  EXPECT_EQ(oracle_eval("parabola", ones), Verdict::solution);
  EXPECT_EQ(oracle_eval("parabola", zeros), Verdict::nonsolution);
  std::vector<double> g = {4, 45};
  EXPECT_EQ(oracle_eval("garloffgraf1", g), Verdict::solution);
  std::vector<double> below = {4, 44};  // 44 * 3 = 132 is the boundary
  EXPECT_EQ(oracle_eval("garloffgraf1", below), Verdict::solution);
  std::vector<double> under = {4, 43.9};
  EXPECT_EQ(oracle_eval("garloffgraf1", under), Verdict::nonsolution);
  std::vector<double> outside = {11, 45};
  EXPECT_THROW(oracle_eval("garloffgraf1", outside), std::invalid_argument);
  EXPECT_THROW(oracle_eval("nope", g), std::invalid_argument);
  EXPECT_EQ(to_string(Verdict::solution), "SOLUTION");
}

TEST(Oracle, CircleFarCorner) {
  std::vector<double> far = {5, 5};
  for (const char* n : {"circle1", "circle2", "circle3"}) EXPECT_EQ(oracle_eval(n, far), Verdict::solution) << n;
  std::vector<double> on_path = {0, 2.5};  // circle1 passes through (0, 2.5) at t = 0
  EXPECT_EQ(oracle_eval("circle1", on_path), Verdict::nonsolution);
}

// The quadratic-minimum oracle against dense sampling of t.
TEST(Oracle, ParabolaAgainstSampling) {
  Gen g(21);
  for (int i = 0; i < 2000; ++i) {
    double a = g.uniform(0, 1), b = g.uniform(0, 1), c = g.uniform(0, 1);
    long double lo = 1e9L;
    for (int k = 0; k <= 4000; ++k) {
      long double t = 2.0L * k / 4000;
      lo = std::min(lo, a * t * t + (b - 2) * t + c + 1);
    }
    std::vector<double> p = {a, b, c};
    Verdict v = oracle_eval("parabola", p);
    if (lo < -1e-6L) EXPECT_EQ(v, Verdict::nonsolution) << a << " " << b << " " << c;
    if (v == Verdict::nonsolution) EXPECT_LT(lo, 1e-6L);
  }
}

TEST(Oracle, StableUnderGridRefinement) {
  Gen g(22);
  for (const auto& name : benchmark_names()) {
    Problem p = build_benchmark(name).problem;
    if (!p.quantifier) continue;
    int flips = 0, undecided = 0;
    const int n = name.starts_with("projection") || name == "satellite" ? 200 : 1000;
    for (int i = 0; i < n; ++i) {
      auto pt = random_free_point(p, g);
      Verdict coarse = oracle_eval(name, pt, 4096), fine = oracle_eval(name, pt, 16384);
      if (coarse == Verdict::undecided || fine == Verdict::undecided) {
        ++undecided;
        // Refinement may only settle an undecided point.
        EXPECT_TRUE(coarse == Verdict::undecided) << name;
        continue;
      }
      if (coarse != fine) ++flips;
    }
    EXPECT_EQ(flips, 0) << name;
    EXPECT_LE(undecided, n / 100) << name;
  }
}

TEST(Oracle, BoxVerdictsAgreeWithPoints) {
  Gen g(23);
  for (const char* name : {"parabola", "robot", "circle2", "garloffgraf1", "pointpath"}) {
    Problem p = build_benchmark(name).problem;
    for (int i = 0; i < 60; ++i) {
      std::vector<Interval> d;
      for (std::size_t k = 0; k < p.dimension(); ++k) {
        const Interval& dom = p.initial_box[k];
        if (k == p.quantified_index()) {
          d.push_back(dom);
          continue;
        }
        double w = dom.width() * g.uniform(0.001, 0.1), lo = g.uniform(dom.lo(), dom.hi() - w);
        d.emplace_back(lo, lo + w);
      }
      Box b(p.variables, d);
      Verdict v = oracle_box(name, b);
      if (v == Verdict::undecided) continue;
      for (int s = 0; s < 10; ++s) {
        auto pt = fuzz::drop_slot(g.point_in(b), p.quantified_index());
        Verdict pv = oracle_eval(name, pt);
        if (pv != Verdict::undecided) EXPECT_EQ(pv, v) << name << " " << to_string(b);
      }
    }
  }
}

TEST(Oracle, GarloffGraf2HasNoSolution) {
  Gen g(24);
  Problem p = build_benchmark("garloffgraf2").problem;
  for (int i = 0; i < 10000; ++i) {
    auto pt = random_free_point(p, g);
    ASSERT_EQ(oracle_eval("garloffgraf2", pt), Verdict::nonsolution);
  }
  EXPECT_EQ(oracle_box("garloffgraf2", p.initial_box), Verdict::nonsolution);
}

TEST(OracleArea, QuadratureMatchesClosedForm) {
  double a = oracle_area("garloffgraf1"), c = garloffgraf1_area_closed_form();
  EXPECT_GT(c, 0.0);
  EXPECT_LT(c, 80.0);
  EXPECT_NEAR(a, c, 1e-6 * c);
}

TEST(OracleArea, DegenerateRegions) {
  Problem p = build_benchmark("garloffgraf1").problem;
  EXPECT_EQ(oracle_area("garloffgraf1", Box(p.variables, {Interval(2), Interval(40, 50)})), 0.0);
  EXPECT_EQ(oracle_area("garloffgraf1", Box(p.variables, {Interval(9, 10), Interval(49, 50)})), 0.0);
  EXPECT_THROW(oracle_area("parabola"), std::invalid_argument);
}
