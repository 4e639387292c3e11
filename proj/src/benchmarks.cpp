#include "innerbox/benchmarks.hpp"

#include "mp_interval.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <array>
#include <functional>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace innerbox {

namespace {

// ---------------------------------------------------------------------------
// Problem builders.

Interval pi_range(double lo_factor, double hi_factor) {
  // [lo_factor*pi, hi_factor*pi] widened to double bounds.
  Interval lo = Interval(lo_factor) * Interval::pi();
  Interval hi = Interval(hi_factor) * Interval::pi();
  return Interval(lo.lo(), hi.hi());
}

struct CirclePath {
  double radius;
  double phase_over_pi;  // phase as a multiple of pi
};

const std::vector<CirclePath> kCircles = {{2.5, 0.0}, {1.5, 0.5}, {3.5, 1.0}};
constexpr double kCircleClearance = 0.5;

Expr phase_expr(const Expr& t, double phase_over_pi) {
  if (phase_over_pi == 0.0) return t;
  if (phase_over_pi == 1.0) return t + Expr::pi();
  return t + Expr::pi() * phase_over_pi;
}

Problem build_circle(std::size_t count) {
  ProblemBuilder pb;
  Expr x = pb.var("x", Interval(-5, 5));
  Expr y = pb.var("y", Interval(-5, 5));
  Expr t = pb.forall("t", pi_range(-1, 1));
  for (std::size_t i = 0; i < count; ++i) {
    const auto& c = kCircles[i];
    Expr arg = phase_expr(t, c.phase_over_pi);
    Expr dist = sqrt(sqr(c.radius * sin(arg) - x) + sqr(c.radius * cos(arg) - y));
    pb.add(make_geq(dist, Expr::constant(kCircleClearance)));
  }
  return pb.build();
}

Problem build_parabola() {
  ProblemBuilder pb;
  Expr a = pb.var("a", Interval(0, 1));
  Expr b = pb.var("b", Interval(0, 1));
  Expr c = pb.var("c", Interval(0, 1));
  Expr t = pb.forall("t", Interval(0, 2));
  pb.add(make_geq(a * sqr(t) + b * t + c, 2.0 * t - 1.0));
  return pb.build();
}

struct Orbit {
  double d, omega, phi, theta, psi;
};

const std::vector<Orbit> kOrbits = {
    {5.0, 1.0, 0.0, 0.0, 0.0},
    {5.0, 1.0, 1.0, 1.0, 1.0},
    {5.0, 1.0, 2.0, 1.5, 1.5},
};
constexpr double kNewOrbitRadius = 5.0;
constexpr double kNewOrbitRate = 1.0;
constexpr double kSatelliteClearance = 1.0;

struct Position {
  Expr x, y, z;
};

Position orbit_position(const Expr& d, const Expr& omega_t_plus_phi, const Expr& theta, const Expr& psi) {
  Expr s = sin(omega_t_plus_phi), c = cos(omega_t_plus_phi);
  return {d * cos(theta) * s,
          d * (sin(psi) * sin(theta) * s + cos(psi) * c),
          d * (-cos(psi) * sin(theta) * s + sin(psi) * c)};
}

Problem build_satellite() {
  ProblemBuilder pb;
  Interval full_turn = pi_range(0, 2);
  full_turn = Interval(0.0, full_turn.hi());
  Expr theta = pb.var("theta", full_turn);
  Expr phi = pb.var("phi", full_turn);
  Expr psi = pb.var("psi", full_turn);
  Expr t = pb.forall("t", pi_range(-1, 1));
  Position mine = orbit_position(Expr::constant(kNewOrbitRadius), kNewOrbitRate * t + phi, theta, psi);
  for (const auto& o : kOrbits) {
    Position other = orbit_position(Expr::constant(o.d), o.omega * t + o.phi, Expr::constant(o.theta),
                                    Expr::constant(o.psi));
    Expr dist = sqrt(sqr(other.x - mine.x) + sqr(other.y - mine.y) + sqr(other.z - mine.z));
    pb.add(make_geq(dist, Expr::constant(kSatelliteClearance)));
  }
  return pb.build();
}

constexpr double kArm1 = 1.0, kArm2 = 2.0, kArm3 = 1.0, kHand = 0.5;

Problem build_robot() {
  ProblemBuilder pb;
  Expr x = pb.var("x", Interval(0, 5));
  Expr y = pb.var("y", Interval(0, 5));
  Expr t = pb.forall("t", Interval(0, 2));
  Expr a1 = t + Expr::pi() / 4.0;
  Expr a2 = 2.0 * t - 1.0;
  Expr a3 = 0.2 * t + 0.1;
  Expr px = kArm1 * sin(a1) + kArm2 * sin(a1 + a2 - Expr::pi()) + kArm3 * sin(a1 + a2 + a3);
  Expr py = kArm1 * cos(a1) + kArm2 * cos(a1 + a2 - Expr::pi()) + kArm3 * cos(a1 + a2 + a3);
  pb.add(make_geq(sqrt(sqr(x - px) + sqr(y - py)), Expr::constant(kHand)));
  return pb.build();
}

// Path end points; the start is lifted above the floor curve (see notes).
constexpr double kStartX = 0.0, kStartY = 0.5, kEndX = 10.0, kEndY = 1.0;
constexpr double kObstacleX = 4.8, kObstacleY = 1.0, kObstacleRadius = 1.0;

Problem build_pointpath() {
  ProblemBuilder pb;
  Expr p1x = pb.var("p1x", Interval(-10, 10));
  Expr p1y = pb.var("p1y", Interval(-10, 10));
  Expr p2x = pb.var("p2x", Interval(-10, 10));
  Expr p2y = pb.var("p2y", Interval(-10, 10));
  Expr t = pb.forall("t", Interval(0, 1));
  Expr b0 = pow(1.0 - t, 3);
  Expr b1 = 3.0 * t * sqr(1.0 - t);
  Expr b2 = 3.0 * sqr(t) * (1.0 - t);
  Expr b3 = pow(t, 3);
  Expr x = kStartX * b0 + p1x * b1 + p2x * b2 + kEndX * b3;
  Expr y = kStartY * b0 + p1y * b1 + p2y * b2 + kEndY * b3;
  pb.add(make_geq(sqr(x - kObstacleX) + sqr(y - kObstacleY), Expr::constant(kObstacleRadius * kObstacleRadius)));
  pb.add(make_geq(y, sin(x)));
  return pb.build();
}

// Camera and scene. The camera pan is fixed to 0, so the rotation reduces to
// the tilt terms.
constexpr double kCameraZ = 2.0, kFocal = 0.8, kMinCameraDistance = 10.5;

struct Sphere {
  double x;                 // x_s
  double y0, y_rate;        // y_s = y0 + y_rate t
  double z0, z_amp, z_rate; // z_s = z0 + z_amp trig(z_rate t)
  bool z_cos;               // trig = cos (else sin)
  double r;
};

struct Frame {
  double x1, x2, y1, y2;
};

const Sphere kSphere1{-10.0, -1.0, 0.1, 2.0, 0.5, 0.3, false, 0.5};
const Frame kFrame1{-0.1, 0.1, -0.1, 0.1};
const Sphere kSphere2{-12.0, 1.0, -0.1, 2.0, 0.3, 0.2, true, 0.4};
const Frame kFrame2{-0.15, 0.05, -0.1, 0.1};

struct SceneExprs {
  Expr xs, ys, zs;
};

SceneExprs sphere_path(const Sphere& s, const Expr& t) {
  Expr trig = s.z_cos ? cos(s.z_rate * t) : sin(s.z_rate * t);
  return {Expr::constant(s.x), s.y0 + s.y_rate * t, s.z0 + s.z_amp * trig};
}

void add_framing(ProblemBuilder& pb, const Sphere& s, const Frame& f, const Expr& xc, const Expr& yc, const Expr& tilt,
                 const Expr& t) {
  SceneExprs p = sphere_path(s, t);
  Expr dx = p.xs - xc, dy = p.ys - yc, dz = p.zs - kCameraZ;
  Expr sx = dy;
  Expr sy = -dx * sin(tilt) + dz * cos(tilt);
  Expr sz = -dx * cos(tilt) + dz * sin(tilt);
  Expr depth = sz / kFocal;
  pb.add(make_leq(Expr::constant(f.x1), (sx + s.r) / depth));
  pb.add(make_geq(Expr::constant(f.x2), (sx - s.r) / depth));
  pb.add(make_leq(Expr::constant(f.y1), (sy + s.r) / depth));
  pb.add(make_geq(Expr::constant(f.y2), (sy - s.r) / depth));
}

Problem build_projection(int n_constraints) {
  ProblemBuilder pb;
  Expr xc = pb.var("xc", Interval(-3, 3));
  Expr yc = pb.var("yc", Interval(-3, 3));
  Expr tilt = pb.var("phic", Interval(-0.5, 0.5));
  Expr t = pb.forall("t", Interval(0, 20));
  add_framing(pb, kSphere1, kFrame1, xc, yc, tilt, t);
  if (n_constraints == 5) {
    SceneExprs p = sphere_path(kSphere1, t);
    pb.add(make_geq(sqr(p.xs - xc) + sqr(p.ys - yc) + sqr(p.zs - kCameraZ),
                    Expr::constant(kMinCameraDistance * kMinCameraDistance)));
  }
  if (n_constraints == 8) add_framing(pb, kSphere2, kFrame2, xc, yc, tilt, t);
  return pb.build();
}

Problem build_garloffgraf1() {
  ProblemBuilder pb;
  Expr v = pb.var("v", Interval(2, 10));
  Expr w = pb.var("w", Interval(40, 50));
  pb.add(make_geq(-5.0 * sqr(v) - 13.0 * v + v * w - w, Expr::constant(0.0)));
  return pb.build();
}

Problem build_garloffgraf2() {
  ProblemBuilder pb;
  Expr a = pb.var("A", Interval(100, 120));
  Expr b = pb.var("B", Interval(0, 2));
  Expr d = pb.var("D", Interval(10, 20));
  Expr zero = Expr::constant(0.0);
  pb.add(make_geq(a, zero));
  pb.add(make_geq(b, zero));
  pb.add(make_geq(d, zero));
  pb.add(make_geq(a * sqr(b) - sqr(d), zero));
  pb.add(make_geq(-a * b + a + sqr(d) - d - 1.0, zero));
  pb.add(make_geq(a * b - a * d - 2.0 * a + pow(d, 3) + 4.0 * sqr(d) + 4.0 * d, zero));
  pb.add(make_geq(a * pow(b, 3) - a * sqr(b) * d - 4.0 * a * sqr(b) + 2.0 * a * b * d + 4.0 * a * b +
                      2.0 * b * pow(d, 3) + 5.0 * b * sqr(d) + 2.0 * b * d - pow(d, 3) - 4.0 * sqr(d) - 4.0 * d,
                  zero));
  pb.add(make_geq(a * b - 2.0 * a - b * sqr(d) - 4.0 * b * d - 4.0 * b - 2.0 * sqr(d) + 3.0 * d - 2.0, zero));
  return pb.build();
}

// ---------------------------------------------------------------------------
// Oracle formulas, written independently of the expression layer. Every
// residual must be >= 0 at a solution.

using detail::MpInterval;

template <class T>
T konst(double x) {
  if constexpr (std::is_same_v<T, Interval>) {
    return x == std::nearbyint(x) ? Interval(x) : Interval(prev_float(x), next_float(x));
  } else if constexpr (std::is_same_v<T, MpInterval>) {
    return MpInterval::decimal(x);
  } else {
    return T(x);
  }
}

template <class T>
T pi_value() {
  if constexpr (std::is_same_v<T, Interval>) return Interval::pi();
  else if constexpr (std::is_same_v<T, MpInterval>) return MpInterval::pi();
  else return T(std::numbers::pi);
}

inline double sq(double x) { return x * x; }
inline Interval sq(const Interval& x) { return sqr(x); }
inline mpq_class sq(const mpq_class& x) { return x * x; }

using std::cos;
using std::sin;
using std::sqrt;

template <class T>
void parabola_residuals(std::span<const T> p, const T& t, std::vector<T>& out) {
  out.push_back(p[0] * sq(t) + p[1] * t + p[2] - (konst<T>(2) * t - konst<T>(1)));
}

template <class T>
void circle_residuals(std::size_t count, std::span<const T> p, const T& t, std::vector<T>& out) {
  for (std::size_t i = 0; i < count; ++i) {
    T arg = t + konst<T>(kCircles[i].phase_over_pi) * pi_value<T>();
    T r = konst<T>(kCircles[i].radius);
    out.push_back(sqrt(sq(r * sin(arg) - p[0]) + sq(r * cos(arg) - p[1])) - konst<T>(kCircleClearance));
  }
}

template <class T>
std::array<T, 3> orbit_point(const T& d, const T& angle, const T& theta, const T& psi) {
  T s = sin(angle), c = cos(angle);
  return {d * cos(theta) * s, d * (sin(psi) * sin(theta) * s + cos(psi) * c),
          d * (sin(psi) * c - cos(psi) * sin(theta) * s)};
}

template <class T>
void satellite_residuals(std::span<const T> p, const T& t, std::vector<T>& out) {
  auto mine = orbit_point(konst<T>(kNewOrbitRadius), konst<T>(kNewOrbitRate) * t + p[1], p[0], p[2]);
  for (const auto& o : kOrbits) {
    auto other = orbit_point(konst<T>(o.d), konst<T>(o.omega) * t + konst<T>(o.phi), konst<T>(o.theta), konst<T>(o.psi));
    out.push_back(sqrt(sq(other[0] - mine[0]) + sq(other[1] - mine[1]) + sq(other[2] - mine[2])) -
                  konst<T>(kSatelliteClearance));
  }
}

template <class T>
void robot_residuals(std::span<const T> p, const T& t, std::vector<T>& out) {
  T a1 = t + pi_value<T>() / konst<T>(4);
  T a12 = a1 + konst<T>(2) * t - konst<T>(1);
  T a123 = a12 + konst<T>(0.2) * t + konst<T>(0.1);
  T px = konst<T>(kArm1) * sin(a1) + konst<T>(kArm2) * sin(a12 - pi_value<T>()) + konst<T>(kArm3) * sin(a123);
  T py = konst<T>(kArm1) * cos(a1) + konst<T>(kArm2) * cos(a12 - pi_value<T>()) + konst<T>(kArm3) * cos(a123);
  out.push_back(sqrt(sq(p[0] - px) + sq(p[1] - py)) - konst<T>(kHand));
}

template <class T>
void pointpath_residuals(std::span<const T> p, const T& t, std::vector<T>& out) {
  T u = konst<T>(1) - t;
  T b0 = u * u * u, b1 = konst<T>(3) * t * u * u, b2 = konst<T>(3) * t * t * u, b3 = t * t * t;
  if constexpr (std::is_same_v<T, Interval>) {
    // Bernstein weights are nonnegative on [0,1]; intersecting keeps them tight.
    b0 = intersect(pow_int(u, 3), Interval(0, 1));
    b1 = intersect(konst<T>(3) * t * sqr(u), Interval(0, 1));
    b2 = intersect(konst<T>(3) * sqr(t) * u, Interval(0, 1));
    b3 = intersect(pow_int(t, 3), Interval(0, 1));
  }
  T x = konst<T>(kStartX) * b0 + p[0] * b1 + p[2] * b2 + konst<T>(kEndX) * b3;
  T y = konst<T>(kStartY) * b0 + p[1] * b1 + p[3] * b2 + konst<T>(kEndY) * b3;
  out.push_back(sq(x - konst<T>(kObstacleX)) + sq(y - konst<T>(kObstacleY)) - konst<T>(kObstacleRadius * kObstacleRadius));
  out.push_back(y - sin(x));
}

template <class T>
void framing_residuals(const Sphere& s, const Frame& f, std::span<const T> p, const T& t, std::vector<T>& out) {
  T xs = konst<T>(s.x), ys = konst<T>(s.y0) + konst<T>(s.y_rate) * t;
  T zs = konst<T>(s.z0) + konst<T>(s.z_amp) * (s.z_cos ? cos(konst<T>(s.z_rate) * t) : sin(konst<T>(s.z_rate) * t));
  T dx = xs - p[0], dy = ys - p[1], dz = zs - konst<T>(kCameraZ);
  T sy = dz * cos(p[2]) - dx * sin(p[2]);
  T sz = dz * sin(p[2]) - dx * cos(p[2]);
  T scale = konst<T>(kFocal) / sz;
  T r = konst<T>(s.r);
  out.push_back((dy + r) * scale - konst<T>(f.x1));
  out.push_back(konst<T>(f.x2) - (dy - r) * scale);
  out.push_back((sy + r) * scale - konst<T>(f.y1));
  out.push_back(konst<T>(f.y2) - (sy - r) * scale);
}

template <class T>
void projection_residuals(int n, std::span<const T> p, const T& t, std::vector<T>& out) {
  framing_residuals(kSphere1, kFrame1, p, t, out);
  if (n == 5) {
    T ys = konst<T>(kSphere1.y0) + konst<T>(kSphere1.y_rate) * t;
    T zs = konst<T>(kSphere1.z0) + konst<T>(kSphere1.z_amp) * sin(konst<T>(kSphere1.z_rate) * t);
    out.push_back(sq(konst<T>(kSphere1.x) - p[0]) + sq(ys - p[1]) + sq(zs - konst<T>(kCameraZ)) -
                  konst<T>(kMinCameraDistance) * konst<T>(kMinCameraDistance));
  }
  if (n == 8) framing_residuals(kSphere2, kFrame2, p, t, out);
}

template <class T>
void garloffgraf1_residuals(std::span<const T> p, std::vector<T>& out) {
  const T& v = p[0];
  const T& w = p[1];
  out.push_back(v * w - w - T(5) * v * v - T(13) * v);
}

template <class T>
void garloffgraf2_residuals(std::span<const T> p, std::vector<T>& out) {
  const T& a = p[0];
  const T& b = p[1];
  const T& d = p[2];
  T b2 = b * b, d2 = d * d, d3 = d2 * d;
  out.push_back(a);
  out.push_back(b);
  out.push_back(d);
  out.push_back(a * b2 - d2);
  out.push_back(a + d2 - a * b - d - T(1));
  out.push_back(a * b - a * d - T(2) * a + d3 + T(4) * d2 + T(4) * d);
  out.push_back(a * b2 * b - a * b2 * d - T(4) * a * b2 + T(2) * a * b * d + T(4) * a * b + T(2) * b * d3 +
                T(5) * b * d2 + T(2) * b * d - d3 - T(4) * d2 - T(4) * d);
  out.push_back(a * b - T(2) * a - b * d2 - T(4) * b * d - T(4) * b - T(2) * d2 + T(3) * d - T(2));
}

// ---------------------------------------------------------------------------
// Registry.

using Residuals = std::function<void(std::span<const Interval>, const Interval&, std::vector<Interval>&)>;
using MpResiduals = std::function<void(std::span<const MpInterval>, const MpInterval&, std::vector<MpInterval>&)>;

struct Entry {
  std::function<Problem()> build;
  Residuals residuals;  // interval residuals; t ignored when unquantified
  bool reconstructed = false;
  std::string note;
  MpResiduals mp = {};  // same formulas in extended precision, grid-certified problems only
};

const std::map<std::string, Entry>& registry() {
  static const std::map<std::string, Entry> r = [] {
    std::map<std::string, Entry> m;
    m["parabola"] = {build_parabola, [](auto p, auto& t, auto& o) { parabola_residuals<Interval>(p, t, o); }, false, ""};
    for (std::size_t k = 1; k <= 3; ++k) {
      m["circle" + std::to_string(k)] = {
          [k] { return build_circle(k); },
          [k](auto p, auto& t, auto& o) { circle_residuals<Interval>(k, p, t, o); }, k > 1,
          k > 1 ? "additional circling paths use repo-chosen radii and phases" : ""};
    }
    m["satellite"] = {build_satellite, [](auto p, auto& t, auto& o) { satellite_residuals<Interval>(p, t, o); }, true,
                      "new orbit radius, rate and clearance are repo-chosen",
                      [](auto p, auto& t, auto& o) { satellite_residuals<MpInterval>(p, t, o); }};
    m["robot"] = {build_robot, [](auto p, auto& t, auto& o) { robot_residuals<Interval>(p, t, o); }, false, "",
                  [](auto p, auto& t, auto& o) { robot_residuals<MpInterval>(p, t, o); }};
    m["pointpath"] = {build_pointpath, [](auto p, auto& t, auto& o) { pointpath_residuals<Interval>(p, t, o); }, true,
                      "path end points are repo-chosen",
                      [](auto p, auto& t, auto& o) { pointpath_residuals<MpInterval>(p, t, o); }};
    for (int n : {4, 5, 8}) {
      m["projection" + std::to_string(n)] = {
          [n] { return build_projection(n); },
          [n](auto p, auto& t, auto& o) { projection_residuals<Interval>(n, p, t, o); }, true,
          "sphere motion and frame corners are repo-chosen",
          [n](auto p, auto& t, auto& o) { projection_residuals<MpInterval>(n, p, t, o); }};
    }
    m["garloffgraf1"] = {build_garloffgraf1, [](auto p, auto&, auto& o) { garloffgraf1_residuals<Interval>(p, o); },
                         false, ""};
    m["garloffgraf2"] = {build_garloffgraf2, [](auto p, auto&, auto& o) { garloffgraf2_residuals<Interval>(p, o); },
                         false, ""};
    return m;
  }();
  return r;
}

const Entry& lookup(const std::string& name) {
  auto it = registry().find(name);
  if (it == registry().end()) throw std::invalid_argument("unknown benchmark '" + name + "'");
  return it->second;
}

// All residuals nonnegative / some certainly negative / neither.
Verdict classify(const std::vector<Interval>& res) {
  bool all_ok = true;
  for (const auto& r : res) {
    if (r.is_empty() || r.hi() < 0.0) return Verdict::nonsolution;
    if (r.lo() < 0.0) all_ok = false;
  }
  return all_ok ? Verdict::solution : Verdict::undecided;
}

// Certifies the free box `p` over the quantifier cell; refines the cell
// while undecided.
Verdict certify_cell(const Residuals& f, std::span<const Interval> p, const Interval& cell, int depth,
                     std::vector<Interval>& scratch) {
  scratch.clear();
  f(p, cell, scratch);
  Verdict v = classify(scratch);
  if (v != Verdict::undecided || depth == 0 || cell.is_canonical()) return v;
  double m = 0.5 * cell.lo() + 0.5 * cell.hi();
  Verdict left = certify_cell(f, p, Interval(cell.lo(), m), depth - 1, scratch);
  if (left == Verdict::nonsolution) return left;
  Verdict right = certify_cell(f, p, Interval(m, cell.hi()), depth - 1, scratch);
  if (right == Verdict::nonsolution) return right;
  return left == Verdict::solution && right == Verdict::solution ? Verdict::solution : Verdict::undecided;
}

constexpr int kTopCells = 64;
constexpr int kExtraDepth = 8;

// Solution: every t certified. Nonsolution: some cell of t refutes every
// point of p. Undecided otherwise.
Verdict certify_forall(const Residuals& f, std::span<const Interval> p, const Interval& j, int grid_cells) {
  int top = std::min(grid_cells, kTopCells);
  int depth = static_cast<int>(std::round(std::log2(static_cast<double>(grid_cells) / top))) + kExtraDepth;
  std::vector<Interval> scratch;
  bool all = true;
  auto cut = [&](int k) {
    if (k == 0) return j.lo();
    if (k == top) return j.hi();
    return j.lo() + (j.hi() - j.lo()) * (static_cast<double>(k) / top);
  };
  for (int k = 0; k < top; ++k) {
    Verdict v = certify_cell(f, p, Interval(cut(k), cut(k + 1)), depth, scratch);
    if (v == Verdict::nonsolution) return v;
    all = all && v == Verdict::solution;
  }
  return all ? Verdict::solution : Verdict::undecided;
}

Verdict classify(const std::vector<MpInterval>& res) {
  bool all_ok = true;
  for (const auto& r : res) {
    if (r.sign_hi() < 0) return Verdict::nonsolution;
    if (r.sign_lo() < 0) all_ok = false;
  }
  return all_ok ? Verdict::solution : Verdict::undecided;
}

// Extended-precision retry for points the double grid leaves undecided.
// Refinement is deeper and bounded by a total evaluation budget.
constexpr int kMpDepth = 96;
constexpr long kMpBudget = 200'000;

Verdict certify_cell(const MpResiduals& f, std::span<const MpInterval> p, const MpInterval& cell, int depth,
                     std::vector<MpInterval>& scratch, long& budget) {
  if (--budget < 0) return Verdict::undecided;
  scratch.clear();
  f(p, cell, scratch);
  Verdict v = classify(scratch);
  if (v != Verdict::undecided || depth == 0) return v;
  auto [lo_half, hi_half] = cell.bisect();
  Verdict left = certify_cell(f, p, lo_half, depth - 1, scratch, budget);
  if (left == Verdict::nonsolution) return left;
  Verdict right = certify_cell(f, p, hi_half, depth - 1, scratch, budget);
  if (right == Verdict::nonsolution) return right;
  return left == Verdict::solution && right == Verdict::solution ? Verdict::solution : Verdict::undecided;
}

Verdict certify_forall(const MpResiduals& f, std::span<const double> point, const Interval& j) {
  std::vector<MpInterval> p;
  for (double x : point) p.emplace_back(x);
  std::vector<MpInterval> scratch;
  long budget = kMpBudget;
  bool all = true;
  auto cut = [&](int k) {
    if (k == 0) return j.lo();
    if (k == kTopCells) return j.hi();
    return j.lo() + (j.hi() - j.lo()) * (static_cast<double>(k) / kTopCells);
  };
  for (int k = 0; k < kTopCells; ++k) {
    Verdict v = certify_cell(f, p, MpInterval::hull(cut(k), cut(k + 1)), kMpDepth, scratch, budget);
    if (v == Verdict::nonsolution) return v;
    all = all && v == Verdict::solution;
  }
  return all ? Verdict::solution : Verdict::undecided;
}

Verdict exact_parabola(std::span<const double> p) {
  // min over t in [0,2] of a t^2 + (b-2) t + (c+1)
  mpq_class a(p[0]), b(p[1]), c(p[2]);
  mpq_class lin = b - 2, cst = c + 1;
  mpq_class at_end = 4 * a + 2 * lin + cst;
  mpq_class best = cst < at_end ? cst : at_end;
  if (a > 0) {
    mpq_class tv = -lin / (2 * a);
    if (tv >= 0 && tv <= 2) {
      mpq_class at_vertex = cst - lin * lin / (4 * a);
      if (at_vertex < best) best = at_vertex;
    }
  }
  return best >= 0 ? Verdict::solution : Verdict::nonsolution;
}

template <void (*F)(std::span<const mpq_class>, std::vector<mpq_class>&)>
Verdict exact_polynomial(std::span<const double> p) {
  std::vector<mpq_class> q(p.begin(), p.end());
  std::vector<mpq_class> res;
  F(q, res);
  for (const auto& r : res)
    if (r < 0) return Verdict::nonsolution;
  return Verdict::solution;
}

// The quantifier sweeps a full period, so each moving point traces its whole
// circle and the clearance reduces to | |p| - r | >= clearance, decided on
// squared norms. Also used for boxes, through the exact range of |p|^2.
std::optional<std::size_t> circle_count(const std::string& name) {
  for (std::size_t k = 1; k <= kCircles.size(); ++k)
    if (name == "circle" + std::to_string(k)) return k;
  return std::nullopt;
}

mpq_class sq_range_lo(double lo, double hi) {
  if (lo <= 0.0 && hi >= 0.0) return 0;
  mpq_class m = std::min(std::fabs(lo), std::fabs(hi));
  return m * m;
}

mpq_class sq_range_hi(double lo, double hi) {
  mpq_class m = std::max(std::fabs(lo), std::fabs(hi));
  return m * m;
}

Verdict exact_circles(std::size_t count, const Interval& x, const Interval& y) {
  const mpq_class lo = sq_range_lo(x.lo(), x.hi()) + sq_range_lo(y.lo(), y.hi());
  const mpq_class hi = sq_range_hi(x.lo(), x.hi()) + sq_range_hi(y.lo(), y.hi());
  bool all = true;
  for (std::size_t i = 0; i < count; ++i) {
    const mpq_class r(kCircles[i].radius), c(kCircleClearance);
    const mpq_class inner = (r - c) * (r - c), outer = (r + c) * (r + c);
    if (lo > inner && hi < outer) return Verdict::nonsolution;
    if (!(lo >= outer || hi <= inner)) all = false;
  }
  return all ? Verdict::solution : Verdict::undecided;
}

}  // namespace

const std::vector<std::string>& benchmark_names() {
  static const std::vector<std::string> names = {"parabola",    "circle1",     "circle2",      "circle3",
                                                 "satellite",   "robot",       "pointpath",    "projection4",
                                                 "projection5", "projection8", "garloffgraf1", "garloffgraf2"};
  return names;
}

Benchmark build_benchmark(const std::string& name) {
  const Entry& e = lookup(name);
  return {name, e.build(), e.reconstructed, e.note};
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::solution: return "SOLUTION";
    case Verdict::nonsolution: return "NONSOLUTION";
    case Verdict::undecided: return "UNDECIDED";
  }
  return "UNDECIDED";
}

Verdict oracle_eval(const std::string& name, std::span<const double> point, int grid_cells) {
  const Entry& e = lookup(name);
  static std::map<std::string, Problem> problems;
  static std::mutex lock;
  const Problem* prob;
  {
    std::lock_guard<std::mutex> g(lock);
    auto it = problems.find(name);
    if (it == problems.end()) it = problems.emplace(name, e.build()).first;
    prob = &it->second;
  }
  const std::size_t n_free = prob->dimension() - (prob->quantifier ? 1 : 0);
  if (point.size() != n_free) throw std::invalid_argument("oracle_eval: point has the wrong dimension");
  for (std::size_t i = 0; i < n_free; ++i)
    if (!prob->initial_box[i].contains(point[i])) throw std::invalid_argument("oracle_eval: point outside the initial box");

  if (name == "parabola") return exact_parabola(point);
  if (name == "garloffgraf1") return exact_polynomial<garloffgraf1_residuals<mpq_class>>(point);
  if (name == "garloffgraf2") return exact_polynomial<garloffgraf2_residuals<mpq_class>>(point);
  if (auto k = circle_count(name)) return exact_circles(*k, Interval(point[0]), Interval(point[1]));

  std::vector<Interval> p;
  p.reserve(point.size());
  for (double x : point) p.emplace_back(x);
  Verdict v = certify_forall(e.residuals, p, prob->quantifier->domain, grid_cells);
  if (v == Verdict::undecided && e.mp) v = certify_forall(e.mp, point, prob->quantifier->domain);
  return v;
}

Verdict oracle_box(const std::string& name, const Box& box, int max_depth) {
  const Entry& e = lookup(name);
  Problem prob = e.build();
  if (box.size() != prob.dimension()) throw std::invalid_argument("oracle_box: box has the wrong dimension");
  const std::size_t n_free = prob.dimension() - (prob.quantifier ? 1 : 0);
  std::vector<Interval> free(box.domains().begin(), box.domains().begin() + static_cast<std::ptrdiff_t>(n_free));
  if (auto k = circle_count(name)) return exact_circles(*k, free[0], free[1]);

  std::function<Verdict(std::vector<Interval>&, int)> rec = [&](std::vector<Interval>& p, int depth) -> Verdict {
    Verdict v;
    if (prob.quantifier) {
      v = certify_forall(e.residuals, p, prob.quantifier->domain, 64);
    } else {
      std::vector<Interval> res;
      e.residuals(p, Interval(0.0), res);
      v = classify(res);
    }
    if (v != Verdict::undecided || depth == 0) return v;
    std::size_t dim = 0;
    for (std::size_t i = 1; i < p.size(); ++i)
      if (p[i].width() > p[dim].width()) dim = i;
    if (p[dim].is_canonical()) return v;
    Interval whole = p[dim];
    double m = whole.mid();
    p[dim] = Interval(whole.lo(), m);
    Verdict left = rec(p, depth - 1);
    Verdict right = Verdict::undecided;
    if (left != Verdict::undecided) {
      p[dim] = Interval(m, whole.hi());
      right = rec(p, depth - 1);
    }
    p[dim] = whole;
    return left == right ? left : Verdict::undecided;
  };
  return rec(free, max_depth);
}

double oracle_area(const std::string& name, std::optional<Box> region) {
  if (name != "garloffgraf1") throw std::invalid_argument("oracle_area is only defined for garloffgraf1");
  Box r = region ? *region : build_garloffgraf1().initial_box;
  const double v0 = r[0].lo(), v1 = r[0].hi(), w0 = r[1].lo(), w1 = r[1].hi();
  if (!(v1 > v0) || !(w1 > w0)) return 0.0;
  constexpr int kCells = 1'000'000;
  const double h = (v1 - v0) / kCells;
  double area = 0.0;
  for (int i = 0; i < kCells; ++i) {
    double v = v0 + (i + 0.5) * h;
    // w (v - 1) >= 5 v^2 + 13 v, with v > 1 on the domain
    double bound = (5.0 * v * v + 13.0 * v) / (v - 1.0);
    area += std::max(0.0, w1 - std::max(w0, bound));
  }
  return area * h;
}

double garloffgraf1_area_closed_form() {
  // The boundary w = 5v + 18 + 18/(v-1) stays above 40 on [2,10] and meets
  // 50 at v* = (37 + sqrt(369)) / 10.
  const double vs = (37.0 + std::sqrt(369.0)) / 10.0;
  return 32.0 * (vs - 2.0) - 2.5 * (vs * vs - 4.0) - 18.0 * std::log(vs - 1.0);
}

}  // namespace innerbox
