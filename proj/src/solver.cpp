#include "innerbox/solver.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <chrono>
#include <deque>
#include <numeric>
#include <stdexcept>

#include "innerbox/contractors.hpp"

namespace innerbox {

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::ipabc: return "ipabc";
    case Algorithm::jla: return "jla";
    case Algorithm::sivia: return "sivia";
  }
  return "ipabc";
}

Algorithm parse_algorithm(const std::string& s) {
  if (s == "ipabc") return Algorithm::ipabc;
  if (s == "jla") return Algorithm::jla;
  if (s == "sivia") return Algorithm::sivia;
  throw std::invalid_argument("unknown algorithm '" + s + "'");
}

namespace {

using Clock = std::chrono::steady_clock;

// Shared bookkeeping for all pavers: output sets, counters, clock, stop
// conditions and the queue discipline.
template <class Task>
class Engine {
 public:
  Engine(const SolverConfig& cfg, std::optional<std::size_t> dropped)
      : cfg_(cfg), dropped_(dropped), start_(Clock::now()) {
    cfg_.validate();
  }

  void push(Task t) { work_.push_back(std::move(t)); }

  // Pops the next task; nullopt when done or stopped. Remaining boxes
  // are moved to undecided on a stop.
  template <class BoxOf>
  std::optional<Task> pop(BoxOf box_of) {
    if (!work_.empty() && (stopped_ || elapsed() > cfg_.timeout_s)) {
      if (!stopped_) result_.stats.timed_out = true;
      for (auto& t : work_) undecided(box_of(t));
      work_.clear();
    }
    if (work_.empty()) return std::nullopt;
    Task t;
    if (cfg_.schedule == Schedule::depth_first) {
      t = std::move(work_.back());
      work_.pop_back();
    } else {
      t = std::move(work_.front());
      work_.pop_front();
    }
    return t;
  }

  SplitPolicy split_policy() const {
    return cfg_.schedule == Schedule::depth_first ? SplitPolicy::largest_first : SplitPolicy::round_robin;
  }

  bool small_enough(const Box& b) const { return b.max_width(dropped_) <= cfg_.epsilon; }

  void inner(Box b) {
    if (result_.stats.t_first_s < 0.0) result_.stats.t_first_s = elapsed();
    result_.paving.inner.push_back(std::move(b));
    if (cfg_.first_only) {
      stopped_ = true;
      result_.stats.stopped_early = true;
    }
  }
  void outer(Box b) {
    ++result_.stats.n_outer;
    if (cfg_.store_outer) result_.paving.outer.push_back(std::move(b));
  }
  void outer(const BoxSet& bs) {
    for (const auto& b : bs) outer(b);
  }
  void undecided(Box b) { result_.paving.undecided.push_back(std::move(b)); }

  SolveStats& stats() { return result_.stats; }
  const SolverConfig& config() const { return cfg_; }

  SolveResult finish() {
    auto& s = result_.stats;
    s.n_inner = result_.paving.inner.size();
    s.n_undecided = result_.paving.undecided.size();
    s.inner_volume = inner_volume(result_.paving, dropped_);
    s.t_total_s = elapsed();
    if (s.t_first_s > s.t_total_s) s.t_first_s = s.t_total_s;
    return std::move(result_);
  }

 private:
  SolverConfig cfg_;
  std::optional<std::size_t> dropped_;
  Clock::time_point start_;
  std::deque<Task> work_;
  SolveResult result_;
  bool stopped_ = false;

  double elapsed() const { return std::chrono::duration<double>(Clock::now() - start_).count(); }
};

// Splits b along the free variables; undecided when nothing can be split.
template <class Task, class Make>
void split_into(Engine<Task>& eng, const Box& b, std::optional<std::size_t> exclude, std::size_t& rotation,
                Make make_task) {
  auto dim = choose_split_dim(b, exclude, eng.split_policy(), rotation);
  if (!dim) {
    eng.undecided(b);
    return;
  }
  std::size_t next_rotation = (*dim + 1) % b.size();
  auto children = split_at(b, *dim, eng.config().split_arity);
  if (eng.config().schedule == Schedule::depth_first) std::reverse(children.begin(), children.end());
  for (auto& c : children) eng.push(make_task(std::move(c), next_rotation));
}

struct SiviaTask {
  Box box;
  std::size_t rotation = 0;
};

struct SliceTask {
  Box box;
  std::size_t slice = 0;
  std::size_t rotation = 0;
};

struct IpaTask {
  Box box;
  std::size_t constraint = 0;
  std::size_t rotation = 0;
};

std::vector<CompiledConstraint> compile_all(const std::vector<Constraint>& cs, std::size_t n) {
  std::vector<CompiledConstraint> out;
  out.reserve(cs.size());
  for (const auto& c : cs) out.emplace_back(c, n);
  return out;
}

SolveResult run_ipa(const std::vector<Constraint>& constraints, const Box& root, const std::optional<Quantifier>& quant,
                    const SolverConfig& cfg) {
  const std::optional<std::size_t> q = quant ? std::optional<std::size_t>(quant->index) : std::nullopt;
  if (q && root[*q] != quant->domain) throw std::invalid_argument("the quantified slot must hold the full domain");
  Engine<IpaTask> eng(cfg, q);
  const std::size_t n = root.size();
  const std::size_t m = constraints.size();
  std::vector<CompiledConstraint> sat = compile_all(constraints, n);
  std::vector<OuterContractor> direct, negated;
  for (const auto& c : constraints) {
    direct.emplace_back(c, n, cfg.contractor, cfg.bc3_tolerance);
    negated.emplace_back(negate(c), n, cfg.contractor, cfg.bc3_tolerance);
  }
  auto& st = eng.stats();

  auto verdict = [&](std::size_t i, const Box& b) {
    ++st.globsat_calls;
    return sat[i].glob_sat(b.domains());
  };

  // A box certified for constraints [0, i) moves on to constraint i.
  auto advance = [&](Box b, std::size_t i, std::size_t rotation) {
    if (cfg.strategy == Strategy::global) {
      for (; i < m; ++i) {
        SatVerdict v = verdict(i, b);
        if (v == SatVerdict::no) {
          eng.outer(std::move(b));
          return;
        }
        if (v == SatVerdict::unknown) break;
      }
    }
    if (i >= m)
      eng.inner(std::move(b));
    else
      eng.push({std::move(b), i, rotation});
  };

  if (m == 0) {
    eng.inner(root);
    return eng.finish();
  }
  eng.push({root, 0, 0});
  auto box_of = [](const IpaTask& t) { return t.box; };
  while (auto task = eng.pop(box_of)) {
    const Box& b = task->box;
    const std::size_t i = task->constraint;

    // Any later constraint refuted on the whole box settles it.
    bool refuted_later = false;
    for (std::size_t j = i + 1; j < m && !refuted_later; ++j) refuted_later = verdict(j, b) == SatVerdict::no;
    if (refuted_later) {
      eng.outer(b);
      continue;
    }

    if (cfg.strategy == Strategy::preparse && q) {
      const std::size_t k = static_cast<std::size_t>(cfg.preparse_samples);
      const Interval slot = b[*q];
      bool refuted = false;
      for (std::size_t s = 0; s < k && !refuted; ++s) {
        double t = slot.lo() + (static_cast<double>(s) + 0.5) * (slot.hi() - slot.lo()) / static_cast<double>(k);
        t = std::clamp(t, slot.lo(), slot.hi());
        refuted = verdict(i, replace_dom(b, *q, Interval(t))) == SatVerdict::no;
      }
      if (refuted) {
        eng.outer(b);
        continue;
      }
    }

    Box contracted = b;
    if (cfg.strategy == Strategy::simple) {
      SatVerdict v = verdict(i, b);
      if (v == SatVerdict::no) {
        eng.outer(b);
        continue;
      }
      if (v == SatVerdict::yes) {
        advance(q ? replace_dom(b, *q, quant->domain) : b, i + 1, task->rotation);
        continue;
      }
    } else {
      ++st.contractor_calls;
      if (q && direct[i].narrows_edge(b, *q)) {
        ++st.guard_hits;
        eng.outer(b);
        continue;
      }
      contracted = direct[i](b);
      if (contracted.is_empty()) {
        eng.outer(b);
        continue;
      }
      if (q && contracted[*q] != b[*q]) {
        ++st.guard_hits;
        eng.outer(b);
        continue;
      }
      if (contracted != b) eng.outer(box_diff(b, contracted));
    }

    ++st.contractor_calls;
    Box rest = negated[i](contracted);
    BoxSet inner_parts = q ? box_diff(replace_dom(contracted, *q, quant->domain),
                                      rest.is_empty() ? rest : replace_dom(rest, *q, quant->domain))
                           : box_diff(contracted, rest);
    for (auto& part : inner_parts) advance(std::move(part), i + 1, task->rotation);
    if (rest.is_empty()) continue;
    if (q) {
      // Every point of rest fails at a single witness value of the quantifier.
      const double t0 = rest[*q].mid();
      if (verdict(i, replace_dom(rest, *q, Interval(t0))) == SatVerdict::no) {
        eng.outer(rest);
        continue;
      }
    }
    if (eng.small_enough(rest)) {
      eng.undecided(rest);
      continue;
    }
    std::size_t rotation = task->rotation;
    split_into(eng, rest, q, rotation, [&](Box c, std::size_t r) { return IpaTask{std::move(c), i, r}; });
  }
  return eng.finish();
}

}  // namespace

SolveResult subpaving(const std::vector<Constraint>& constraints, const Box& b, const SolverConfig& cfg) {
  Engine<SiviaTask> eng(cfg, std::nullopt);
  auto sat = compile_all(constraints, b.size());
  auto& st = eng.stats();
  eng.push({b, 0});
  auto box_of = [](const SiviaTask& t) { return t.box; };
  while (auto task = eng.pop(box_of)) {
    bool all_true = true, refuted = false;
    for (const auto& c : sat) {
      ++st.globsat_calls;
      SatVerdict v = c.glob_sat(task->box.domains());
      if (v == SatVerdict::no) {
        refuted = true;
        break;
      }
      all_true = all_true && v == SatVerdict::yes;
    }
    if (refuted) {
      eng.outer(task->box);
    } else if (all_true) {
      eng.inner(task->box);
    } else if (eng.small_enough(task->box)) {
      eng.undecided(task->box);
    } else {
      std::size_t rotation = task->rotation;
      split_into(eng, task->box, std::nullopt, rotation,
                 [](Box c, std::size_t r) { return SiviaTask{std::move(c), r}; });
    }
  }
  return eng.finish();
}

SolveResult jla(const std::vector<Constraint>& constraints, const Box& b, const Quantifier& q, const SolverConfig& cfg) {
  Engine<SliceTask> eng(cfg, q.index);
  auto sat = compile_all(constraints, b.size());
  auto& st = eng.stats();
  const Interval j = q.domain;
  const auto n_slices = static_cast<std::size_t>(std::max(1.0, std::ceil(j.width() / cfg.omega)));
  auto cut = [&](std::size_t s) {
    if (s == 0) return j.lo();
    if (s == n_slices) return j.hi();
    return std::clamp(j.lo() + (j.hi() - j.lo()) * (static_cast<double>(s) / static_cast<double>(n_slices)), j.lo(), j.hi());
  };
  Box root = replace_dom(b, q.index, j);
  eng.push({root, 0, 0});
  auto box_of = [](const SliceTask& t) { return t.box; };
  std::vector<Interval> doms;
  while (auto task = eng.pop(box_of)) {
    // Slices before task->slice are certified. Children resume at the first
    // undetermined slice; the later ones are still scanned for a refutation.
    std::optional<std::size_t> resume;
    bool refuted = false;
    doms = task->box.domains();
    for (std::size_t k = task->slice; k < n_slices && !refuted; ++k) {
      doms[q.index] = Interval(cut(k), cut(k + 1));
      bool all_true = true;
      for (const auto& c : sat) {
        ++st.globsat_calls;
        SatVerdict v = c.glob_sat(doms);
        if (v == SatVerdict::no) {
          refuted = true;
          break;
        }
        all_true = all_true && v == SatVerdict::yes;
      }
      if (!all_true && !resume) resume = k;
    }
    const bool undetermined = resume.has_value();
    const std::size_t s = resume.value_or(n_slices);
    if (refuted) {
      eng.outer(task->box);
    } else if (!undetermined) {
      eng.inner(task->box);
    } else if (eng.small_enough(task->box)) {
      eng.undecided(task->box);
    } else {
      std::size_t rotation = task->rotation;
      split_into(eng, task->box, q.index, rotation,
                 [s](Box c, std::size_t r) { return SliceTask{std::move(c), s, r}; });
    }
  }
  return eng.finish();
}

SolveResult ico1(const Constraint& c, const Box& b, const SolverConfig& cfg) { return run_ipa({c}, b, std::nullopt, cfg); }

SolveResult ico2(const Constraint& c, const Box& b, const Quantifier& q, const SolverConfig& cfg) {
  return run_ipa({c}, b, q, cfg);
}

SolveResult ipa(const Problem& p, const SolverConfig& cfg) {
  return run_ipa(p.constraints, p.initial_box, p.quantifier, cfg);
}

SolveResult solve(const Problem& p, Algorithm algo, const SolverConfig& cfg) {
  switch (algo) {
    case Algorithm::ipabc: return ipa(p, cfg);
    case Algorithm::jla:
      if (!p.quantifier) throw std::invalid_argument("jla needs a quantified variable");
      return jla(p.constraints, p.initial_box, *p.quantifier, cfg);
    case Algorithm::sivia:
      if (p.quantifier) throw std::invalid_argument("sivia does not handle quantified variables");
      return subpaving(p.constraints, p.initial_box, cfg);
  }
  throw std::invalid_argument("unknown algorithm");
}

// ---------------------------------------------------------------------------
// Partition check.

namespace {

struct Flat {
  std::vector<double> lo, hi;  // one entry per kept dimension
};

bool interiors_meet(const Flat& a, const Flat& b) {
  for (std::size_t d = 0; d < a.lo.size(); ++d)
    if (!(a.lo[d] < b.hi[d] && b.lo[d] < a.hi[d])) return false;
  return true;
}

// Recursive cut on box coordinates; two boxes with meeting interiors both
// reach the side of the cut where they meet.
std::optional<std::pair<std::size_t, std::size_t>> find_overlap(const std::vector<Flat>& boxes,
                                                                 std::vector<std::size_t> ids, int depth) {
  const std::size_t dims = boxes.empty() ? 0 : boxes[0].lo.size();
  auto brute = [&]() -> std::optional<std::pair<std::size_t, std::size_t>> {
    for (std::size_t x = 0; x < ids.size(); ++x)
      for (std::size_t y = x + 1; y < ids.size(); ++y)
        if (interiors_meet(boxes[ids[x]], boxes[ids[y]])) return std::make_pair(ids[x], ids[y]);
    return std::nullopt;
  };
  if (ids.size() <= 24 || depth > 200 || dims == 0) return brute();
  for (std::size_t k = 0; k < dims; ++k) {
    std::size_t d = (static_cast<std::size_t>(depth) + k) % dims;
    std::vector<double> mids;
    mids.reserve(ids.size());
    for (auto i : ids) mids.push_back(0.5 * boxes[i].lo[d] + 0.5 * boxes[i].hi[d]);
    std::nth_element(mids.begin(), mids.begin() + static_cast<std::ptrdiff_t>(mids.size() / 2), mids.end());
    double cut = mids[mids.size() / 2];
    std::vector<std::size_t> left, right;
    for (auto i : ids) {
      if (boxes[i].lo[d] < cut) left.push_back(i);
      if (boxes[i].hi[d] > cut) right.push_back(i);
    }
    if (left.size() < ids.size() && right.size() < ids.size()) {
      if (auto hit = find_overlap(boxes, std::move(left), depth + 1)) return hit;
      return find_overlap(boxes, std::move(right), depth + 1);
    }
  }
  return brute();
}

}  // namespace

PartitionReport check_partition(const Paving& p, const Box& initial, std::optional<std::size_t> dropped) {
  PartitionReport rep;
  std::vector<std::size_t> dims;
  for (std::size_t d = 0; d < initial.size(); ++d)
    if ((!dropped || *dropped != d) && initial[d].width() > 0.0) dims.push_back(d);

  std::vector<Flat> flat;
  std::vector<const Box*> origin;
  for (const BoxSet* set : {&p.inner, &p.outer, &p.undecided}) {
    for (const auto& b : *set) {
      if (b.size() != initial.size()) {
        rep.inside = false;
        rep.detail = "dimension mismatch";
        return rep;
      }
      if (b.is_empty()) continue;
      Flat f;
      for (std::size_t d = 0; d < initial.size(); ++d) {
        if (dropped && *dropped == d) continue;
        if (!b[d].subset_of(initial[d])) {
          rep.inside = false;
          rep.detail = "box outside the initial box: " + to_string(b);
        }
      }
      for (auto d : dims) {
        f.lo.push_back(b[d].lo());
        f.hi.push_back(b[d].hi());
      }
      flat.push_back(std::move(f));
      origin.push_back(&b);
    }
  }

  std::vector<std::size_t> ids(flat.size());
  std::iota(ids.begin(), ids.end(), std::size_t{0});
  if (auto hit = find_overlap(flat, ids, 0)) {
    rep.disjoint = false;
    rep.detail = "overlapping interiors: " + to_string(*origin[hit->first]) + " and " + to_string(*origin[hit->second]);
  }

  mpq_class total = 0;
  for (const auto& f : flat) {
    mpq_class v = 1;
    for (std::size_t k = 0; k < f.lo.size(); ++k) v *= mpq_class(f.hi[k]) - mpq_class(f.lo[k]);
    total += v;
  }
  mpq_class expected = 1;
  for (auto d : dims) expected *= mpq_class(initial[d].hi()) - mpq_class(initial[d].lo());
  if (total != expected) {
    rep.covers = false;
    if (rep.detail.empty())
      rep.detail = "volume " + total.get_str() + " differs from " + expected.get_str();
  }
  return rep;
}

double inner_volume(const Paving& p, std::optional<std::size_t> dropped) {
  double v = 0.0;
  for (const auto& b : p.inner) {
    if (b.is_empty()) continue;
    double w = 1.0;
    for (std::size_t d = 0; d < b.size(); ++d)
      if (!dropped || *dropped != d) w *= b[d].hi() - b[d].lo();
    v += w;
  }
  return v;
}

}  // namespace innerbox
