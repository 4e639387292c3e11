#include "innerbox/box.hpp"

#include <algorithm>
#include <stdexcept>

namespace innerbox {

Box::Box(VarNames names, std::vector<Interval> domains)
    : Box(std::make_shared<const VarNames>(std::move(names)), std::move(domains)) {}

Box::Box(std::shared_ptr<const VarNames> names, std::vector<Interval> domains)
    : names_(std::move(names)), domains_(std::move(domains)) {
  if (!names_ || names_->size() != domains_.size())
    throw std::invalid_argument("Box: names and domains differ in length");
  for (std::size_t i = 0; i < names_->size(); ++i)
    for (std::size_t j = i + 1; j < names_->size(); ++j)
      if ((*names_)[i] == (*names_)[j]) throw std::invalid_argument("Box: duplicate variable " + (*names_)[i]);
}

std::optional<std::size_t> Box::find(const std::string& name) const {
  auto it = std::find(names_->begin(), names_->end(), name);
  if (it == names_->end()) return std::nullopt;
  return static_cast<std::size_t>(it - names_->begin());
}

std::size_t Box::index_of(const std::string& name) const {
  auto i = find(name);
  if (!i) throw std::out_of_range("unknown variable '" + name + "'");
  return *i;
}

bool Box::is_empty() const {
  return std::any_of(domains_.begin(), domains_.end(), [](const Interval& x) { return x.is_empty(); });
}

double Box::max_width(std::optional<std::size_t> exclude) const {
  double w = 0.0;
  for (std::size_t i = 0; i < domains_.size(); ++i)
    if (!exclude || *exclude != i) w = std::max(w, domains_[i].width());
  return w;
}

double Box::volume() const {
  if (is_empty()) return 0.0;
  double v = 1.0;
  for (const auto& d : domains_) v *= d.hi() - d.lo();
  return v;
}

bool Box::subset_of(const Box& other) const {
  if (size() != other.size()) throw std::invalid_argument("Box::subset_of: dimension mismatch");
  if (is_empty()) return true;
  for (std::size_t i = 0; i < size(); ++i)
    if (!domains_[i].subset_of(other.domains_[i])) return false;
  return true;
}

bool Box::interior_overlaps(const Box& other) const {
  if (size() != other.size()) throw std::invalid_argument("Box::interior_overlaps: dimension mismatch");
  for (std::size_t i = 0; i < size(); ++i)
    if (!domains_[i].interior_overlaps(other.domains_[i])) return false;
  return true;
}

bool operator==(const Box& a, const Box& b) {
  if (a.names() != b.names()) return false;
  return a.domains_ == b.domains_;
}

std::string to_string(const Box& b) {
  std::string s = "{";
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (i) s += ", ";
    s += b.names()[i] + ": " + to_string(b[i]);
  }
  return s + "}";
}

Box hull(const BoxSet& boxes) {
  if (boxes.empty()) throw std::invalid_argument("hull: empty box set");
  Box result = boxes.front();
  for (std::size_t k = 1; k < boxes.size(); ++k) {
    const Box& b = boxes[k];
    if (b.size() != result.size()) throw std::invalid_argument("hull: dimension mismatch");
    if (b.is_empty()) continue;
    if (result.is_empty()) {
      result = b;
      continue;
    }
    for (std::size_t i = 0; i < b.size(); ++i) result[i] = hull(result[i], b[i]);
  }
  return result;
}

Box intersect(const Box& a, const Box& b) {
  if (a.size() != b.size()) throw std::invalid_argument("intersect: dimension mismatch");
  Box r = a;
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = intersect(a[i], b[i]);
  return r;
}

BoxSet box_diff(const Box& outer, const Box& inner) {
  if (outer.size() != inner.size()) throw std::invalid_argument("box_diff: dimension mismatch");
  if (outer.is_empty()) return {};
  if (inner.is_empty()) return {outer};
  if (!inner.subset_of(outer)) throw std::invalid_argument("box_diff: subtrahend not inside the box");
  BoxSet out;
  Box rest = outer;
  for (std::size_t k = 0; k < outer.size(); ++k) {
    const Interval& dk = rest[k];
    const Interval& bk = inner[k];
    if (dk.lo() < bk.lo()) {
      Box slab = rest;
      slab[k] = Interval(dk.lo(), bk.lo());
      out.push_back(std::move(slab));
    }
    if (bk.hi() < dk.hi()) {
      Box slab = rest;
      slab[k] = Interval(bk.hi(), dk.hi());
      out.push_back(std::move(slab));
    }
    rest[k] = bk;
  }
  return out;
}

Box replace_dom(const Box& b, std::size_t index, const Interval& j) {
  if (index >= b.size()) throw std::out_of_range("replace_dom: index out of range");
  Box r = b;
  r[index] = j;
  return r;
}

Box replace_dom(const Box& b, const std::string& var, const Interval& j) {
  return replace_dom(b, b.index_of(var), j);
}

std::optional<std::size_t> choose_split_dim(const Box& b, std::optional<std::size_t> exclude,
                                            SplitPolicy policy, std::size_t start) {
  const std::size_t n = b.size();
  if (n == 0 || b.is_empty()) return std::nullopt;
  auto splittable = [&](std::size_t i) { return (!exclude || *exclude != i) && !b[i].is_canonical(); };
  if (policy == SplitPolicy::round_robin) {
    for (std::size_t s = 0; s < n; ++s) {
      std::size_t i = (start + s) % n;
      if (splittable(i)) return i;
    }
    return std::nullopt;
  }
  std::optional<std::size_t> best;
  double best_w = -1.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!splittable(i)) continue;
    double w = b[i].width();
    if (w > best_w) {
      best_w = w;
      best = i;
    }
  }
  return best;
}

std::vector<Box> split_at(const Box& b, std::size_t dim, int k) {
  if (k < 2) throw std::invalid_argument("split_at: k must be >= 2");
  const Interval& d = b[dim];
  std::vector<double> cuts{d.lo()};
  if (k == 2) {
    cuts.push_back(d.mid());
  } else {
    const double w = d.hi() - d.lo();
    for (int i = 1; i < k; ++i) cuts.push_back(std::clamp(d.lo() + w * i / k, d.lo(), d.hi()));
  }
  cuts.push_back(d.hi());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<Box> parts;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    Box p = b;
    p[dim] = Interval(cuts[i], cuts[i + 1]);
    parts.push_back(std::move(p));
  }
  return parts;
}

std::vector<Box> split(const Box& b, int k, std::optional<std::size_t> exclude, SplitPolicy policy,
                       std::size_t start) {
  auto dim = choose_split_dim(b, exclude, policy, start);
  if (!dim) throw std::domain_error("split: no splittable dimension");
  return split_at(b, *dim, k);
}

}  // namespace innerbox
