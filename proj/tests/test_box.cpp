#include <gtest/gtest.h>

#include "innerbox/box.hpp"
#include "support.hpp"

using namespace innerbox;
using innerbox::fuzz::Gen;

namespace {

Box box2(Interval x, Interval y) { return Box({"x", "y"}, {x, y}); }

}  // namespace

TEST(Box, Basics) {
  Box b = box2(Interval(0, 4), Interval(0, 2));
  EXPECT_EQ(b.size(), 2u);
  EXPECT_EQ(b.index_of("y"), 1u);
  EXPECT_THROW(b.index_of("z"), std::out_of_range);
  EXPECT_DOUBLE_EQ(b.volume(), 8.0);
  EXPECT_DOUBLE_EQ(b.max_width(), 4.0);
  EXPECT_DOUBLE_EQ(b.max_width(0), 2.0);
  EXPECT_FALSE(b.is_empty());
  EXPECT_TRUE(box2(Interval::empty(), Interval(0, 1)).is_empty());
  EXPECT_THROW(Box({"x", "x"}, {Interval(0), Interval(1)}), std::invalid_argument);
}

TEST(Box, HullAndIntersect) {
  EXPECT_EQ(hull({box2(Interval(0, 1), Interval(0, 1)), box2(Interval(2, 3), Interval(0, 1))}),
            box2(Interval(0, 3), Interval(0, 1)));
  EXPECT_TRUE(intersect(box2(Interval(0, 2), Interval(0, 2)), box2(Interval(1, 3), Interval(3, 4))).is_empty());
  Box a({"x"}, {Interval(0, 2)}), b({"x"}, {Interval(1, 3)});
  EXPECT_EQ(intersect(a, b), Box({"x"}, {Interval(1, 2)}));
  EXPECT_THROW(hull({a, box2(Interval(0), Interval(0))}), std::invalid_argument);
  EXPECT_THROW(hull(BoxSet{}), std::invalid_argument);
}

TEST(BoxDiff, SweepOrder) {
  BoxSet r = box_diff(box2(Interval(0, 4), Interval(0, 4)), box2(Interval(1, 2), Interval(1, 2)));
  BoxSet expected = {box2(Interval(0, 1), Interval(0, 4)), box2(Interval(2, 4), Interval(0, 4)),
                     box2(Interval(1, 2), Interval(0, 1)), box2(Interval(1, 2), Interval(2, 4))};
  EXPECT_EQ(r, expected);
}

TEST(BoxDiff, Degenerate) {
  Box b = box2(Interval(0, 1), Interval(0, 1));
  EXPECT_TRUE(box_diff(b, b).empty());
  Box d({"x"}, {Interval(0, 1)});
  Box inner({"x"}, {Interval(0, prev_float(1.0))});
  EXPECT_EQ(box_diff(d, inner), BoxSet{Box({"x"}, {Interval(prev_float(1.0), 1)})});
  EXPECT_EQ(box_diff(b, box2(Interval::empty(), Interval::empty())), BoxSet{b});
  EXPECT_THROW(box_diff(b, box2(Interval(0, 2), Interval(0, 1))), std::invalid_argument);
}

TEST(BoxDiff, PartitionProperty) {
  Gen g(5);
  VarNames names = {"a", "b", "c"};
  for (int i = 0; i < 2000; ++i) {
    Box d = g.box(names);
    std::vector<Interval> in;
    for (const auto& x : d.domains()) {
      double p = g.point_in(x), q = g.point_in(x);
      in.emplace_back(std::min(p, q), std::max(p, q));
    }
    Box b(names, in);
    BoxSet parts = box_diff(d, b);
    EXPECT_LE(parts.size(), 6u);
    double vol = b.volume();
    for (const auto& p : parts) {
      EXPECT_TRUE(p.subset_of(d));
      EXPECT_FALSE(p.interior_overlaps(b));
      vol += p.volume();
    }
    for (std::size_t x = 0; x < parts.size(); ++x)
      for (std::size_t y = x + 1; y < parts.size(); ++y) EXPECT_FALSE(parts[x].interior_overlaps(parts[y]));
    EXPECT_NEAR(vol, d.volume(), 1e-9 * (1 + d.volume()));
    // Random points of D lie in B or in a part.
    for (int k = 0; k < 20; ++k) {
      auto pt = g.point_in(d);
      auto inside = [&](const Box& bx) {
        for (std::size_t j = 0; j < pt.size(); ++j)
          if (!bx[j].contains(pt[j])) return false;
        return true;
      };
      bool covered = inside(b);
      for (const auto& p : parts) covered = covered || inside(p);
      EXPECT_TRUE(covered);
    }
  }
}

TEST(ReplaceDom, Examples) {
  Box b = box2(Interval(0, 1), Interval(0, 1));
  EXPECT_EQ(replace_dom(b, "y", Interval(5, 6)), box2(Interval(0, 1), Interval(5, 6)));
  EXPECT_EQ(replace_dom(b, "x", b[0]), b);
  Box e = box2(Interval::empty(), Interval(0, 1));
  Box r = replace_dom(e, "y", Interval(0, 1));
  EXPECT_EQ(r[1], Interval(0, 1));
  EXPECT_TRUE(r.is_empty());
  EXPECT_THROW(replace_dom(b, "z", Interval(0)), std::out_of_range);
}

TEST(Split, Examples) {
  Box b = box2(Interval(0, 4), Interval(0, 2));
  EXPECT_EQ(split(b), (std::vector<Box>{box2(Interval(0, 2), Interval(0, 2)), box2(Interval(2, 4), Interval(0, 2))}));
  EXPECT_EQ(split(b, 2, 0), (std::vector<Box>{box2(Interval(0, 4), Interval(0, 1)), box2(Interval(0, 4), Interval(1, 2))}));
  Box atomic = box2(Interval(1), Interval(2, next_float(2)));
  EXPECT_THROW(split(atomic), std::domain_error);
}

TEST(Split, RoundRobinRotates) {
  Box b = box2(Interval(0, 4), Interval(0, 2));
  EXPECT_EQ(*choose_split_dim(b, std::nullopt, SplitPolicy::round_robin, 1), 1u);
  EXPECT_EQ(*choose_split_dim(b, std::nullopt, SplitPolicy::round_robin, 0), 0u);
  EXPECT_EQ(*choose_split_dim(b, std::nullopt, SplitPolicy::largest_first, 1), 0u);
}

TEST(Split, ReconstructionProperty) {
  Gen g(6);
  VarNames names = {"a", "b", "c"};
  for (int i = 0; i < 2000; ++i) {
    Box b = g.box(names);
    auto exclude = g.coin() ? std::optional<std::size_t>(1) : std::nullopt;
    if (!choose_split_dim(b, exclude, SplitPolicy::largest_first)) continue;
    int k = g.integer(2, 4);
    auto parts = split(b, k, exclude,
                       g.coin() ? SplitPolicy::largest_first : SplitPolicy::round_robin,
                       static_cast<std::size_t>(g.integer(0, 2)));
    if (parts.empty()) continue;
    EXPECT_EQ(hull(parts), b);
    for (const auto& p : parts) EXPECT_NE(p, b);
    for (std::size_t x = 0; x < parts.size(); ++x)
      for (std::size_t y = x + 1; y < parts.size(); ++y) EXPECT_FALSE(parts[x].interior_overlaps(parts[y]));
  }
}
