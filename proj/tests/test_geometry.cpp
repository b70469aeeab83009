#include <gtest/gtest.h>

#include "oracles.hpp"
#include "skybench/geometry.hpp"
#include "skybench/rng.hpp"

using namespace skybench;

namespace {

bool sampled_hit(const Aabb& box, const Vec3& a, const Vec3& b, double step) {
  const int n = std::max(1, static_cast<int>(std::ceil(distance(a, b) / step)));
  for (int s = 0; s <= n; ++s) {
    if (box.contains(a + (static_cast<double>(s) / n) * (b - a))) return true;
  }
  return false;
}

Vec3 random_point(Rng& rng, double lo, double hi) {
  return {rng.uniform(lo, hi), rng.uniform(lo, hi), rng.uniform(lo, hi)};
}

}  // namespace

TEST(Segment, HitsAndMisses) {
  const Aabb box{{0, 0, 0}, {10, 10, 10}};
  EXPECT_TRUE(segment_intersects(box, {-5, 5, 5}, {15, 5, 5}));
  EXPECT_FALSE(segment_intersects(box, {-5, 5, 11}, {15, 5, 11}));
  EXPECT_FALSE(segment_intersects(box, {-5, -5, 5}, {-1, 20, 5}));
  // closed box: grazing a face or an edge counts
  EXPECT_TRUE(segment_intersects(box, {-5, 10, 5}, {15, 10, 5}));
  EXPECT_TRUE(segment_intersects(box, {-5, 10, 10}, {15, 10, 10}));
  // segment ends before the box
  EXPECT_FALSE(segment_intersects(box, {-5, 5, 5}, {-0.001, 5, 5}));
  // degenerate segment is a point test
  EXPECT_TRUE(segment_intersects(box, {5, 5, 5}, {5, 5, 5}));
  EXPECT_FALSE(segment_intersects(box, {11, 5, 5}, {11, 5, 5}));
}

TEST(Segment, AgreesWithDenseSamplingAwayFromTangency) {
  Rng rng(7);
  const Aabb box{{40, 40, 40}, {60, 55, 70}};
  const Aabb core = {box.min + Vec3{0.1, 0.1, 0.1}, box.max - Vec3{0.1, 0.1, 0.1}};
  int checked = 0, hits = 0;
  for (int n = 0; n < 1000; ++n) {
    const Vec3 a = random_point(rng, 0, 100), b = random_point(rng, 0, 100);
    const bool exact = segment_intersects(box, a, b);
    if (segment_box_distance(box, a, b) > 0.1) {
      EXPECT_FALSE(exact);
      EXPECT_FALSE(sampled_hit(box, a, b, 0.05));
    } else if (segment_intersects(core, a, b)) {
      EXPECT_TRUE(exact);
      EXPECT_TRUE(sampled_hit(box, a, b, 0.05));
      ++hits;
    } else {
      continue;  // within 0.1 m of the surface: sampling cannot decide
    }
    ++checked;
  }
  EXPECT_GT(checked, 950);
  EXPECT_GT(hits, 50);
}

TEST(Distance, PointBox) {
  const Aabb box{{0, 0, 0}, {1, 1, 1}};
  EXPECT_DOUBLE_EQ(point_box_distance(box, {0.5, 0.5, 0.5}), 0.0);
  EXPECT_DOUBLE_EQ(point_box_distance(box, {3, 0.5, 0.5}), 2.0);
  EXPECT_DOUBLE_EQ(point_box_distance(box, {4, 5, 1}), 5.0);
}

TEST(Distance, SegmentBoxMatchesSampling) {
  Rng rng(11);
  const Aabb box{{10, 20, 0}, {30, 25, 40}};
  for (int n = 0; n < 300; ++n) {
    const Vec3 a = random_point(rng, -20, 60), b = random_point(rng, -20, 60);
    const double exact = segment_box_distance(box, a, b);
    const double step = 0.01;
    double sampled = std::numeric_limits<double>::infinity();
    const int m = std::max(1, static_cast<int>(std::ceil(distance(a, b) / step)));
    for (int s = 0; s <= m; ++s) sampled = std::min(sampled, oracle::point_box(box, a + (double(s) / m) * (b - a)));
    EXPECT_LE(exact, sampled + 1e-9);
    EXPECT_NEAR(exact, sampled, step);
    EXPECT_EQ(exact == 0.0, segment_intersects(box, a, b)) << n;
  }
}

TEST(Distance, ParallelToFace) {
  const Aabb box{{0, 0, 0}, {10, 10, 10}};
  EXPECT_NEAR(segment_box_distance(box, {-5, 5, 10.5}, {15, 5, 10.5}), 0.5, 1e-12);
  EXPECT_NEAR(segment_box_distance(box, {13, 14, 5}, {13, 14, 8}), 5.0, 1e-12);
}

TEST(Rng, Deterministic) {
  Rng a(42), b(42), c(43);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
  EXPECT_NE(Rng(42).next_u64(), c.next_u64());
}

TEST(Rng, Ranges) {
  Rng rng(3);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    const auto k = rng.uniform_int(-3, 4);
    ASSERT_GE(k, -3);
    ASSERT_LE(k, 4);
  }
  EXPECT_EQ(rng.uniform_int(5, 5), 5);
}

TEST(Rng, DeriveSeedIsOrderSensitive) {
  EXPECT_NE(derive_seed(1, 2, 3), derive_seed(1, 3, 2));
  EXPECT_EQ(derive_seed(9, 1, 2), derive_seed(9, 1, 2));
}
