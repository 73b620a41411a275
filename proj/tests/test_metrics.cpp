#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "stpm/metrics.hpp"
#include "stpm/synthetic.hpp"

using namespace stpm;
using testutil::make_recording;

TEST_CASE("weighted_distance basics") {
  const Weights unit{1, 1, 1};
  CHECK(weighted_distance({0, 0, 0}, {3, 4, 0}, unit) == 5.0);
  CHECK(weighted_distance({1, 2, 3}, {1, 2, 3}, unit) == 0.0);
  CHECK(weighted_distance({1, 0, 0}, {0, 0, 0}, Weights{4, 1, 1}) == 2.0);
}

TEST_CASE("weighted_distance properties") {
  std::mt19937 gen(7);
  std::uniform_real_distribution<double> coord(-5.0, 5.0);
  std::uniform_real_distribution<double> wdist(0.1, 4.0);
  for (int k = 0; k < 500; ++k) {
    const SensorPosition p{coord(gen), coord(gen), coord(gen)};
    const SensorPosition q{coord(gen), coord(gen), coord(gen)};
    const Weights w{wdist(gen), wdist(gen), wdist(gen)};
    const double d = weighted_distance(p, q, w);
    CHECK(d >= 0.0);
    CHECK(weighted_distance(q, p, w) == d);
    // zero iff coordinates equal
    if (p.x != q.x || p.y != q.y || p.z != q.z) CHECK(d > 0.0);
    // monotone in each weight
    Weights w2 = w;
    w2.w1 *= 2.0;
    CHECK(weighted_distance(p, q, w2) >= d);
    Weights w3 = w;
    w3.w3 *= 3.0;
    CHECK(weighted_distance(p, q, w3) >= d);
  }
}

TEST_CASE("ball membership is strict and always holds the center") {
  // Five sensors on a unit line.
  const auto rec = make_recording({{1, 1}, {1, 1}, {1, 1}, {1, 1}, {1, 1}});
  CHECK(ball_members(rec, 3, Weights{1, 1, 1}, 1.5) ==
        std::vector<int>{2, 3, 4});
  CHECK(ball_members(rec, 3, Weights{1, 1, 1}, 0.5) == std::vector<int>{3});
  CHECK(ball_members(rec, 3, Weights{1, 1, 1}, 10.0) ==
        std::vector<int>{1, 2, 3, 4, 5});
  // A sensor at exactly distance r is excluded.
  CHECK(ball_members(rec, 3, Weights{1, 1, 1}, 1.0) == std::vector<int>{3});
  CHECK_THROWS_AS(ball_members(rec, 3, Weights{1, 1, 1}, 0.0), DomainError);
  CHECK_THROWS_AS(ball_members(rec, 3, Weights{1, 1, 1}, -1.0), DomainError);
}

TEST_CASE("mean_activity") {
  const auto rec = make_recording({{4, 4, 4}, {1, 2, 3}});
  CHECK(mean_activity(rec, 1, {1, 3}) == 4.0);
  CHECK(mean_activity(rec, 2, {1, 3}) == 2.0);
  CHECK(mean_activity(rec, 2, {2, 3}) == 2.5);
}

TEST_CASE("alignment_pair hand values are exact") {
  const auto rec = make_recording({{1, 2, 3}, {1, 2, 3}, {-1, -2, -3}});
  CHECK(alignment_pair(rec, 1, 2, {1, 3}) == 1.0);
  // Anti-correlated signal with opposite mean: cosine -1 times factor -1.
  CHECK(alignment_pair(rec, 1, 3, {1, 3}) == 1.0);

  const auto rec2 = make_recording({{1, 1}, {1, 3}});
  CHECK(alignment_pair(rec2, 1, 2, {1, 2}) == 0.0);
}

TEST_CASE("alignment_pair undefined cases") {
  const auto zero_energy = make_recording({{1, 2, 3}, {0, 0, 0}});
  CHECK_FALSE(alignment_defined(alignment_pair(zero_energy, 1, 2, {1, 3})));
  CHECK_FALSE(alignment_defined(alignment_pair(zero_energy, 2, 1, {1, 3})));
  // Zero reference mean with nonzero energy.
  const auto zero_mean = make_recording({{1, -1}, {1, 2}});
  CHECK_FALSE(alignment_defined(alignment_pair(zero_mean, 1, 2, {1, 2})));
  CHECK(alignment_defined(alignment_pair(zero_mean, 2, 1, {1, 2})));
}

TEST_CASE("alignment_pair self alignment is one") {
  const auto rec = testutil::random_recording(3, 20, 11, 5.0, 1.0);
  for (int i = 1; i <= 3; ++i) {
    CHECK(testutil::close_rel(alignment_pair(rec, i, i, {3, 17}), 1.0, 1e-12));
  }
}

TEST_CASE("alignment_pair is asymmetric in general") {
  const auto rec = make_recording({{1, 1}, {1, 3}});
  const double ij = alignment_pair(rec, 1, 2, {1, 2});
  const double ji = alignment_pair(rec, 2, 1, {1, 2});
  CHECK(ij == 0.0);
  CHECK(ji != ij);  // factor divides by the first sensor's mean
}

TEST_CASE("alignment_pair is invariant under common positive scaling") {
  std::mt19937 gen(23);
  std::uniform_real_distribution<double> lam(0.1, 10.0);
  std::uniform_real_distribution<double> val(-3.0, 5.0);
  for (int k = 0; k < 200; ++k) {
    std::vector<double> a(12), b(12);
    for (auto& v : a) v = val(gen);
    for (auto& v : b) v = val(gen);
    const double scale = lam(gen);
    std::vector<double> sa = a, sb = b;
    for (auto& v : sa) v *= scale;
    for (auto& v : sb) v *= scale;
    const auto rec = make_recording({a, b});
    const auto scaled = make_recording({sa, sb});
    const Interval I{2, 11};
    const double base = alignment_pair(rec, 1, 2, I);
    const double after = alignment_pair(scaled, 1, 2, I);
    if (alignment_defined(base)) {
      CHECK(testutil::close_rel(base, after, 1e-9));
    } else {
      CHECK_FALSE(alignment_defined(after));
    }
  }
}

TEST_CASE("radius_from_threshold with no failing sensor spans everything") {
  // Identical signals everywhere: every pair aligns at 1.
  const auto rec = make_recording({{1, 2, 3}, {1, 2, 3}, {1, 2, 3}});
  const auto r = radius_from_threshold(rec, 1, {1, 3}, Weights{1, 1, 1}, 0.9);
  REQUIRE(r.has_value());
  CHECK(*r == recording_diameter(rec, Weights{1, 1, 1}) + 1.0);
  CHECK(ball_members(rec, 1, Weights{1, 1, 1}, *r) ==
        std::vector<int>{1, 2, 3});
}

TEST_CASE("radius_from_threshold none when the nearest sensor fails") {
  // Sensor 2 (distance 1) is zero-energy, so it fails any threshold.
  const auto rec = make_recording({{1, 2, 3}, {0, 0, 0}, {1, 2, 3}});
  CHECK_FALSE(
      radius_from_threshold(rec, 1, {1, 3}, Weights{1, 1, 1}, 0.5).has_value());
}

TEST_CASE("radius_from_threshold stops at the nearest failing sensor") {
  // Sensor 2 aligns with 1 (sigma 1), sensor 3 is zero-energy (undefined).
  const auto rec = make_recording({{1, 2, 3}, {1, 2, 3}, {0, 0, 0}});
  const auto r = radius_from_threshold(rec, 1, {1, 3}, Weights{1, 1, 1}, 0.5);
  REQUIRE(r.has_value());
  CHECK(*r == 2.0);
  CHECK(ball_members(rec, 1, Weights{1, 1, 1}, *r) == std::vector<int>{1, 2});
}

TEST_CASE("score on a singleton ball") {
  const auto rec = testutil::random_recording(4, 10, 3, 5.0, 1.0);
  PatternGenotype g;
  g.center = 2;
  g.interval = {2, 8};
  g.radius = 0.5;  // below the unit sensor spacing
  const auto s = score(rec, g);
  CHECK(s.area == 1);
  CHECK(s.length == 6);
  CHECK(testutil::close_rel(s.alignment, 1.0, 1e-12));
}

TEST_CASE("score of a clean planted pattern is one") {
  SynthSpec spec;
  spec.n_sensors = 10;
  spec.n_steps = 40;
  spec.background_sigma = 1.0;
  spec.mean_offset = 10.0;
  spec.seed = 5;
  spec.planted.push_back(
      PlantedPattern{{3, 4, 5, 6}, Interval{10, 25}, 2.0, 0.0, 0.0});
  const auto synth = generate_synthetic(spec);

  PatternGenotype g;
  g.center = 4;
  g.interval = {10, 25};
  g.radius = 1.5;  // sensors 3..5, all inside the planted set
  const auto ball = ball_members(synth.recording, g.center, g.weights, g.radius);
  CHECK(ball == std::vector<int>{3, 4, 5});
  const auto s = score(synth.recording, g);
  CHECK(testutil::close_rel(s.alignment, 1.0, 1e-9));
}

TEST_CASE("score agrees with the straight-line implementation") {
  std::mt19937 gen(99);
  std::uniform_int_distribution<int> center(1, 6);
  std::uniform_real_distribution<double> radius(0.3, 7.0);
  std::uniform_int_distribution<int> t1(1, 11);
  for (int k = 0; k < 300; ++k) {
    const auto rec = testutil::random_recording(6, 12, 1000 + k, 2.0, 1.0);
    PatternGenotype g;
    g.center = center(gen);
    g.radius = radius(gen);
    const int a = t1(gen);
    std::uniform_int_distribution<int> t2(a + 1, 12);
    g.interval = {a, t2(gen)};
    const auto fast = score(rec, g);
    const auto slow = testutil::naive_score(rec, g);
    CHECK(fast.length == slow.length);
    CHECK(fast.area == slow.area);
    if (slow.alignment == testutil::kUndefined) {
      CHECK_FALSE(alignment_defined(fast.alignment));
    } else {
      CHECK(testutil::close_rel(fast.alignment, slow.alignment, 1e-12));
    }
  }
}
