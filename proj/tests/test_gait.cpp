#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cajun/errors.hpp"
#include "cajun/gait.hpp"

using namespace cajun;

namespace {

// Ticks phase forward n times and returns the trajectory of wrapped phases.
std::vector<double> tick_phases(const GaitConfig& g, double f, double dt, int n) {
  std::vector<double> out;
  PhaseState ps;
  for (int i = 0; i < n; ++i) {
    out.push_back(ps.phase());
    ps = advance_phase(ps, g, f, dt);
  }
  return out;
}

int contact_count(const std::array<bool, kNumLegs>& c) {
  int n = 0;
  for (bool b : c) n += b ? 1 : 0;
  return n;
}

}  // namespace

TEST_CASE("phase advances by 2*pi*f*dt per tick") {
  const GaitConfig g = GaitConfig::preset(GaitName::kPronking);
  PhaseState ps;
  ps = advance_phase(ps, g, 2.0, 0.002);
  CHECK(ps.unwrapped == doctest::Approx(2.0 * kPi * 2.0 * 0.002).epsilon(1e-15));
  CHECK(ps.frequency == 2.0);
  CHECK(ps.cycle_count() == 0);
}

TEST_CASE("250 low-rate ticks at 2 Hz complete exactly one cycle") {
  const GaitConfig g = GaitConfig::preset(GaitName::kPronking);
  PhaseState ps;
  for (int i = 0; i < 249; ++i) ps = advance_phase(ps, g, 2.0, 0.002);
  CHECK(ps.cycle_count() == 0);
  ps = advance_phase(ps, g, 2.0, 0.002);
  CHECK(std::abs(ps.unwrapped - kTwoPi) < 1e-9);
  // one more tick is unambiguously inside the second cycle
  ps = advance_phase(ps, g, 2.0, 0.002);
  CHECK(ps.cycle_count() == 1);
  CHECK(ps.phase() == doctest::Approx(ps.unwrapped - kTwoPi).epsilon(1e-9));
}

TEST_CASE("wrapped phase stays in [0, 2*pi) and handles negative unwrapped") {
  PhaseState ps;
  ps.unwrapped = 7.0 * kTwoPi + 1.0;
  CHECK(ps.phase() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ps.cycle_count() == 7);
  ps.unwrapped = -0.5;
  CHECK(ps.phase() == doctest::Approx(kTwoPi - 0.5).epsilon(1e-12));
  CHECK(ps.cycle_count() == -1);
}

TEST_CASE("frequency commands are clamped to the configured bounds") {
  const GaitConfig g = GaitConfig::preset(GaitName::kPronking);
  PhaseState ps;
  CHECK(advance_phase(ps, g, 10.0, 0.002).frequency == 4.0);
  CHECK(advance_phase(ps, g, 0.25, 0.002).frequency == 1.0);
  CHECK(advance_phase(ps, g, 10.0, 0.002).unwrapped ==
        doctest::Approx(kTwoPi * 4.0 * 0.002).epsilon(1e-15));
}

TEST_CASE("pronking: all legs share the first half-cycle as stance") {
  const GaitConfig g = GaitConfig::preset(GaitName::kPronking);
  for (double phi : {0.0, 0.3, kPi - 1e-9}) {
    const auto c = desired_contact_state(g, phi);
    CHECK(contact_count(c) == 4);
  }
  for (double phi : {kPi, 4.0, kTwoPi - 1e-9}) {
    const auto c = desired_contact_state(g, phi);
    CHECK(contact_count(c) == 0);
  }
}

TEST_CASE("pronking contact sequence over one 250-tick cycle") {
  const GaitConfig g = GaitConfig::preset(GaitName::kPronking);
  const auto phases = tick_phases(g, 2.0, 0.002, 250);
  int transition = -1;
  for (int k = 0; k < 250; ++k) {
    const bool stance = desired_contact_state(g, phases[static_cast<size_t>(k)])[0];
    if (!stance && transition < 0) transition = k;
    if (transition >= 0) CHECK_FALSE(stance);  // one stance block, one swing block
  }
  CHECK(transition == 125);
}

TEST_CASE("bounding: front pair first, two flight gaps per cycle") {
  const GaitConfig g = GaitConfig::preset(GaitName::kBounding);
  auto c = desired_contact_state(g, 0.1);
  CHECK(c[kFrontRight]);
  CHECK(c[kFrontLeft]);
  CHECK_FALSE(c[kRearRight]);
  CHECK_FALSE(c[kRearLeft]);
  c = desired_contact_state(g, 1.0 * kPi);
  CHECK_FALSE(c[kFrontRight]);
  CHECK(c[kRearRight]);
  CHECK(c[kRearLeft]);
  // gaps (0.7pi, 0.9pi) and (1.6pi, 2pi) are fully airborne
  CHECK(contact_count(desired_contact_state(g, 0.8 * kPi)) == 0);
  CHECK(contact_count(desired_contact_state(g, 1.8 * kPi)) == 0);
}

TEST_CASE("bounding tick sequence matches the window boundaries") {
  const GaitConfig g = GaitConfig::preset(GaitName::kBounding);
  const auto phases = tick_phases(g, 2.0, 0.002, 250);
  for (int k = 0; k < 250; ++k) {
    const double ideal = static_cast<double>(k) / 250.0;  // cycle fraction, exact
    const auto c = desired_contact_state(g, phases[static_cast<size_t>(k)]);
    // stay 1 tick away from window edges; fp phase accumulation may land on them
    auto clear_of = [&](double frac) { return std::abs(ideal - frac) > 1.0 / 250.0 / 2.0; };
    if (clear_of(0.35)) CHECK(c[kFrontRight] == (ideal < 0.35));
    if (clear_of(0.45) && clear_of(0.8)) CHECK(c[kRearLeft] == (ideal >= 0.45 && ideal < 0.8));
    CHECK(c[kFrontRight] == c[kFrontLeft]);
    CHECK(c[kRearRight] == c[kRearLeft]);
  }
}

TEST_CASE("crawling: exactly one leg swings at a time, order FL, RR, FR, RL") {
  const GaitConfig g = GaitConfig::preset(GaitName::kCrawling);
  const std::array<int, 4> swing_order{kFrontLeft, kRearRight, kFrontRight, kRearLeft};
  for (int quarter = 0; quarter < 4; ++quarter) {
    const double phi = (quarter + 0.5) * 0.5 * kPi;
    const auto c = desired_contact_state(g, phi);
    CHECK(contact_count(c) == 3);
    CHECK_FALSE(c[swing_order[static_cast<size_t>(quarter)]]);
  }
}

TEST_CASE("pacing swings lateral pairs, trotting diagonal pairs") {
  const GaitConfig pace = GaitConfig::preset(GaitName::kPacing);
  auto c = desired_contact_state(pace, 0.5 * kPi);
  CHECK(c[kFrontLeft]);
  CHECK(c[kRearLeft]);
  CHECK_FALSE(c[kFrontRight]);
  CHECK_FALSE(c[kRearRight]);

  const GaitConfig trot = GaitConfig::preset(GaitName::kTrotting);
  c = desired_contact_state(trot, 0.5 * kPi);
  CHECK(c[kFrontRight]);
  CHECK(c[kRearLeft]);
  CHECK_FALSE(c[kFrontLeft]);
  CHECK_FALSE(c[kRearRight]);
  c = desired_contact_state(trot, 1.5 * kPi);
  CHECK_FALSE(c[kFrontRight]);
  CHECK(c[kFrontLeft]);
  CHECK(contact_count(c) == 2);
}

TEST_CASE("fly trotting inserts airborne gaps between diagonal pairs") {
  const GaitConfig g = GaitConfig::preset(GaitName::kFlyTrotting);
  CHECK(contact_count(desired_contact_state(g, 0.5 * kPi)) == 2);
  CHECK(contact_count(desired_contact_state(g, 0.9 * kPi)) == 0);
  CHECK(contact_count(desired_contact_state(g, 1.9 * kPi)) == 0);
}

TEST_CASE("swing progress: none during stance, linear during swing") {
  const GaitConfig g = GaitConfig::preset(GaitName::kPronking);
  CHECK_FALSE(swing_progress(g, 0.5, 0).has_value());
  // swing spans [pi, 2*pi): midpoint at 1.5*pi
  auto p = swing_progress(g, 1.5 * kPi, 0);
  REQUIRE(p.has_value());
  CHECK(*p == doctest::Approx(0.5).epsilon(1e-12));
  p = swing_progress(g, kPi, 0);
  REQUIRE(p.has_value());
  CHECK(*p == doctest::Approx(0.0));
  p = swing_progress(g, kTwoPi - 1e-6, 0);
  CHECK(*p == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("swing progress across the wrap boundary") {
  // crawling FL swings on [0, pi/2), which straddles the wrap from its
  // stance window [pi/2, 2*pi)
  const GaitConfig g = GaitConfig::preset(GaitName::kCrawling);
  auto p = swing_progress(g, 0.25 * kPi, kFrontLeft);
  REQUIRE(p.has_value());
  CHECK(*p == doctest::Approx(0.5).epsilon(1e-12));
  CHECK_FALSE(swing_progress(g, 0.75 * kPi, kFrontLeft).has_value());
}

TEST_CASE("swing progress between interior windows") {
  // crawling RR has stance [0, pi/2) and [pi, 2*pi): interior swing gap
  const GaitConfig g = GaitConfig::preset(GaitName::kCrawling);
  auto p = swing_progress(g, 0.75 * kPi, kRearRight);
  REQUIRE(p.has_value());
  CHECK(*p == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("stance duration is stance fraction over stepping frequency") {
  const GaitConfig pronk = GaitConfig::preset(GaitName::kPronking);
  CHECK(estimate_stance_duration(pronk, 2.0, 0) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(estimate_stance_duration(pronk, 4.0, 0) == doctest::Approx(0.125).epsilon(1e-15));
  // clamped frequency feeds the estimate
  CHECK(estimate_stance_duration(pronk, 100.0, 0) == doctest::Approx(0.125).epsilon(1e-15));

  const GaitConfig bound = GaitConfig::preset(GaitName::kBounding);
  CHECK(estimate_stance_duration(bound, 2.0, kRearLeft) ==
        doctest::Approx(0.7 * kPi / kTwoPi / 2.0).epsilon(1e-12));

  // multi-window legs sum their widths: crawling RR has 3/4 duty
  const GaitConfig crawl = GaitConfig::preset(GaitName::kCrawling);
  CHECK(estimate_stance_duration(crawl, 2.0, kRearRight) == doctest::Approx(0.375).epsilon(1e-12));
}

TEST_CASE("gait names round-trip and unknown names are rejected") {
  for (GaitName name : {GaitName::kPronking, GaitName::kBounding, GaitName::kCrawling,
                        GaitName::kPacing, GaitName::kTrotting, GaitName::kFlyTrotting}) {
    CHECK(gait_name_from_string(gait_name_string(name)) == name);
  }
  CHECK_THROWS_AS(gait_name_from_string("gallop"), ConfigError);
}

TEST_CASE("config validation rejects malformed window sets") {
  GaitConfig g = GaitConfig::preset(GaitName::kPronking);
  g.stance_windows[0] = {{1.0, 0.5}};  // start >= end
  CHECK_THROWS_AS(g.validate(), ConfigError);

  g = GaitConfig::preset(GaitName::kCustom);
  g.stance_windows[0] = {{0.0, 2.0}, {1.5, 3.0}};  // overlap
  CHECK_THROWS_AS(g.validate(), ConfigError);

  g = GaitConfig::preset(GaitName::kPronking);
  g.default_frequency = 0.5;  // below bounds
  CHECK_THROWS_AS(g.validate(), ConfigError);

  g = GaitConfig::preset(GaitName::kPronking);
  g.stance_windows[2] = {{0.0, 0.9 * kPi}};  // pronking must be symmetric
  CHECK_THROWS_AS(g.validate(), ConfigError);

  g = GaitConfig::preset(GaitName::kBounding);
  g.stance_windows[kRearRight] = {{0.5 * kPi, 1.6 * kPi}};
  g.stance_windows[kRearLeft] = {{0.5 * kPi, 1.6 * kPi}};  // overlaps front pair
  CHECK_THROWS_AS(g.validate(), ConfigError);
}
