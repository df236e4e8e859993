#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "dipstop/rng.hpp"
#include "dipstop/stop_controller.hpp"

using namespace dipstop;
using stopctl::StopPolicy;

namespace {

StopPolicy policy(int window, int patience, int radius, int min_evals) {
  StopPolicy p;
  p.smoothing_window = window;
  p.patience = patience;
  p.search_radius = radius;
  p.min_evals = min_evals;
  return p;
}

// Brute-force windowed argmax used as the oracle for the fine search.
int brute_fine(const std::vector<float>& raw, int center, int radius) {
  int best = -1;
  for (int i = std::max(0, center - radius);
       i <= std::min(static_cast<int>(raw.size()) - 1, center + radius); ++i)
    if (best < 0 || raw[i] > raw[best]) best = i;
  return best;
}

}  // namespace

TEST_SUITE("stopctl") {

TEST_CASE("moving average of a unit impulse") {
  // Hand-computed: window 4 over 1,0,0,0,0 gives 1, 1/2, 1/3, 1/4, 0.
  std::vector<float> smoothed = stopctl::smooth({1, 0, 0, 0, 0}, 4);
  REQUIRE(smoothed.size() == 5);
  CHECK(smoothed[0] == doctest::Approx(1.0));
  CHECK(smoothed[1] == doctest::Approx(0.5));
  CHECK(smoothed[2] == doctest::Approx(1.0 / 3.0));
  CHECK(smoothed[3] == doctest::Approx(0.25));
  CHECK(smoothed[4] == doctest::Approx(0.0));
}

TEST_CASE("window of one is the identity") {
  const std::vector<float> raw = {3.0f, -1.0f, 0.5f, 7.25f};
  CHECK(stopctl::smooth(raw, 1) == raw);
  CHECK(stopctl::smooth({}, 4).empty());
}

TEST_CASE("smoothing is causal") {
  Rng rng(31);
  std::vector<float> raw(40);
  for (auto& v : raw) v = static_cast<float>(rng.uniform());
  const std::vector<float> full = stopctl::smooth(raw, 7);
  for (std::size_t t = 0; t < raw.size(); ++t) {
    const std::vector<float> prefix(raw.begin(), raw.begin() + t + 1);
    CHECK(stopctl::smooth(prefix, 7).back() == doctest::Approx(full[t]));
  }
}

TEST_CASE("hand-traced coarse peak: 1 2 3 2 2 with patience 2") {
  const auto peak =
      stopctl::detect_coarse_peak({1, 2, 3, 2, 2}, policy(1, 2, 0, 1));
  REQUIRE(peak.has_value());
  CHECK(peak->peak_index == 2);
  CHECK(peak->declared_at == 4);
}

TEST_CASE("plateaus resolve to the earliest index") {
  const auto peak =
      stopctl::detect_coarse_peak({1, 5, 5, 5, 5, 5}, policy(1, 3, 0, 1));
  REQUIRE(peak.has_value());
  CHECK(peak->peak_index == 1);
}

TEST_CASE("no declaration before the minimum evaluation count") {
  // Patience would fire at index 3; min_evals postpones declaration until
  // a full patience run fits after the gate (earliest min_evals + P - 2).
  const std::vector<float> s = {5, 1, 1, 1, 1, 1, 1, 1, 1, 1};
  const auto early = stopctl::detect_coarse_peak(s, policy(1, 3, 0, 1));
  REQUIRE(early.has_value());
  CHECK(early->declared_at == 3);

  const auto late = stopctl::detect_coarse_peak(s, policy(1, 3, 0, 7));
  REQUIRE(late.has_value());
  CHECK(late->declared_at == 8);
  CHECK(late->peak_index == 0);

  const auto never = stopctl::detect_coarse_peak(s, policy(1, 3, 0, 20));
  CHECK_FALSE(never.has_value());
}

TEST_CASE("a monotone decreasing stream stops as soon as allowed") {
  std::vector<float> s;
  for (int i = 0; i < 30; ++i) s.push_back(100.0f - i);
  const auto peak = stopctl::detect_coarse_peak(s, policy(1, 3, 0, 1));
  REQUIRE(peak.has_value());
  CHECK(peak->peak_index == 0);
  CHECK(peak->declared_at == 3);
}

TEST_CASE("fine search equals a brute-force windowed argmax") {
  Rng rng(33);
  for (int trial = 0; trial < 10000; ++trial) {
    const int n = rng.uniform_int(1, 60);
    std::vector<float> raw(n);
    for (auto& v : raw) v = static_cast<float>(rng.uniform(-5.0, 5.0));
    const int center = rng.uniform_int(0, n - 1);
    const int radius = rng.uniform_int(0, 20);
    CHECK(stopctl::fine_search(raw, center, radius) ==
          brute_fine(raw, center, radius));
  }
}

TEST_CASE("fine search breaks ties toward the earliest step") {
  CHECK(stopctl::fine_search({5, 9, 7, 9, 1}, 2, 2) == 1);
  CHECK(stopctl::fine_search({5, 9, 7}, 2, 1) == 1);
  CHECK(stopctl::fine_search({4, 4, 4}, 1, 1) == 0);
}

TEST_CASE("online controller matches the offline policy run") {
  Rng rng(35);
  const StopPolicy p = policy(5, 8, 8, 12);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<float> raw(80);
    for (auto& v : raw) v = static_cast<float>(rng.uniform());

    stopctl::StopController ctl(p);
    for (float v : raw)
      if (ctl.feed(v)) break;
    const stopctl::StopDecision online = ctl.finalize();
    const stopctl::StopDecision offline = stopctl::run_policy(raw, p);

    CHECK(online.final_index == offline.final_index);
    CHECK(online.coarse_index == offline.coarse_index);
    CHECK(online.declared_at == offline.declared_at);
    CHECK(online.no_peak_declared == offline.no_peak_declared);
    CHECK(online.raw.size() == offline.raw.size());
  }
}

TEST_CASE("feeding after the declaration changes nothing") {
  const StopPolicy p = policy(1, 2, 2, 1);
  stopctl::StopController ctl(p);
  std::vector<float> raw = {1, 3, 2, 2};
  bool declared = false;
  for (float v : raw) declared = ctl.feed(v);
  REQUIRE(declared);
  const stopctl::StopDecision before = ctl.finalize();
  CHECK(ctl.feed(999.0f));  // ignored
  const stopctl::StopDecision after = ctl.finalize();
  CHECK(after.final_index == before.final_index);
  CHECK(after.raw.size() == before.raw.size());
}

TEST_CASE("undeclared streams fall back to the global smoothed peak") {
  // Strictly increasing scores never trip the patience rule.
  const StopPolicy p = policy(3, 4, 2, 4);
  std::vector<float> raw;
  for (int i = 0; i < 20; ++i) raw.push_back(static_cast<float>(i));
  const stopctl::StopDecision d = stopctl::run_policy(raw, p);
  CHECK(d.no_peak_declared);
  CHECK(d.declared_at == -1);
  CHECK(d.coarse_index == 19);  // smoothed maximum of an increasing stream
  CHECK(d.final_index == brute_fine(raw, d.coarse_index, p.search_radius));
}

TEST_CASE("the chosen step never trails the declaration") {
  Rng rng(37);
  const StopPolicy p = policy(4, 6, 5, 8);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<float> raw(60);
    for (auto& v : raw) v = static_cast<float>(rng.uniform());
    const stopctl::StopDecision d = stopctl::run_policy(raw, p);
    REQUIRE(d.final_index >= 0);
    if (d.declared_at >= 0) {
      CHECK(d.final_index <= d.declared_at);
      // Retention bound: the winner sits within the last W + P + R steps.
      CHECK(d.final_index >=
            d.declared_at - (p.smoothing_window + p.patience + p.search_radius));
    }
  }
}

TEST_CASE("a clean bell stops at its true maximum") {
  // Noiseless bell centered at step 30: smoothing lags the peak, but the
  // raw-score fine search recovers the exact center.
  std::vector<float> raw;
  for (int t = 0; t < 60; ++t)
    raw.push_back(std::exp(-std::pow((t - 30.0f) / 8.0f, 2.0f) / 2.0f));
  const stopctl::StopDecision d = stopctl::run_policy(raw, policy(5, 8, 8, 10));
  CHECK_FALSE(d.no_peak_declared);
  CHECK(d.final_index == 30);
}

TEST_CASE("noisy bells stop near the true maximum almost always") {
  // Smaller-scale version of the headline robustness claim: bell centered
  // at step 150 with uniform +/-0.05 noise, full-size policy.
  const StopPolicy p = policy(15, 30, 30, 50);
  int within = 0;
  const int trials = 20;
  for (int trial = 0; trial < trials; ++trial) {
    Rng rng(1000 + trial);
    std::vector<float> raw;
    for (int t = 0; t < 300; ++t) {
      const float bell = std::exp(-std::pow((t - 150.0f) / 40.0f, 2.0f) / 2.0f);
      raw.push_back(bell + static_cast<float>(rng.uniform(-0.05, 0.05)));
    }
    const stopctl::StopDecision d = stopctl::run_policy(raw, p);
    if (std::abs(d.final_index - 150) <= 10) ++within;
  }
  CHECK(within >= trials - 1);
}

TEST_CASE("policy validation names the offending field") {
  CHECK_THROWS_AS(policy(0, 2, 2, 2).validate(), std::invalid_argument);
  CHECK_THROWS_AS(policy(2, 0, 2, 2).validate(), std::invalid_argument);
  CHECK_THROWS_AS(policy(2, 2, -1, 2).validate(), std::invalid_argument);
  // The minimum evaluation count cannot undercut the smoothing window.
  CHECK_THROWS_AS(policy(8, 2, 2, 4).validate(), std::invalid_argument);
  CHECK_NOTHROW(policy(8, 2, 2, 8).validate());
}

}  // TEST_SUITE("stopctl")
