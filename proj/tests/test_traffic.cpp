#include "crdsa/error.hpp"
#include "crdsa/traffic.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace crdsa;

namespace {

// Pearson statistic of observed counts against a uniform expectation.
double chi_square_uniform(const std::vector<long> &counts) {
  const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
  const double expected = total / static_cast<double>(counts.size());
  double stat = 0.0;
  for (long c : counts)
    stat += (c - expected) * (c - expected) / expected;
  return stat;
}

} // namespace

TEST_CASE("Poisson arrival counts") {
  Rng rng(1);
  SUBCASE("zero load") {
    const auto counts = draw_arrival_counts(0.0, 100, rng);
    CHECK(counts.size() == 100);
    CHECK(std::all_of(counts.begin(), counts.end(), [](int c) { return c == 0; }));
  }
  SUBCASE("mean at G = 0.5") {
    const auto counts = draw_arrival_counts(0.5, 1000000, rng);
    const double mean = std::accumulate(counts.begin(), counts.end(), 0.0) / 1e6;
    CHECK(std::abs(mean - 0.5) <= 0.002);
  }
  SUBCASE("empty-slot fraction at G = 1") {
    const auto counts = draw_arrival_counts(1.0, 1000000, rng);
    const double zeros = static_cast<double>(std::count(counts.begin(), counts.end(), 0)) / 1e6;
    CHECK(std::abs(zeros - std::exp(-1.0)) <= 0.0015);
  }
  CHECK_THROWS_AS(draw_arrival_counts(-0.1, 10, rng), Error);
  CHECK_THROWS_AS(ArrivalProcess(std::nan("")), Error);
}

TEST_CASE("frame-based placement") {
  Rng rng(2);
  SUBCASE("full frame") {
    const auto p = place_fb(7, 5, 100, 5, rng);
    CHECK(p.slots == std::vector<SlotIndex>{100, 101, 102, 103, 104});
  }
  SUBCASE("two of two") {
    const auto p = place_fb(1, 2, 10, 2, rng);
    CHECK(p.slots == std::vector<SlotIndex>{10, 11});
  }
  SUBCASE("infeasible") {
    CHECK_THROWS_AS(place_fb(1, 3, 0, 2, rng), Error);
    try {
      place_fb(1, 3, 0, 2, rng);
    } catch (const Error &e) {
      CHECK(e.kind() == ErrorKind::config);
    }
  }
  SUBCASE("single copies are uniform over the frame") {
    std::vector<long> counts(200, 0);
    for (int i = 0; i < 1000000; ++i)
      ++counts[static_cast<std::size_t>(place_fb(0, 1, 400, 200, rng).slots[0] - 400)];
    // 99.9% quantile of chi-square with 199 degrees of freedom
    CHECK(chi_square_uniform(counts) < 266.39);
    // per-slot band: 4.5 sigma keeps the family-wise error small over 200 slots
    const double sigma = std::sqrt(1e6 * (1.0 / 200) * (199.0 / 200));
    for (long c : counts)
      CHECK(std::abs(c - 5000.0) <= 4.5 * sigma);
  }
  SUBCASE("placement invariants") {
    for (int trial = 0; trial < 5000; ++trial) {
      const int degree = 1 + trial % 8;
      const SlotIndex start = 200 * (trial % 13);
      const auto p = place_fb(trial, degree, start, 200, rng);
      REQUIRE(p.slots.size() == static_cast<std::size_t>(degree));
      CHECK(std::is_sorted(p.slots.begin(), p.slots.end()));
      CHECK(std::adjacent_find(p.slots.begin(), p.slots.end()) == p.slots.end());
      CHECK(p.slots.front() >= start);
      CHECK(p.slots.back() < start + 200);
    }
  }
}

TEST_CASE("sliding-window placement") {
  Rng rng(3);
  CHECK(place_sw(0, 1, 7, 200, rng).slots == std::vector<SlotIndex>{8});
  CHECK(place_sw(0, 2, 0, 2, rng).slots == std::vector<SlotIndex>{1, 2});
  CHECK_THROWS_AS(place_sw(0, 3, 0, 2, rng), Error);

  SUBCASE("first copy fixed, the rest uniform over the window") {
    std::vector<long> counts(199, 0);   // slots 2..200
    for (int i = 0; i < 1000000; ++i) {
      const auto p = place_sw(0, 3, 0, 200, rng);
      REQUIRE(p.slots.front() == 1);
      for (std::size_t k = 1; k < p.slots.size(); ++k) {
        REQUIRE(p.slots[k] >= 2);
        REQUIRE(p.slots[k] <= 200);
        ++counts[static_cast<std::size_t>(p.slots[k] - 2)];
      }
    }
    CHECK(chi_square_uniform(counts) < 265.23);   // 99.9% quantile, 198 dof
  }
  SUBCASE("placement invariants") {
    for (int trial = 0; trial < 5000; ++trial) {
      const int degree = 1 + trial % 8;
      const SlotIndex ready = trial * 3;
      const auto p = place_sw(trial, degree, ready, 50, rng);
      REQUIRE(p.slots.size() == static_cast<std::size_t>(degree));
      CHECK(p.first_slot() == ready + 1);
      CHECK(p.last_slot() <= ready + 50);
      CHECK(std::adjacent_find(p.slots.begin(), p.slots.end()) == p.slots.end());
    }
  }
}

TEST_CASE("next frame start") {
  CHECK(next_frame_start(0, 200) == 200);
  CHECK(next_frame_start(199, 200) == 200);
  CHECK(next_frame_start(200, 200) == 400);
  CHECK(next_frame_start(57, 10) == 60);
}
