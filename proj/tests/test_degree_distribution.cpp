#include "crdsa/degree_distribution.hpp"
#include "crdsa/error.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace crdsa;

TEST_CASE("make_regular builds a single-term distribution") {
  CHECK(make_regular(2).terms() == std::vector<DegreeTerm>{{2, 1.0}});
  CHECK(make_regular(1).terms() == std::vector<DegreeTerm>{{1, 1.0}});
  CHECK(make_regular(3).terms() == std::vector<DegreeTerm>{{3, 1.0}});
  CHECK_THROWS_AS(make_regular(0), Error);
}

TEST_CASE("mean degree") {
  CHECK(mean_degree(make_regular(2)) == 2.0);
  CHECK(mean_degree(make_regular(1)) == 1.0);
  // 2 * 0.5 + 3 * 0.28 + 8 * 0.22 = 1.0 + 0.84 + 1.76
  CHECK(mean_degree(irsa8_preset()) == doctest::Approx(3.6).epsilon(1e-12));
  for (int l = 1; l <= 16; ++l)
    CHECK(mean_degree(make_regular(l)) == static_cast<double>(l));
}

TEST_CASE("inverse-CDF sampling") {
  CHECK(sample_degree(make_regular(2), 0.0) == 2);
  CHECK(sample_degree(make_regular(2), 0.999999) == 2);

  const DegreeDistribution half({{2, 0.5}, {3, 0.5}});
  CHECK(sample_degree(half, 0.25) == 2);
  // a u sitting exactly on a bin edge belongs to the upper bin
  CHECK(sample_degree(half, 0.5) == 3);
  CHECK(sample_degree(half, 0.75) == 3);

  // CDF edges 0.5, 0.78, 1.0
  const auto irsa = irsa8_preset();
  CHECK(sample_degree(irsa, 0.9) == 8);
  CHECK(sample_degree(irsa, 0.6) == 3);
  CHECK(sample_degree(irsa, 0.1) == 2);

  SUBCASE("identical u gives identical degree") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
      const double u = unit(rng);
      CHECK(irsa.sample(u) == irsa.sample(u));
    }
  }
}

TEST_CASE("empirical mean matches the mean degree within 3 standard errors") {
  const std::vector<DegreeDistribution> dists = {
      make_regular(2), irsa8_preset(), DegreeDistribution({{1, 0.2}, {4, 0.3}, {6, 0.5}})};
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  constexpr int n = 1000000;
  for (const auto &d : dists) {
    double second = 0.0;
    for (const auto &t : d.terms())
      second += t.degree * t.degree * t.probability;
    const double variance = second - d.mean_degree() * d.mean_degree();
    double sum = 0.0;
    for (int i = 0; i < n; ++i)
      sum += d.sample(unit(rng));
    const double se = std::sqrt(variance / n);
    CHECK(std::abs(sum / n - d.mean_degree()) <= 3.0 * se + 1e-12);
  }
}

TEST_CASE("construction rejects malformed distributions") {
  CHECK_THROWS_AS(DegreeDistribution({}), Error);
  CHECK_THROWS_AS(DegreeDistribution({{2, 0.5}, {3, 0.4}}), Error);
  CHECK_THROWS_AS(DegreeDistribution({{2, 0.5}, {2, 0.5}}), Error);
  CHECK_THROWS_AS(DegreeDistribution({{2, 1.0}, {3, 0.0}}), Error);
  CHECK_THROWS_AS(DegreeDistribution({{0, 1.0}}), Error);
  CHECK_THROWS_AS(DegreeDistribution({{2, 1.5}, {3, -0.5}}), Error);
  // sorted on construction
  const DegreeDistribution d({{8, 0.22}, {2, 0.5}, {3, 0.28}});
  CHECK(d.terms().front().degree == 2);
  CHECK(d.max_degree() == 8);
  CHECK(d == irsa8_preset());
}

TEST_CASE("polynomial syntax") {
  CHECK(parse_distribution("x^2") == make_regular(2));
  CHECK(parse_distribution("x") == make_regular(1));
  CHECK(parse_distribution(" x ^ 3 ") == make_regular(3));
  CHECK(parse_distribution("0.5x^2+0.28x^3+0.22x^8") == irsa8_preset());
  CHECK(parse_distribution("0.5 x^2 + 0.28 x^3 + 0.22 x^8") == irsa8_preset());
  CHECK(parse_distribution("IRSA8") == irsa8_preset());
  CHECK(parse_distribution("0.5*x^2+0.5*x^3") == DegreeDistribution({{2, 0.5}, {3, 0.5}}));

  CHECK_THROWS_AS(parse_distribution(""), Error);
  CHECK_THROWS_AS(parse_distribution("0.5x^2"), Error);
  CHECK_THROWS_AS(parse_distribution("2"), Error);
  CHECK_THROWS_AS(parse_distribution("x^"), Error);
  CHECK_THROWS_AS(parse_distribution("x^2+"), Error);
  CHECK_THROWS_AS(parse_distribution("ax^2"), Error);
  CHECK_THROWS_AS(parse_distribution("x^0"), Error);
}

TEST_CASE("text form and identifiers round-trip") {
  CHECK(make_regular(2).to_string() == "x^2");
  CHECK(make_regular(1).to_string() == "x");
  CHECK(irsa8_preset().to_string() == "0.5x^2+0.28x^3+0.22x^8");
  CHECK(distribution_id(irsa8_preset()) == "irsa8");
  CHECK(distribution_id(make_regular(3)) == "x^3");
  const DegreeDistribution mixed({{2, 0.25}, {5, 0.75}});
  CHECK(parse_distribution(mixed.to_string()) == mixed);
}
