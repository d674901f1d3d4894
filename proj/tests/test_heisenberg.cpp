#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "heisadams/heisenberg.hpp"

using namespace heisadams;

namespace {

GaugePoint random_point(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  return {u(rng), u(rng), u(rng)};
}

bool near(const GaugePoint& p, const GaugePoint& q, double tol) {
  const double scale = 1.0 + std::abs(p.x) + std::abs(p.y) + std::abs(p.t);
  return std::abs(p.x - q.x) <= tol * scale && std::abs(p.y - q.y) <= tol * scale &&
         std::abs(p.t - q.t) <= tol * scale;
}

}  // namespace

TEST_CASE("group law examples") {
  const GaugePoint abc{1.5, -2.0, 0.25};
  CHECK(group_mul({0, 0, 0}, abc) == abc);
  CHECK(group_mul(abc, {0, 0, 0}) == abc);
  CHECK(group_mul({1, 0, 0}, {-1, 0, 0}) == GaugePoint{0, 0, 0});
  // t + t' + 2(y x' - x y') with (1,0,0), (0,1,0): 2(0 - 1) = -2
  CHECK(group_mul({1, 0, 0}, {0, 1, 0}) == GaugePoint{1, 1, -2});
  CHECK(group_mul({0, 1, 0}, {1, 0, 0}) == GaugePoint{1, 1, 2});
}

TEST_CASE("inverse is exact") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 100; ++i) {
    const GaugePoint p = random_point(rng);
    CHECK(group_mul(p, inverse(p)) == GaugePoint{0, 0, 0});
    CHECK(group_mul(inverse(p), p) == GaugePoint{0, 0, 0});
  }
}

TEST_CASE("gauge values") {
  CHECK(gauge({0, 0, 0}) == 0.0);
  CHECK(gauge({1, 0, 0}) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(gauge({0, 0, 4}) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(gauge({0.3, -0.4, 0.0}) == doctest::Approx(0.5).epsilon(1e-15));
  std::mt19937_64 rng(3);
  for (int i = 0; i < 50; ++i) CHECK(gauge(random_point(rng)) > 0.0);
}

TEST_CASE("dilation") {
  const GaugePoint p{1, 1, 5};
  CHECK(dilate(1.0, p) == p);
  CHECK(dilate(2.0, {1, 0, 1}) == GaugePoint{2, 0, 4});
  CHECK(gauge(dilate(3.0, p)) == doctest::Approx(3.0 * gauge(p)).epsilon(1e-14));
  CHECK_THROWS_AS(dilate(0.0, p), std::invalid_argument);
  CHECK_THROWS_AS(dilate(-1.0, p), std::invalid_argument);
}

TEST_CASE("associativity on random triples") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    const GaugePoint p = random_point(rng), q = random_point(rng), r = random_point(rng);
    CHECK(near(group_mul(group_mul(p, q), r), group_mul(p, group_mul(q, r)), 1e-14));
  }
}

TEST_CASE("dilation is a homomorphism in the standard order only") {
  std::mt19937_64 rng(5);
  int swapped_failures = 0;
  for (int i = 0; i < 100; ++i) {
    const GaugePoint p = random_point(rng), q = random_point(rng);
    const double lambda = 0.5 + i * 0.03;
    CHECK(near(dilate(lambda, group_mul(p, q)), group_mul(dilate(lambda, p), dilate(lambda, q)), 1e-13));
    if (!near(dilate(lambda, group_mul(p, q)), group_mul(dilate(lambda, q), dilate(lambda, p)), 1e-9))
      ++swapped_failures;
  }
  // The reversed product differs whenever p and q do not commute.
  CHECK(swapped_failures == 100);
}
