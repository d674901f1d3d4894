#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>
#include <sstream>

#include "heisadams/rearrange.hpp"
#include "oracles.hpp"

using namespace heisadams;

namespace {

constexpr double kV = std::numbers::pi * std::numbers::pi / 2;  // |B_1|

// rho^{-2} with the origin node carrying its cell average.
GridField inverse_square(const DomainPtr& ball) {
  const auto w = ball->singular_weight(2.0);
  GridField g(ball);
  for (std::size_t o : ball->physical_nodes()) g[o] = (*w)[o];
  return g;
}

double brute_lp(const GridField& f, double p) {
  double s = 0.0;
  for (std::size_t o : f.domain().physical_nodes()) s += std::pow(std::abs(f[o]), p) * f.domain().measure(o);
  return s;
}

}  // namespace

TEST_CASE("distribution function") {
  const auto box = GridDomain::box(5, 1.0);
  const GridField c(box, 2.0);
  CHECK(distribution(c, 1.0) == doctest::Approx(8.0));
  CHECK(distribution(c, 2.0) == 0.0);
  CHECK(distribution(c, 3.0) == 0.0);

  // |{rho^{-2} > 4}| = |B_{1/2}| = V / 16
  const auto ball = GridDomain::koranyi_ball(49, 1.0);
  CHECK(distribution(inverse_square(ball), 4.0) == doctest::Approx(kV / 16).epsilon(0.05));

  std::mt19937_64 rng(2);
  const GridField f = oracle::random_physical(box, rng, -1, 1);
  double prev = distribution(f, -2.0);
  CHECK(prev == doctest::Approx(8.0));
  for (double s = -1.0; s <= 1.0; s += 0.05) {
    const double d = distribution(f, s);
    CHECK(d <= prev);
    prev = d;
  }
}

TEST_CASE("profile conventions") {
  const auto two = RearrangementProfile::from_pairs({{1.0, 0.5}, {3.0, 0.5}});
  CHECK(two(0.0) == 3.0);
  CHECK(two(0.25) == 3.0);
  CHECK(two(0.5) == 3.0);  // larger value at the jump
  CHECK(two(0.75) == 1.0);
  CHECK(two(1.0) == 1.0);
  CHECK(two(1.5) == 0.0);
  const auto step = RearrangementProfile::from_pairs({{3.0, 1.0}, {1.0, 1.0}});
  CHECK(double_star(step, 2.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(double_star(step, 0.5) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK_THROWS_AS(double_star(step, 0.0), std::invalid_argument);

  const auto box = GridDomain::box(5, 1.0);
  const auto cst = decreasing_rearrangement(GridField(box, 7.0));
  CHECK(cst.values().size() == box->node_count());
  CHECK(cst.total_measure() == doctest::Approx(8.0));
  for (double t : {0.1, 1.0, 5.0, 8.0}) {
    CHECK(cst(t) == 7.0);
    CHECK(double_star(cst, t) == doctest::Approx(7.0).epsilon(1e-14));
  }
}

TEST_CASE("equimeasurability is exact") {
  std::mt19937_64 rng(31);
  for (const auto& dom : {GridDomain::box(7, 1.0), GridDomain::koranyi_ball(9, 1.0)}) {
    GridField f = oracle::random_physical(dom, rng, -2, 2);
    GridField af(dom);
    for (std::size_t o : dom->physical_nodes()) af[o] = std::abs(f[o]);
    const auto p = decreasing_rearrangement(af);
    CHECK(p.total_measure() == doctest::Approx(dom->total_measure()).epsilon(1e-14));
    for (double q : {1.0, 2.0, 3.0}) CHECK(p.lp_integral(q) == doctest::Approx(brute_lp(f, q)).epsilon(1e-12));
  }
}

TEST_CASE("monotone maps commute with rearrangement") {
  std::mt19937_64 rng(12);
  const auto box = GridDomain::box(6, 1.0);
  const GridField f = oracle::random_physical(box, rng, 0, 3);
  GridField phi_f(box);
  auto phi = [](double v) { return v * v * v + std::tanh(v); };
  for (std::size_t o : box->physical_nodes()) phi_f[o] = phi(f[o]);
  const auto a = decreasing_rearrangement(phi_f);
  const auto b = decreasing_rearrangement(f);
  REQUIRE(a.values().size() == b.values().size());
  for (std::size_t i = 0; i < a.values().size(); ++i) {
    CHECK(a.values()[i] == phi(b.values()[i]));
    CHECK(a.ends()[i] == b.ends()[i]);
  }
}

TEST_CASE("f** dominates f* and decreases") {
  std::mt19937_64 rng(77);
  const auto box = GridDomain::box(6, 1.0);
  const auto p = decreasing_rearrangement(oracle::random_physical(box, rng, 0, 1));
  double prev = std::numeric_limits<double>::infinity();
  for (double t = 0.01; t < p.total_measure(); t += 0.013) {
    const double ds = double_star(p, t);
    CHECK(ds >= p(t) - 1e-15);
    CHECK(ds <= prev + 1e-15);
    prev = ds;
  }
}

TEST_CASE("inverse-square profile against the closed form") {
  // g*(t) = (V/t)^{1/2} and g** = 2 g*
  auto closed = [](double t) { return std::sqrt(kV / t); };
  for (double t : {0.1, 0.7, 2.0, 4.0}) {
    const double integral = 2.0 * std::sqrt(kV * t);  // int_0^t (V/s)^{1/2} ds
    CHECK(integral / t / (2.0 * closed(t)) == doctest::Approx(1.0).epsilon(1e-15));
  }
  const auto ball = GridDomain::koranyi_ball(49, 1.0);
  const auto p = decreasing_rearrangement(inverse_square(ball));
  const double omega = p.total_measure();
  double star = 0.0, ratio = 0.0;
  for (int i = 0; i <= 80; ++i) {
    const double t = omega * (0.1 + 0.8 * i / 80.0);
    star = std::max(star, std::abs(p(t) / closed(t) - 1.0));
    ratio = std::max(ratio, std::abs(double_star(p, t) / (2.0 * p(t)) - 1.0));
  }
  MESSAGE("max |f*/closed - 1| = " << star << ", max |f**/(2f*) - 1| = " << ratio);
  CHECK(star <= 0.02);
  CHECK(ratio <= 0.03);
}

TEST_CASE("Hardy-Littlewood slack") {
  std::mt19937_64 rng(5);
  const auto box = GridDomain::box(5, 1.0);
  const GridField f = oracle::random_physical(box, rng, -1, 1);
  CHECK(std::abs(hardy_littlewood_slack(f, GridField(box, 1.0))) <= 1e-13);
  CHECK(std::abs(hardy_littlewood_slack(f, f)) <= 1e-13);
  for (int rep = 0; rep < 100; ++rep) {
    const GridField a = oracle::random_physical(box, rng, -1, 1);
    const GridField b = oracle::random_physical(box, rng, -1, 1);
    CHECK(hardy_littlewood_slack(a, b) >= -1e-13);
  }
  CHECK_THROWS_AS(hardy_littlewood_slack(f, GridField(GridDomain::box(6, 1.0))), std::invalid_argument);
}

TEST_CASE("O'Neil inequality") {
  const auto box = GridDomain::box(5, 1.0);
  const RadialKernel g = [](double r) { return 1.0 / (r * r); };
  const double half = box->total_measure() / 2;
  CHECK(oneil_slack(GridField(box), g, half) >= 0.0);

  GridField one_cell(box);
  one_cell[box->offset(2, 2, 2)] = 1.0;
  CHECK(oneil_slack(one_cell, g, half) >= 0.0);

  std::mt19937_64 rng(99);
  for (int rep = 0; rep < 10; ++rep) {
    const GridField f = oracle::random_physical(box, rng, 0, 1);
    const ONeilReport r = oneil_check(f, g, half);
    CHECK(r.slack >= -1e-9 * r.scale);
  }
  CHECK_THROWS_AS(oneil_slack(one_cell, g, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(oneil_slack(one_cell, g, box->total_measure()), std::invalid_argument);
  CHECK_THROWS_AS(oneil_slack(one_cell, [](double) { return -1.0; }, half), std::invalid_argument);
}

TEST_CASE("one-dimensional reduction") {
  const auto box = GridDomain::box(9, 1.0);
  const OneDReduction z = one_d_reduction(GridField(box));
  CHECK(z.l2_defect == 0.0);
  for (double v : z.phi) CHECK(v == 0.0);

  const OneDReduction one = one_d_reduction(GridField(box, 1.0));
  const double omega = box->total_measure();
  for (std::size_t i = 0; i < one.s.size(); ++i)
    CHECK(one.phi[i] == doctest::Approx(std::sqrt(omega) * std::exp(-one.s[i] / 2)).epsilon(1e-14));
  long double trap = omega * std::exp(-(long double)one.s.back());
  for (std::size_t i = 1; i < one.s.size(); ++i)
    trap += 0.5L * (one.s[i] - one.s[i - 1]) *
            omega * (std::exp(-(long double)one.s[i]) + std::exp(-(long double)one.s[i - 1]));
  CHECK(one.integral_phi2 == doctest::Approx(static_cast<double>(trap)).epsilon(1e-12));
  CHECK(one.l2_defect / omega < 0.01);

  const auto ball = GridDomain::koranyi_ball(33, 1.0);
  const OneDReduction r = one_d_reduction(inverse_square(ball));
  CHECK(r.l2_defect / r.integral_f2 < 0.01);

  GridField neg(box, 0.0);
  neg[box->offset(4, 4, 4)] = -1.0;
  CHECK_THROWS_AS(one_d_reduction(neg), std::invalid_argument);
}

TEST_CASE("profile csv") {
  std::ostringstream os;
  write_profile_csv(os, RearrangementProfile::from_pairs({{2.0, 1.0}, {1.0, 0.5}}));
  CHECK(os.str() == "measure,value\n1,2\n1.5,1\n");
}
