#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "heisadams/linalg.hpp"
#include "heisadams/operators.hpp"
#include "heisadams/quadrature.hpp"
#include "heisadams/varsolve.hpp"
#include "oracles.hpp"

using namespace heisadams;

namespace {

// 1/2 h^3 <u, Delta_H^2 u> - sum F w mu by a plain loop.
double energy_oracle(const GridField& u, const NonlinearitySpec& nl, double a) {
  const auto& d = u.domain();
  const GridField b = bilaplacian(u);
  const auto w = d.singular_weight(a);
  long double quad = 0.0, pot = 0.0;
  for (std::size_t o : d.unknowns()) {
    quad += static_cast<long double>(u[o]) * b[o];
    pot += static_cast<long double>(nl.big_f(d.coordinate_of(o), u[o])) * (*w)[o] * d.measure(o);
  }
  return static_cast<double>(0.5L * quad * d.cell_volume() - pot);
}

double directional(const GridField& u, const GridField& v, const NonlinearitySpec& nl, double a,
                   double eps) {
  GridField up = u, um = u;
  up.axpy(eps, v);
  um.axpy(-eps, v);
  return (energy(up, nl, a) - energy(um, nl, a)) / (2 * eps);
}

double norm(const GridField& u) { return std::sqrt(biharmonic_form(u, u)); }

}  // namespace

TEST_CASE("energy matches a direct sum") {
  std::mt19937_64 rng(4);
  const auto box = GridDomain::box(9, 1.0);
  for (double a : {0.0, 1.0, 3.0}) {
    const GridField u = oracle::random_field(box, rng);
    for (const auto& nl : {cubic_nonlinearity(), critical_nonlinearity(2.0, 1.0), zero_nonlinearity()})
      CHECK(energy(u, nl, a) == doctest::Approx(energy_oracle(u, nl, a)).epsilon(1e-12));
  }
  const GridField z(box);
  CHECK(energy(z, cubic_nonlinearity(), 1.0) == 0.0);
  CHECK_THROWS_AS(energy(z, cubic_nonlinearity(), 4.0), std::invalid_argument);
  CHECK_THROWS_AS(grad_energy(z, cubic_nonlinearity(), -1.0), std::invalid_argument);
}

TEST_CASE("gradient against central differences") {
  std::mt19937_64 rng(8);
  for (const auto& dom : {GridDomain::box(9, 1.0), GridDomain::koranyi_ball(11, 1.0)})
    for (const auto& nl : {cubic_nonlinearity(), critical_nonlinearity(3.0, 1.0)})
      for (double a : {0.0, 1.0}) {
        for (int rep = 0; rep < 3; ++rep) {
          const GridField u = oracle::random_field(dom, rng, -0.8, 0.8);
          const GridField v = oracle::random_field(dom, rng);
          const double fd = directional(u, v, nl, a, 1e-5);
          const double an = dom->cell_volume() * unknown_dot(grad_energy(u, nl, a), v);
          CHECK(std::abs(fd - an) <= 1e-6 * std::max({1.0, std::abs(fd), std::abs(an)}));
        }
      }
}

TEST_CASE("gradient of the quadratic part is exact") {
  // f = 0: the directional derivative of 1/2 B(u,u) is B(u,v)
  std::mt19937_64 rng(3);
  const auto box = GridDomain::box(7, 1.0);
  const GridField u = oracle::random_field(box, rng);
  const GridField v = oracle::random_field(box, rng);
  const double an = box->cell_volume() * unknown_dot(grad_energy(u, zero_nonlinearity(), 2.0), v);
  CHECK(an == doctest::Approx(biharmonic_form(u, v)).epsilon(1e-12));
}

TEST_CASE("dual residual") {
  std::mt19937_64 rng(6);
  const auto box = GridDomain::box(9, 1.0);
  const GridField u = oracle::random_field(box, rng);
  // for f = 0 the representer is bilaplacian(u) and its dual norm is ||u||
  GridField riesz;
  const double r = dual_residual(grad_energy(u, zero_nonlinearity(), 0.0), 1e-12, &riesz);
  CHECK(r == doctest::Approx(norm(u)).epsilon(1e-8));
  double dev = 0.0;
  for (std::size_t o : box->unknowns()) dev = std::max(dev, std::abs(riesz[o] - u[o]));
  CHECK(dev <= 1e-7);
}

TEST_CASE("Rayleigh quotient") {
  std::mt19937_64 rng(10);
  const auto box = GridDomain::box(9, 1.0);
  const GridField u = oracle::random_field(box, rng);
  const double q = rayleigh_quotient(u, 1.0);
  CHECK(rayleigh_quotient(-3.5 * u, 1.0) == doctest::Approx(q).epsilon(1e-13));
  CHECK(q >= oracle::dense_lambda(box, 1.0) * (1 - 1e-12));
  CHECK_THROWS_AS(rayleigh_quotient(GridField(box), 1.0), std::invalid_argument);
}

TEST_CASE("Lambda against the dense eigensolver") {
  for (const auto& dom : {GridDomain::box(9, 1.0), GridDomain::koranyi_ball(9, 1.0)})
    for (double a : {0.0, 1.0, 2.0}) {
      const double exact = oracle::dense_lambda(dom, a);
      const LambdaEstimate l = lambda_estimate(dom, a, 1e-10);
      CHECK(l.converged);
      CHECK(exact > 0.0);
      CHECK(l.value == doctest::Approx(exact).epsilon(1e-8));
      CHECK(rayleigh_quotient(l.eigenvector, a) == doctest::Approx(l.value).epsilon(1e-9));
    }
}

TEST_CASE("hypothesis validation") {
  const double lam = 50.0;
  const auto cubic = validate_hypotheses(cubic_nonlinearity(), 1.0, lam);
  CHECK(cubic.checks.size() == 6);
  CHECK(cubic.all_passed({"primitive", "H1", "H2", "H3", "H4", "H5"}));
  CHECK_FALSE(cubic.checks[5].applicable);
  CHECK(cubic.checks[2].worst == doctest::Approx(10.0 / 4).epsilon(1e-12));  // F/f = u/4 at u_max

  // M below the sampled need fails H2
  CHECK_FALSE(validate_hypotheses(cubic_nonlinearity(1.0, 2.0), 1.0, lam).passed("H2"));

  // linear f: theta F - u f = (theta/2 - 1) u^2 > 0 and 2F/u^2 = c
  NonlinearitySpec lin = cubic_nonlinearity();
  lin.name = "linear";
  lin.f = [](const GaugePoint&, double u) { return 60.0 * u; };
  lin.big_f = [](const GaugePoint&, double u) { return 30.0 * u * u; };
  const auto rl = validate_hypotheses(lin, 1.0, lam);
  CHECK(rl.passed("primitive"));
  CHECK(rl.passed("H1"));
  CHECK_FALSE(rl.passed("H3"));
  CHECK_FALSE(rl.passed("H4"));
  CHECK(rl.checks[4].worst == doctest::Approx(60.0).epsilon(1e-12));
  CHECK(validate_hypotheses(lin, 1.0, 61.0).passed("H4"));

  NonlinearitySpec wrong = cubic_nonlinearity();
  wrong.big_f = [](const GaugePoint&, double u) { return 0.3 * u * u * u * u; };
  CHECK_FALSE(validate_hypotheses(wrong, 1.0, lam).passed("primitive"));

  NonlinearitySpec odd_sign = cubic_nonlinearity();
  odd_sign.f = [](const GaugePoint&, double u) { return -u * u * u; };
  odd_sign.big_f = [](const GaugePoint&, double u) { return -0.25 * u * u * u * u; };
  CHECK_FALSE(validate_hypotheses(odd_sign, 1.0, lam).passed("H1"));

  // critical: u f exp(-alpha0 u^2) = lambda u^2
  SamplePlan plan;
  plan.u_max = 3.0;
  plan.m_estimate = 10.0;
  const auto crit = critical_nonlinearity(2.0, 1.0, 4.0, 1.0);
  const auto rc = validate_hypotheses(crit, 1.0, lam, plan);
  CHECK(rc.all_passed({"primitive", "H1", "H2", "H3", "H4", "H5"}));
  CHECK(rc.checks[5].worst == doctest::Approx(3.0 * 32.0 / 9.0 / (4.0 * 10.0)).epsilon(1e-14));
  plan.m_estimate = 0.1;
  CHECK_FALSE(validate_hypotheses(crit, 1.0, lam, plan).passed("H5"));
  plan.m_estimate = 10.0;
  CHECK_FALSE(validate_hypotheses(critical_nonlinearity(2.0, 1.0, 4.0, 19.0), 1.0, lam, plan).passed("H5"));
  CHECK_FALSE(validate_hypotheses(crit, 1.0, 1.5, plan).passed("H4"));
  CHECK_THROWS_AS(rc.passed("H9"), std::invalid_argument);
}

TEST_CASE("level bound") {
  const auto c = closed_form_constants();
  CHECK(level_bound(0.0, c.big_a, c) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(level_bound(2.0, 1.0, c) == doctest::Approx(8.0 / 9.0).epsilon(1e-15));
  CHECK_THROWS_AS(level_bound(1.0, 0.0, c), std::invalid_argument);
  CHECK_THROWS_AS(level_bound(4.0, 1.0, c), std::invalid_argument);
}

TEST_CASE("mountain-pass geometry") {
  const auto box = GridDomain::box(9, 1.0);
  const GridField bump = default_bump(box);
  for (std::size_t o : box->unknowns()) CHECK(bump[o] > 0.0);
  const auto cubic = cubic_nonlinearity();
  // J(t u0) = t^2 B/2 - t^4 P/4: positive near zero, eventually negative
  double prev = energy(bump, cubic, 1.0);
  CHECK(energy(1e-3 * bump, cubic, 1.0) > 0.0);
  for (double t = 2.0; t < 1e4; t *= 2) {
    const double e = energy(t * bump, cubic, 1.0);
    if (t > 100) CHECK(e < prev);
    prev = e;
  }
  CHECK(prev < 0.0);

  const auto r = mountain_pass_solve(zero_nonlinearity(), 1.0, box);
  CHECK(r.state.status == SolveStatus::GeometryFailure);
  CHECK(std::string(to_string(r.state.status)) == std::string(to_string(SolveStatus::GeometryFailure)));
}

TEST_CASE("cubic mountain-pass solution") {
  const auto box = GridDomain::box(17, 1.0);
  const double a = 1.0;
  const auto cubic = cubic_nonlinearity();
  const auto res = mountain_pass_solve(cubic, a, box);
  const auto& st = res.state;
  REQUIRE(st.converged());
  const double nu = norm(res.u);
  CHECK(nu > 1.0);
  CHECK(st.grad_residual <= 1e-6 * std::max(1.0, nu));
  CHECK(dual_residual(grad_energy(res.u, cubic, a), 1e-12) <= 1.01e-6 * std::max(1.0, nu));
  const double j = energy(res.u, cubic, a);
  CHECK(j > 0.0);
  CHECK(st.level_estimate == doctest::Approx(j).epsilon(1e-9));
  REQUIRE_FALSE(st.history.empty());
  for (std::size_t i = 1; i < st.history.size(); ++i) CHECK(st.history[i].level <= st.history[i - 1].level);
  CHECK(st.endpoint_energy < 0.0);

  // Nehari identity ||u||^2 = int u f(u) / rho^a at a critical point
  GridField fu(box);
  for (std::size_t o : box->unknowns()) fu[o] = res.u[o] * cubic.f({}, res.u[o]);
  const double int_fu = integrate_weighted(fu, a);
  CHECK(int_fu == doctest::Approx(nu * nu).epsilon(1e-5));
  // int u^2 / rho^a <= ||u||^2 / Lambda
  const LambdaEstimate lam = lambda_estimate(box, a, 1e-10);
  GridField sq(box);
  for (std::size_t o : box->unknowns()) sq[o] = res.u[o] * res.u[o];
  CHECK(integrate_weighted(sq, a) <= nu * nu / lam.value * (1 + 1e-9));
}

TEST_CASE("critical continuation") {
  CHECK(continuation_exponent(1) == 3.0);
  CHECK(continuation_exponent(4) == 3.75);
  const auto box = GridDomain::box(13, 1.0);
  const ContinuationResult res = critical_continuation(cubic_nonlinearity(), 6, box);
  REQUIRE(res.steps.size() == 6);
  CHECK(res.completed);
  CHECK(res.tail_decreasing);
  for (std::size_t i = 0; i < res.steps.size(); ++i) {
    const auto& s = res.steps[i];
    CHECK(s.n == static_cast<int>(i + 1));
    CHECK(s.a == continuation_exponent(s.n));
    CHECK(s.status == SolveStatus::Converged);
    CHECK(std::isfinite(s.int_fu));
    CHECK(std::isfinite(s.int_big_f));
    CHECK(s.residual <= 1e-6 * std::max(1.0, s.norm));
    if (i == 0) CHECK(s.diff_norm == 0.0);
    if (i > 0) CHECK(s.diff_norm == doctest::Approx(norm(s.u - res.steps[i - 1].u)).epsilon(1e-12));
  }
}
