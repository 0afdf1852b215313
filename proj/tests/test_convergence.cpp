#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "vibro/convergence.hpp"
#include "vibro/models.hpp"

using namespace vibro;

namespace {

SweepConfig dl1_logistic(ApproximationOrder order) {
  LogisticParams p;
  p.a_bar = 1.0;
  p.b_bar = 1.0;
  p.a_tilde = {{1, 1.0, 0.0}};
  p.b_tilde = {{2, 0.0, 1.0}};
  SweepConfig c;
  c.field = logistic_field(p);
  c.dl = DL::DL1;
  c.order = order;
  c.omegas = {100.0, 200.0, 400.0, 800.0};
  c.x0 = {0.5};
  return c;
}

}  // namespace

TEST_CASE("fit_slope: exact line") {
  const std::vector<double> xs{0.0, 1.0, 2.0, 3.0, 4.0};
  std::vector<double> ys;
  for (double x : xs) ys.push_back(2.0 * x + 1.0);
  const auto f = fit_slope(xs, ys);
  CHECK(f.slope == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(f.intercept == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(f.slope_stderr < 1e-12);
}

TEST_CASE("fit_slope: noisy line recovers the slope") {
  std::mt19937_64 rng(41);
  std::normal_distribution<double> noise(0.0, 1e-3);
  std::vector<double> xs, ys;
  for (int i = 0; i < 50; ++i) {
    const double x = -3.0 + 0.1 * i;
    xs.push_back(x);
    ys.push_back(x + 0.5 + noise(rng));
  }
  const auto f = fit_slope(xs, ys);
  CHECK(std::abs(f.slope - 1.0) < 0.01);
  CHECK(f.slope_stderr > 0.0);
  CHECK(f.slope_stderr < 1e-3);
}

TEST_CASE("fit_slope: invalid input") {
  const std::vector<double> two{1.0, 2.0};
  CHECK_THROWS_AS(fit_slope(two, two), std::invalid_argument);
  const std::vector<double> xs{1.0, 1.0, 2.0};
  const std::vector<double> ys{0.0, 1.0, 2.0};
  CHECK_THROWS_AS(fit_slope(xs, ys), std::invalid_argument);
  const std::vector<double> four{0.0, 1.0, 2.0, 3.0};
  CHECK_THROWS_AS(fit_slope(four, ys), std::invalid_argument);
}

TEST_CASE("log_ladder") {
  const auto l = log_ladder(1e2, 1e4, 5);
  REQUIRE(l.size() == 5);
  CHECK(l.front() == doctest::Approx(1e2));
  CHECK(l[2] == doctest::Approx(1e3));
  CHECK(l.back() == doctest::Approx(1e4));
  for (std::size_t i = 1; i < l.size(); ++i) CHECK(l[i] / l[i - 1] == doctest::Approx(std::sqrt(10.0)));
  CHECK_THROWS_AS(log_ladder(1.0, 1.0, 3), std::invalid_argument);
  CHECK_THROWS_AS(log_ladder(0.0, 1.0, 3), std::invalid_argument);
  CHECK_THROWS_AS(log_ladder(1.0, 2.0, 1), std::invalid_argument);
}

TEST_CASE("DL-1 zeroth-order sweep: decreasing errors, slope near one") {
  const auto r = epsilon_sweep(dl1_logistic(ApproximationOrder::zeroth));
  REQUIRE(r.points.size() == 4);
  for (std::size_t i = 0; i < r.points.size(); ++i) {
    CHECK_FALSE(r.points[i].failed);
    CHECK(r.points[i].epsilon == doctest::Approx(1.0 / r.points[i].omega));
    if (i > 0) CHECK(r.points[i].error < r.points[i - 1].error);
  }
  CHECK(std::abs(r.slope - 1.0) < 0.3);
  const auto errs = r.errors();
  CHECK(r.reference_error < 0.01 * *std::min_element(errs.begin(), errs.end()));
  CHECK_FALSE(r.config_echo.empty());
}

TEST_CASE("DL-1 first-order composite converges faster") {
  const auto r = epsilon_sweep(dl1_logistic(ApproximationOrder::first_composite));
  CHECK(r.slope >= 1.7);
  const auto z = epsilon_sweep(dl1_logistic(ApproximationOrder::zeroth));
  for (std::size_t i = 0; i < r.points.size(); ++i) CHECK(r.points[i].error < z.points[i].error);
}

TEST_CASE("slope does not depend much on the comparison window") {
  auto a = dl1_logistic(ApproximationOrder::zeroth);
  auto b = a;
  b.window = 1.0;
  const double sa = epsilon_sweep(a).slope;
  const double sb = epsilon_sweep(b).slope;
  CHECK(std::abs(sa - sb) < 0.2);
}

TEST_CASE("DL-2 Stokes sweep") {
  SweepConfig c;
  c.field = stokes_field(1.0);
  c.dl = DL::DL2;
  c.omegas = {100.0, 200.0, 400.0};
  c.window = 1.0;
  c.x0 = {0.3};
  const auto r = epsilon_sweep(c);
  CHECK(std::abs(r.slope - 1.0) < 0.3);
}

TEST_CASE("sweep validation") {
  auto c = dl1_logistic(ApproximationOrder::zeroth);
  auto bad = c;
  bad.omegas = {100.0, 200.0};
  CHECK_THROWS_AS(epsilon_sweep(bad), std::invalid_argument);
  bad = c;
  bad.omegas = {50.0, 200.0, 400.0};
  CHECK_THROWS_AS(epsilon_sweep(bad), std::invalid_argument);
  bad = c;
  bad.omegas = {100.0, 400.0, 200.0};
  CHECK_THROWS_AS(epsilon_sweep(bad), std::invalid_argument);
  bad = c;
  bad.window = 0.0;
  CHECK_THROWS_AS(epsilon_sweep(bad), std::invalid_argument);
  bad = c;
  bad.x0 = {0.5, 0.5};
  CHECK_THROWS_AS(epsilon_sweep(bad), std::invalid_argument);

  SweepConfig dl2;
  dl2.field = stokes_field(1.0);
  dl2.dl = DL::DL2;
  dl2.order = ApproximationOrder::first_composite;
  dl2.omegas = {100.0, 200.0, 400.0};
  dl2.x0 = {0.0};
  CHECK_THROWS_AS(epsilon_sweep(dl2), std::invalid_argument);

  SamplingDomain d;
  d.box = {{0.5, 2.0}};
  bad = c;
  bad.dl = DL::DL2;
  bad.check = d;
  CHECK_THROWS(epsilon_sweep(bad));
}

TEST_CASE("points over the step budget are marked failed and excluded from the fit") {
  auto c = dl1_logistic(ApproximationOrder::zeroth);
  c.omegas = {100.0, 200.0, 400.0, 800.0};
  // ω = 800 needs about 8150 steps over the window.
  c.max_steps = 5000.0;
  const auto r = epsilon_sweep(c);
  REQUIRE(r.points.size() == 4);
  CHECK(r.points[3].failed);
  CHECK_FALSE(r.points[3].diagnostic.empty());
  for (int i = 0; i < 3; ++i) CHECK_FALSE(r.points[i].failed);

  std::vector<double> xs, ys;
  for (int i = 0; i < 3; ++i) {
    xs.push_back(std::log(r.points[i].epsilon));
    ys.push_back(std::log(r.points[i].error));
  }
  CHECK(r.slope == doctest::Approx(fit_slope(xs, ys).slope));

  std::ostringstream csv;
  write_report_csv(csv, r);
  std::istringstream lines(csv.str());
  std::string line;
  int rows = 0;
  std::getline(lines, line);
  CHECK(line == "omega,epsilon,error");
  while (std::getline(lines, line)) ++rows;
  CHECK(rows == 3);

  c.max_steps = 2000.0;
  CHECK_THROWS_AS(epsilon_sweep(c), std::runtime_error);
}

TEST_CASE("summary CSV") {
  ConvergenceReport r;
  r.slope = 1.25;
  r.slope_stderr = 0.5;
  std::ostringstream out;
  write_summary_csv(out, r);
  CHECK(out.str() == "slope,stderr\n1.25,0.5\n");
}
