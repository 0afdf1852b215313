#include <doctest.h>

#include <cmath>
#include <random>

#include "vibro/averaging.hpp"
#include "vibro/models.hpp"

using namespace vibro;

namespace {

template <class F>
double brute_average(F f, int n = 4096) {
  double acc = 0.0;
  for (int i = 0; i < n; ++i) acc += f((i + 0.5) * two_pi / n);
  return acc / n;
}

double eval_terms(const std::vector<Harmonic>& h, double t) {
  double v = 0.0;
  for (const auto& term : h) v += term.cos_amp * std::cos(term.k * t) + term.sin_amp * std::sin(term.k * t);
  return v;
}

// Zero-mean antiderivative of a harmonic list.
double eval_primitive(const std::vector<Harmonic>& h, double t) {
  double v = 0.0;
  for (const auto& term : h) {
    const double k = static_cast<double>(term.k);
    v += term.cos_amp * std::sin(k * t) / k - term.sin_amp * std::cos(k * t) / k;
  }
  return v;
}

std::vector<Harmonic> random_harmonics(std::mt19937_64& rng, std::size_t count) {
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  std::vector<Harmonic> h;
  for (std::size_t k = 1; k <= count; ++k) h.push_back({k, amp(rng), amp(rng)});
  return h;
}

}  // namespace

TEST_CASE("TrigPolynomial products are exact") {
  const TrigPolynomial a({{1, 1.0, 0.5}, {3, -0.2, 0.0}}, 0.3);
  const TrigPolynomial b({{2, 0.0, 1.0}}, -1.0);
  const TrigPolynomial ab = a * b;
  CHECK(ab.degree() == 5);
  for (double t : {0.0, 0.4, 1.9, 3.7, 5.2}) CHECK(ab(t) == doctest::Approx(a(t) * b(t)).epsilon(1e-13));
  CHECK(ab.mean() == doctest::Approx(brute_average([&](double t) { return a(t) * b(t); })).epsilon(1e-12));
  const auto I = a.tilde_integral();
  CHECK(std::abs(I.mean()) < 1e-15);
  const double h = 1e-5;
  CHECK((I(1.0 + h) - I(1.0 - h)) / (2 * h) == doctest::Approx(a.oscillating()(1.0)).epsilon(1e-8));
  CHECK((2.0 * a + b)(0.7) == doctest::Approx(2.0 * a(0.7) + b(0.7)));
}

TEST_CASE("logistic field evaluation") {
  LogisticParams constant;
  constant.a_bar = 1.0;
  constant.b_bar = 1.0;
  const double x[] = {0.5};
  CHECK(evaluate(logistic_field(constant), x, 0.0, 1.3)[0] == doctest::Approx(0.25));

  LogisticParams osc;
  osc.a_tilde = {{1, 1.0, 0.0}};
  osc.b_tilde = {{2, 0.0, 1.0}};
  const auto f = logistic_field(osc);
  for (double xv : {0.5, 1.0, 3.0}) {
    const double xs[] = {xv};
    CHECK(std::abs(mean_part(f, xs, 0.0)[0]) < 1e-14);
  }
  const double zero[] = {0.0};
  for (double t : {0.0, 1.0, 2.0, 5.0}) CHECK(evaluate(f, zero, 0.0, t)[0] == 0.0);

  // a x − a b x² against a direct evaluation.
  const double x2[] = {1.7};
  for (double t : {0.3, 2.9}) {
    const double a = std::cos(t), b = std::sin(2 * t);
    CHECK(evaluate(f, x2, 0.0, t)[0] == doctest::Approx(a * 1.7 - a * b * 1.7 * 1.7));
  }
}

TEST_CASE("logistic drift coefficient K") {
  LogisticParams p;
  p.a_tilde = {{1, 1.0, 0.0}};
  p.b_tilde = {{2, 0.0, 1.0}};
  CHECK(logistic_drift_K(p) == doctest::Approx(0.25));
  CHECK(brute_average([](double t) { return std::sin(t) * std::cos(t) * std::sin(2 * t); }) ==
        doctest::Approx(0.25).epsilon(1e-12));

  LogisticParams cc;
  cc.a_bar = 2.3;
  cc.a_tilde = {{1, 1.0, 0.0}};
  cc.b_tilde = {{1, 1.0, 0.0}};
  CHECK(std::abs(logistic_drift_K(cc)) < 1e-15);

  LogisticParams none;
  none.a_bar = 1.0;
  none.b_tilde = {{1, 0.0, 1.0}};
  CHECK(logistic_drift_K(none) == 0.0);
}

TEST_CASE("logistic: generic drift_v2 matches -K x^2 and brute quadrature of K") {
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> ux(0.1, 3.0);
  for (int trial = 0; trial < 5; ++trial) {
    LogisticParams p;
    p.a_bar = trial % 2 ? 0.7 : 0.0;
    p.b_bar = trial % 2 ? -0.4 : 0.0;
    p.a_tilde = random_harmonics(rng, 3);
    p.b_tilde = random_harmonics(rng, 2);
    const double K_brute = brute_average([&](double t) {
                             return eval_primitive(p.a_tilde, t) * eval_terms(p.a_tilde, t) * eval_terms(p.b_tilde, t);
                           }) -
                           p.a_bar * brute_average([&](double t) {
                             return eval_terms(p.a_tilde, t) * eval_primitive(p.b_tilde, t);
                           });
    const double K = logistic_drift_K(p);
    CHECK(K == doctest::Approx(K_brute).epsilon(1e-12));
    const auto f = logistic_field(p);
    for (int n = 0; n < 10; ++n) {
      const double x[] = {ux(rng)};
      CHECK(std::abs(drift_v2(f, x, 0.0).value[0] + K * x[0] * x[0]) < 1e-9);
    }
  }
}

TEST_CASE("logistic mean quadratic coefficient") {
  LogisticParams p;
  p.a_bar = 1.0;
  p.b_bar = 1.0;
  p.a_tilde = {{1, 1.0, 0.0}};
  p.b_tilde = {{1, 1.0, 0.0}};
  CHECK(logistic_mean_c(p) == doctest::Approx(1.5));
  const double x[] = {0.8};
  CHECK(mean_part(logistic_field(p), x, 0.0)[0] == doctest::Approx(0.8 - 1.5 * 0.64));
}

TEST_CASE("logistic DL-2 closed form") {
  CHECK(logistic_dl2_exact(1.0, 0.25, 4.0) == doctest::Approx(0.5));
  CHECK(logistic_dl2_exact(1.7, 0.25, 0.0) == 1.7);
  CHECK(logistic_dl2_exact(1.7, 0.0, 9.0) == 1.7);
  CHECK(logistic_dl2_exact(1.0, 0.25, 3.0) < logistic_dl2_exact(1.0, 0.25, 2.0));
  CHECK(logistic_dl2_exact(1.0, -0.25, 3.0) > logistic_dl2_exact(1.0, -0.25, 2.0));
  try {
    logistic_dl2_exact(1.0, -0.25, 4.0);
    FAIL("expected blow-up");
  } catch (const std::domain_error& e) {
    CHECK(std::string(e.what()).find("finite-time blow-up of averaged model") != std::string::npos);
  }
}

TEST_CASE("logistic DL-1 closed form solves the averaged ODE") {
  const double a = 1.0, c = 1.0, x0 = 0.5;
  CHECK(logistic_dl1_exact(x0, a, c, 0.0) == x0);
  for (double t : {0.5, 1.0, 2.0}) {
    const double h = 1e-5;
    const double x = logistic_dl1_exact(x0, a, c, t);
    const double dx = (logistic_dl1_exact(x0, a, c, t + h) - logistic_dl1_exact(x0, a, c, t - h)) / (2 * h);
    CHECK(dx == doctest::Approx(a * x - c * x * x).epsilon(1e-8));
  }
  CHECK(logistic_dl1_exact(x0, a, c, 50.0) == doctest::Approx(a / c));
}

TEST_CASE("predator-prey drift coefficients") {
  PredatorPreyParams p;
  p.beta_tilde = {{1, 1.0, 0.0}};
  p.gamma_tilde = {{1, 0.0, 1.0}};
  const auto d = pp_drift_coeffs(p);
  CHECK(d.A == doctest::Approx(-0.5));
  CHECK(d.B == 0.0);
  CHECK(d.C == 0.0);

  const auto zero = pp_drift_coeffs(PredatorPreyParams{});
  CHECK(zero.A == 0.0);
  CHECK(zero.B == 0.0);
  CHECK(zero.C == 0.0);
}

TEST_CASE("predator-prey: generic drift matches (A, B, C) at random first-octant states") {
  std::mt19937_64 rng(67);
  std::uniform_real_distribution<double> u(0.05, 3.0);
  for (int trial = 0; trial < 3; ++trial) {
    PredatorPreyParams p;
    p.alpha_tilde = random_harmonics(rng, 2);
    p.beta_tilde = random_harmonics(rng, 3);
    p.gamma_tilde = random_harmonics(rng, 2);
    p.mu_tilde = random_harmonics(rng, 3);
    const auto d = pp_drift_coeffs(p);
    auto avg = [](const std::vector<Harmonic>& f, const std::vector<Harmonic>& g) {
      return brute_average([&](double t) { return eval_terms(f, t) * eval_primitive(g, t); });
    };
    CHECK(d.A == doctest::Approx(avg(p.beta_tilde, p.gamma_tilde)).epsilon(1e-12));
    CHECK(d.B == doctest::Approx(avg(p.beta_tilde, p.mu_tilde)).epsilon(1e-12));
    CHECK(d.C == doctest::Approx(avg(p.alpha_tilde, p.mu_tilde)).epsilon(1e-12));
    const auto f = predator_prey_field(p);
    for (int n = 0; n < 17; ++n) {
      const double x[] = {u(rng), u(rng)};
      const Vec v = drift_v2(f, x, 0.0).value;
      const Vec w = d.drift(x[0], x[1]);
      CHECK(std::abs(v[0] - w[0]) < 1e-9);
      CHECK(std::abs(v[1] - w[1]) < 1e-9);
    }
  }
}

TEST_CASE("predator-prey: drift vanishes at (A/B, C/B)") {
  PredatorPreyParams p;
  p.alpha_tilde = {{1, 1.0, 0.0}};
  p.beta_tilde = {{1, 1.0, 0.0}};
  p.gamma_tilde = {{1, 0.0, 1.0}};
  p.mu_tilde = {{1, 0.0, 1.0}};
  const auto d = pp_drift_coeffs(p);
  REQUIRE(d.B != 0.0);
  const double x[] = {d.A / d.B, d.C / d.B};
  for (double v : drift_v2(predator_prey_field(p), x, 0.0).value) CHECK(std::abs(v) < 1e-12);
  CHECK(d.integral(x[0], x[1]) == doctest::Approx(0.0));
  CHECK(d.integral(0.5, 0.5) == doctest::Approx((0.5 - d.A / d.B) * (0.5 - d.C / d.B)));
}

TEST_CASE("predator-prey case checks") {
  PredatorPreyParams p;
  p.alpha_tilde = {{1, 1.0, 0.0}};
  CHECK_NOTHROW(p.check_case(DL::DL2));
  CHECK_THROWS_AS(p.check_case(DL::DL1), std::invalid_argument);
  p.alpha_bar = 1.0;
  CHECK_THROWS_AS(p.check_case(DL::DL2), std::invalid_argument);
  p.beta_bar = p.gamma_bar = p.mu_bar = 1.0;
  CHECK_NOTHROW(p.check_case(DL::DL1));
}

TEST_CASE("predator-prey field evaluation and analytic Jacobian") {
  PredatorPreyParams p;
  p.alpha_bar = 1.0;
  p.beta_bar = 0.5;
  p.gamma_bar = 0.8;
  p.mu_bar = 0.3;
  p.beta_tilde = {{1, 1.0, 0.0}};
  const auto f = predator_prey_field(p);
  const double x[] = {1.2, 0.7};
  const double t = 0.9;
  const double beta = 0.5 + std::cos(t);
  const Vec v = evaluate(f, x, 0.0, t);
  CHECK(v[0] == doctest::Approx(1.0 * 1.2 - beta * 1.2 * 0.7));
  CHECK(v[1] == doctest::Approx(-0.8 * 0.7 + 0.3 * 1.2 * 0.7));
  REQUIRE(f.has_jacobian());
  const OscillatoryField plain(2, [f](std::span<const double> y, double s, double tau, std::span<double> out) {
    f.eval_into(y, s, tau, out);
  });
  CHECK((jacobian(f, x, 0.0, JacobianAt::phase(t)) - jacobian(plain, x, 0.0, JacobianAt::phase(t))).max_abs() < 1e-6);
}

TEST_CASE("linear Fourier fields") {
  const double a[] = {0.0, 1.0, -1.0, 0.0};
  const double b[] = {2.0, 0.0, 0.0, 0.5};
  const Matrix A = Matrix::from_rows(2, 2, a);
  const Matrix B = Matrix::from_rows(2, 2, b);
  const auto f = linear_fourier_field(2, AffineMap{{}, Vec{0.1, -0.2}}, {LinearHarmonic{1, {A, {}}, {}}, LinearHarmonic{3, {}, {B, Vec{1.0, 0.0}}}});
  REQUIRE(f.fourier() != nullptr);
  const double x[] = {0.4, -0.9};
  for (double t : {0.0, 1.1, 4.0}) {
    const Vec ax = A.apply(x), bx = B.apply(x);
    const Vec v = evaluate(f, x, 0.0, t);
    CHECK(v[0] == doctest::Approx(0.1 + ax[0] * std::cos(t) + (bx[0] + 1.0) * std::sin(3 * t)));
    CHECK(v[1] == doctest::Approx(-0.2 + ax[1] * std::cos(t) + bx[1] * std::sin(3 * t)));
  }
  CHECK(mean_part(f, x, 0.0)[0] == doctest::Approx(0.1));
}

TEST_CASE("standing wave values") {
  const auto sw = standing_wave_field(1, [](std::span<const double> x) { return Vec{x[0] * x[0]}; });
  const double x[] = {1.5};
  CHECK(evaluate(sw, x, 0.0, 0.0)[0] == doctest::Approx(2.25));
  CHECK(evaluate(sw, x, 0.0, M_PI / 2)[0] == doctest::Approx(0.0).epsilon(1e-12));
}
