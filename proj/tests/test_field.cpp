#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "support/random_fields.hpp"
#include "vibro/field.hpp"
#include "vibro/models.hpp"
#include "vibro/spectral.hpp"

using namespace vibro;

namespace {

OscillatoryField scalar_field(std::function<double(double x, double s, double tau)> f) {
  return OscillatoryField(1, [f](std::span<const double> x, double s, double tau, std::span<double> out) {
    out[0] = f(x[0], s, tau);
  });
}

}  // namespace

TEST_CASE("tau grid geometry and validation") {
  const TauGrid g(8);
  CHECK(g.size() == 8);
  CHECK(g.max_harmonic() == 3);
  CHECK(g.tau(2) == doctest::Approx(two_pi / 4));
  CHECK_THROWS_AS(TauGrid(7), std::invalid_argument);
  CHECK_THROWS_AS(TauGrid(2), std::invalid_argument);
  CHECK(TauGrid::standard().size() == 256);
}

TEST_CASE("reduce_phase lands in [0, 2pi)") {
  for (double t : {-7.0, -two_pi, 0.0, 1.0, two_pi, 1e6 + 0.25}) {
    const double r = reduce_phase(t);
    CHECK(r >= 0.0);
    CHECK(r < two_pi);
    CHECK(std::cos(r) == doctest::Approx(std::cos(t)).epsilon(1e-9));
  }
}

TEST_CASE("harmonic series: project, evaluate, tilde integral, derivative") {
  const TauGrid g(64);
  std::vector<double> samples(g.size());
  for (std::size_t n = 0; n < g.size(); ++n) {
    const double t = g.tau(n);
    samples[n] = 0.5 + 2.0 * std::cos(t) - 0.25 * std::sin(3.0 * t);
  }
  const auto h = HarmonicSeries::project(samples, 1, g, 4);
  CHECK(h.mean()[0] == doctest::Approx(0.5));
  CHECK(h.cos(1)[0] == doctest::Approx(2.0));
  CHECK(h.sin(3)[0] == doctest::Approx(-0.25));
  CHECK(std::abs(h.cos(2)[0]) < 1e-14);
  for (double t : {0.1, 1.7, 4.0}) CHECK(h(t)[0] == doctest::Approx(0.5 + 2.0 * std::cos(t) - 0.25 * std::sin(3.0 * t)));

  const auto I = h.tilde_integral();
  CHECK(I.mean()[0] == 0.0);
  CHECK(I.sin(1)[0] == doctest::Approx(2.0));
  CHECK(I.cos(3)[0] == doctest::Approx(0.25 / 3.0));
  const auto back = I.derivative();
  for (double t : {0.3, 2.2, 5.9}) CHECK(back(t)[0] == doctest::Approx(h.oscillating()(t)[0]));
  CHECK(h.oscillating_energy() == doctest::Approx(0.5 * (4.0 + 0.0625)));
  CHECK(h.energy_above(1) == doctest::Approx(0.5 * 0.0625));
}

TEST_CASE("evaluate: definitional examples") {
  const double x0[] = {0.0};
  CHECK(evaluate(stokes_field(1.0), x0, 0.0, 0.0)[0] == doctest::Approx(1.0));

  const auto sw = standing_wave_field(1, [](std::span<const double> x) { return Vec{x[0]}; });
  const double x2[] = {2.0};
  CHECK(evaluate(sw, x2, 0.0, M_PI)[0] == doctest::Approx(-2.0));
}

TEST_CASE("evaluate rejects non-finite output naming the coordinate") {
  const OscillatoryField bad(3, [](std::span<const double>, double, double, std::span<double> out) {
    out[0] = 1.0;
    out[1] = std::numeric_limits<double>::quiet_NaN();
    out[2] = 0.0;
  });
  const double x[] = {0.0, 0.0, 0.0};
  try {
    evaluate(bad, x, 0.0, 0.0);
    FAIL("expected NonFiniteValue");
  } catch (const NonFiniteValue& e) {
    CHECK(e.coordinate() == 1);
    CHECK(std::string(e.what()).find("1") != std::string::npos);
  }
}

TEST_CASE("periodicity: tau and tau + 2pi agree to machine precision") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  const auto spec = testing::random_field_spec(rng, 2, 3, true);
  const auto fields = {testing::sampled_field(spec), testing::fourier_backed_field(spec), stokes_field(2.0)};
  for (const auto& f : fields) {
    for (int n = 0; n < 100; ++n) {
      Vec x = testing::random_point(rng, f.dim());
      const double s = u(rng);
      const double tau = u(rng);
      const Vec a = evaluate(f, x, s, tau);
      const Vec b = evaluate(f, x, s, tau + two_pi);
      for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-14 * (1.0 + std::abs(a[i])));
    }
  }
}

TEST_CASE("fit_fourier: single and shifted harmonics") {
  const auto f1 = scalar_field([](double, double, double t) { return std::cos(t); });
  const double x[] = {0.0};
  const auto c1 = fit_fourier(f1, 2).coefficients(x, 0.0);
  CHECK(c1.cos(1)[0] == doctest::Approx(1.0));
  for (double v : {c1.mean()[0], c1.sin(1)[0], c1.cos(2)[0], c1.sin(2)[0]}) CHECK(std::abs(v) < 1e-14);

  const auto f2 = scalar_field([](double, double, double t) { return 3.0 + std::sin(2.0 * t); });
  const auto ff2 = fit_fourier(f2, 2);
  const auto c2 = ff2.coefficients(x, 0.0);
  CHECK(c2.mean()[0] == doctest::Approx(3.0));
  CHECK(c2.sin(2)[0] == doctest::Approx(1.0));
  CHECK(std::abs(c2.cos(1)[0]) < 1e-14);
  CHECK(ff2.aliasing_warning.empty());
}

TEST_CASE("fit_fourier round trip on the Stokes field at 17 random phases") {
  const auto f = stokes_field(1.0);
  FitOptions opts;
  opts.probes = {{Vec{0.7}, 0.0}};
  const auto fit = fit_fourier(f, 2, opts);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, two_pi);
  const double x[] = {0.7};
  const auto c = fit.coefficients(x, 0.0);
  CHECK(c.cos(1)[0] == doctest::Approx(std::cos(0.7)));
  CHECK(c.sin(1)[0] == doctest::Approx(std::sin(0.7)));
  for (int n = 0; n < 17; ++n) {
    const double t = u(rng);
    CHECK(std::abs(fit.evaluate(x, 0.0, t)[0] - evaluate(f, x, 0.0, t)[0]) < 1e-12);
  }
}

TEST_CASE("fit_fourier flags truncated energy") {
  const auto f = scalar_field([](double, double, double t) { return std::cos(t) + 0.1 * std::cos(5.0 * t); });
  CHECK_FALSE(fit_fourier(f, 2).aliasing_warning.empty());
  CHECK(fit_fourier(f, 5).aliasing_warning.empty());
}

TEST_CASE("fit_fourier is idempotent on band-limited fields") {
  std::mt19937_64 rng(3);
  const auto spec = testing::random_field_spec(rng, 2, 3, true);
  const auto direct = OscillatoryField::from_fourier(fit_fourier(testing::sampled_field(spec), 3));
  const auto refit = OscillatoryField::from_fourier(fit_fourier(direct, 3));
  for (int n = 0; n < 10; ++n) {
    const Vec x = testing::random_point(rng, 2);
    const auto a = direct.fourier()->coefficients(x, 0.3);
    const auto b = refit.fourier()->coefficients(x, 0.3);
    for (std::size_t i = 0; i < a.coefficients().size(); ++i)
      CHECK(std::abs(a.coefficients()[i] - b.coefficients()[i]) < 1e-12);
  }
}

TEST_CASE("mean and oscillating parts") {
  const auto f = scalar_field([](double, double, double t) { return 2.0 + std::cos(t); });
  const double x[] = {0.0};
  CHECK(mean_part(f, x, 0.0)[0] == doctest::Approx(2.0));
  CHECK(osc_part(f, x, 0.0, 0.4)[0] == doctest::Approx(std::cos(0.4)));

  // u = x − x² cos τ: the cos τ term averages out, leaving x.
  const auto g = scalar_field([](double x, double, double t) { return x - x * x * std::cos(t); });
  const double x2[] = {2.0};
  CHECK(mean_part(g, x2, 0.0)[0] == doctest::Approx(2.0));

  const TauGrid& grid = TauGrid::standard();
  std::mt19937_64 rng(9);
  const auto spec = testing::random_field_spec(rng, 3, 4, true);
  for (const auto& field : {testing::sampled_field(spec), testing::fourier_backed_field(spec)}) {
    const Vec xr = testing::random_point(rng, 3);
    Vec avg(3, 0.0);
    for (std::size_t n = 0; n < grid.size(); ++n) {
      const Vec o = osc_part(field, xr, 0.2, grid.tau(n));
      for (std::size_t i = 0; i < 3; ++i) avg[i] += o[i] / static_cast<double>(grid.size());
    }
    for (double v : avg) CHECK(std::abs(v) < 1e-12);
  }
}

TEST_CASE("decomposition: evaluate = mean_part + osc_part for Fourier-backed fields") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  const auto field = testing::fourier_backed_field(testing::random_field_spec(rng, 2, 4, true));
  for (int n = 0; n < 50; ++n) {
    const Vec x = testing::random_point(rng, 2);
    const double s = u(rng), tau = u(rng);
    const Vec e = evaluate(field, x, s, tau);
    const Vec m = mean_part(field, x, s);
    const Vec o = osc_part(field, x, s, tau);
    for (std::size_t i = 0; i < 2; ++i) CHECK(std::abs(e[i] - m[i] - o[i]) < 1e-12);
  }
}

TEST_CASE("sampling domain validation and lattice") {
  SamplingDomain d;
  d.box = {{0.0, 1.0}, {-1.0, 1.0}};
  d.x_grid_points_per_axis = 3;
  CHECK_NOTHROW(d.validate());
  const auto pts = d.x_points();
  CHECK(pts.size() == 9);
  CHECK(pts.front() == Vec{0.0, -1.0});
  CHECK(pts.back() == Vec{1.0, 1.0});

  SamplingDomain bad = d;
  bad.box[0] = {1.0, 1.0};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = d;
  bad.tau_samples_per_period = 7;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("scaled field multiplies values, Jacobian and Fourier record") {
  const auto f = stokes_field(1.0).scaled(3.0);
  const double x[] = {0.4};
  CHECK(evaluate(f, x, 0.0, 1.0)[0] == doctest::Approx(3.0 * std::cos(0.4 - 1.0)));
  REQUIRE(f.has_jacobian());
  double j = 0.0;
  f.jacobian_into(x, 0.0, 1.0, std::span<double>(&j, 1));
  CHECK(j == doctest::Approx(-3.0 * std::sin(0.4 - 1.0)));
}
