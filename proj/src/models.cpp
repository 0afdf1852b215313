#include "vibro/models.hpp"

#include <cmath>
#include <memory>
#include <sstream>
#include <stdexcept>

namespace vibro {

TrigPolynomial::TrigPolynomial(const std::vector<Harmonic>& terms, double mean) {
  std::size_t deg = 0;
  for (const auto& h : terms) {
    if (h.k == 0) throw std::invalid_argument("TrigPolynomial: harmonic index must be >= 1");
    deg = std::max(deg, h.k);
  }
  resize(deg);
  cos_[0] = mean;
  for (const auto& h : terms) {
    cos_[h.k] += h.cos_amp;
    sin_[h.k] += h.sin_amp;
  }
}

void TrigPolynomial::resize(std::size_t degree) {
  if (cos_.size() < degree + 1) {
    cos_.resize(degree + 1, 0.0);
    sin_.resize(degree + 1, 0.0);
  }
}

double TrigPolynomial::operator()(double tau) const {
  if (cos_.empty()) return 0.0;
  double v = cos_[0];
  const double c1 = std::cos(tau);
  const double s1 = std::sin(tau);
  double ck = c1;
  double sk = s1;
  for (std::size_t k = 1; k < cos_.size(); ++k) {
    v += cos_[k] * ck + sin_[k] * sk;
    const double cn = ck * c1 - sk * s1;
    sk = sk * c1 + ck * s1;
    ck = cn;
  }
  return v;
}

TrigPolynomial TrigPolynomial::oscillating() const {
  TrigPolynomial r = *this;
  if (!r.cos_.empty()) r.cos_[0] = 0.0;
  return r;
}

TrigPolynomial TrigPolynomial::tilde_integral() const {
  TrigPolynomial r;
  r.resize(degree());
  for (std::size_t k = 1; k < cos_.size(); ++k) {
    const double kk = static_cast<double>(k);
    r.sin_[k] = cos_[k] / kk;
    r.cos_[k] = -sin_[k] / kk;
  }
  return r;
}

TrigPolynomial operator*(const TrigPolynomial& a, const TrigPolynomial& b) {
  TrigPolynomial r;
  if (a.cos_.empty() || b.cos_.empty()) return r;
  r.resize(a.degree() + b.degree());
  // cos p cos q = ½[cos(p−q) + cos(p+q)], sin p sin q = ½[cos(p−q) − cos(p+q)],
  // sin p cos q = ½[sin(p+q) + sin(p−q)].
  auto add_cos = [&](long m, double v) { r.cos_[static_cast<std::size_t>(std::labs(m))] += v; };
  auto add_sin = [&](long m, double v) {
    if (m == 0) return;
    if (m > 0) r.sin_[static_cast<std::size_t>(m)] += v;
    else r.sin_[static_cast<std::size_t>(-m)] -= v;
  };
  for (std::size_t p = 0; p < a.cos_.size(); ++p) {
    for (std::size_t q = 0; q < b.cos_.size(); ++q) {
      const long lp = static_cast<long>(p);
      const long lq = static_cast<long>(q);
      const double cc = a.cos_[p] * b.cos_[q];
      const double ss = a.sin_[p] * b.sin_[q];
      const double sc = a.sin_[p] * b.cos_[q];
      const double cs = a.cos_[p] * b.sin_[q];
      add_cos(lp - lq, 0.5 * (cc + ss));
      add_cos(lp + lq, 0.5 * (cc - ss));
      add_sin(lp + lq, 0.5 * (sc + cs));
      add_sin(lp - lq, 0.5 * (sc - cs));
    }
  }
  return r;
}

TrigPolynomial operator+(const TrigPolynomial& a, const TrigPolynomial& b) {
  TrigPolynomial r = a;
  r.resize(std::max(a.degree(), b.degree()));
  for (std::size_t k = 0; k < b.cos_.size(); ++k) {
    r.cos_[k] += b.cos_[k];
    r.sin_[k] += b.sin_[k];
  }
  return r;
}

TrigPolynomial operator*(double c, const TrigPolynomial& a) {
  TrigPolynomial r = a;
  for (double& v : r.cos_) v *= c;
  for (double& v : r.sin_) v *= c;
  return r;
}

// ---------------------------------------------------------------------------

OscillatoryField logistic_field(const LogisticParams& params) {
  const auto a = std::make_shared<const TrigPolynomial>(params.a_tilde, params.a_bar);
  const auto b = std::make_shared<const TrigPolynomial>(params.b_tilde, params.b_bar);
  return OscillatoryField(
      1,
      [a, b](std::span<const double> x, double, double tau, std::span<double> out) {
        const double av = (*a)(tau);
        const double bv = (*b)(tau);
        out[0] = av * x[0] - av * bv * x[0] * x[0];
      },
      [a, b](std::span<const double> x, double, double tau, std::span<double> out) {
        const double av = (*a)(tau);
        const double bv = (*b)(tau);
        out[0] = av - 2.0 * av * bv * x[0];
      });
}

double logistic_drift_K(const LogisticParams& params) {
  const TrigPolynomial a(params.a_tilde);
  const TrigPolynomial b(params.b_tilde);
  return (a.tilde_integral() * a * b).mean() - params.a_bar * (a * b.tilde_integral()).mean();
}

double logistic_mean_c(const LogisticParams& params) {
  return params.a_bar * params.b_bar + (TrigPolynomial(params.a_tilde) * TrigPolynomial(params.b_tilde)).mean();
}

double logistic_dl2_exact(double x0, double K, double s) {
  const double denom = 1.0 + x0 * K * s;
  if (denom <= 0.0) {
    std::ostringstream msg;
    msg << "finite-time blow-up of averaged model: 1 + x0*K*s = " << denom << " at s = " << s;
    throw std::domain_error(msg.str());
  }
  return x0 / denom;
}

double logistic_dl1_exact(double x0, double a, double c, double t) {
  if (a == 0.0) throw std::invalid_argument("logistic_dl1_exact: needs a != 0");
  const double e = std::exp(a * t);
  return a * x0 * e / (a + c * x0 * (e - 1.0));
}

// ---------------------------------------------------------------------------

void PredatorPreyParams::check_case(DL dl) const {
  const double bars[] = {alpha_bar, beta_bar, gamma_bar, mu_bar};
  if (dl == DL::DL2) {
    for (double b : bars)
      if (b != 0.0) throw std::invalid_argument("predator-prey DL-2 needs all mean coefficients zero");
  } else if (dl == DL::DL1) {
    for (double b : bars)
      if (b == 0.0) throw std::invalid_argument("predator-prey DL-1 needs all mean coefficients nonzero");
  } else {
    throw std::invalid_argument("predator-prey model supports DL-1 or DL-2 only");
  }
}

OscillatoryField predator_prey_field(const PredatorPreyParams& params) {
  struct Coeffs {
    TrigPolynomial alpha, beta, gamma, mu;
  };
  const auto c = std::make_shared<const Coeffs>(Coeffs{TrigPolynomial(params.alpha_tilde, params.alpha_bar),
                                                       TrigPolynomial(params.beta_tilde, params.beta_bar),
                                                       TrigPolynomial(params.gamma_tilde, params.gamma_bar),
                                                       TrigPolynomial(params.mu_tilde, params.mu_bar)});
  return OscillatoryField(
      2,
      [c](std::span<const double> x, double, double tau, std::span<double> out) {
        const double xy = x[0] * x[1];
        out[0] = c->alpha(tau) * x[0] - c->beta(tau) * xy;
        out[1] = -c->gamma(tau) * x[1] + c->mu(tau) * xy;
      },
      [c](std::span<const double> x, double, double tau, std::span<double> out) {
        const double al = c->alpha(tau), be = c->beta(tau), ga = c->gamma(tau), mu = c->mu(tau);
        out[0] = al - be * x[1];
        out[1] = -be * x[0];
        out[2] = mu * x[1];
        out[3] = -ga + mu * x[0];
      });
}

PredatorPreyDrift pp_drift_coeffs(const PredatorPreyParams& params) {
  const TrigPolynomial alpha(params.alpha_tilde);
  const TrigPolynomial beta(params.beta_tilde);
  const TrigPolynomial gamma(params.gamma_tilde);
  const TrigPolynomial mu(params.mu_tilde);
  return {(beta * gamma.tilde_integral()).mean(), (beta * mu.tilde_integral()).mean(),
          (alpha * mu.tilde_integral()).mean()};
}

Vec PredatorPreyDrift::drift(double x, double y) const {
  return {A * x * y - B * x * x * y, -C * x * y + B * x * y * y};
}

double PredatorPreyDrift::integral(double x, double y) const {
  if (B == 0.0) throw std::domain_error("predator-prey integral needs B != 0");
  return (x - A / B) * (y - C / B);
}

// ---------------------------------------------------------------------------

OscillatoryField stokes_field(double k) {
  return OscillatoryField(
      1, [k](std::span<const double> x, double, double tau, std::span<double> out) { out[0] = std::cos(k * x[0] - tau); },
      [k](std::span<const double> x, double, double tau, std::span<double> out) {
        out[0] = -k * std::sin(k * x[0] - tau);
      });
}

OscillatoryField standing_wave_field(std::size_t dim, std::function<Vec(std::span<const double>)> v,
                                     std::function<Matrix(std::span<const double>)> dv) {
  FieldFn eval = [v, dim](std::span<const double> x, double, double tau, std::span<double> out) {
    const Vec vx = v(x);
    const double f = std::cos(tau);
    for (std::size_t i = 0; i < dim; ++i) out[i] = f * vx[i];
  };
  JacobianFn jac;
  if (dv) {
    jac = [dv](std::span<const double> x, double, double tau, std::span<double> out) {
      const Matrix m = dv(x);
      const double f = std::cos(tau);
      const auto d = m.data();
      for (std::size_t i = 0; i < d.size(); ++i) out[i] = f * d[i];
    };
  }
  return OscillatoryField(dim, std::move(eval), std::move(jac));
}

namespace {

CoeffFn affine_coeff(std::size_t dim, const AffineMap& map) {
  const bool has_matrix = map.matrix.rows() != 0;
  const bool has_offset = !map.offset.empty();
  if (!has_matrix && !has_offset) return {};
  if (has_matrix && (map.matrix.rows() != dim || map.matrix.cols() != dim))
    throw std::invalid_argument("linear_fourier_field: coefficient matrix must be dim x dim");
  if (has_offset && map.offset.size() != dim)
    throw std::invalid_argument("linear_fourier_field: coefficient offset must have length dim");
  return [map, dim, has_matrix, has_offset](std::span<const double> x, double, std::span<double> out) {
    for (std::size_t i = 0; i < dim; ++i) {
      double v = has_offset ? map.offset[i] : 0.0;
      if (has_matrix)
        for (std::size_t j = 0; j < dim; ++j) v += map.matrix(i, j) * x[j];
      out[i] = v;
    }
  };
}

}  // namespace

OscillatoryField linear_fourier_field(std::size_t dim, const AffineMap& mean, const std::vector<LinearHarmonic>& harmonics) {
  FourierField f;
  f.dim = dim;
  f.mean_coeff = affine_coeff(dim, mean);
  std::size_t k_max = 0;
  for (const auto& h : harmonics) {
    if (h.k == 0) throw std::invalid_argument("linear_fourier_field: harmonic index must be >= 1");
    k_max = std::max(k_max, h.k);
  }
  f.cos_coeffs.resize(k_max);
  f.sin_coeffs.resize(k_max);
  for (const auto& h : harmonics) {
    if (f.cos_coeffs[h.k - 1] || f.sin_coeffs[h.k - 1])
      throw std::invalid_argument("linear_fourier_field: duplicate harmonic " + std::to_string(h.k));
    f.cos_coeffs[h.k - 1] = affine_coeff(dim, h.cos_map);
    f.sin_coeffs[h.k - 1] = affine_coeff(dim, h.sin_map);
  }
  return OscillatoryField::from_fourier(std::move(f));
}

OscillatoryField two_harmonic_linear_field(const Matrix& a1, const Matrix& a2) {
  const std::size_t d = a1.rows();
  return linear_fourier_field(d, {}, {LinearHarmonic{1, {a1, {}}, {}}, LinearHarmonic{2, {a2, {}}, {}}});
}

std::vector<BuiltinModel> builtin_models() {
  std::vector<BuiltinModel> models;
  auto box1 = [](double lo, double hi) {
    SamplingDomain d;
    d.box = {{lo, hi}};
    return d;
  };
  auto box2 = [](double lo, double hi) {
    SamplingDomain d;
    d.box = {{lo, hi}, {lo, hi}};
    return d;
  };

  LogisticParams dl1{1.0, 1.0, {{1, 1.0, 0.0}}, {{2, 0.0, 1.0}}};
  models.push_back({"logistic-dl1", "logistic, a = 1 + cos t, b = 1 + sin 2t (Case A)", logistic_field(dl1), DL::DL1,
                    box1(0.5, 2.0)});
  LogisticParams dl2{0.0, 0.0, {{1, 1.0, 0.0}}, {{2, 0.0, 1.0}}};
  models.push_back({"logistic-dl2", "logistic, a = cos t, b = sin 2t (Case B, K = 1/4)", logistic_field(dl2), DL::DL2,
                    box1(0.5, 2.0)});
  models.push_back({"stokes", "u = cos(x - t)", stokes_field(1.0), DL::DL2, box1(-3.0, 3.0)});

  const Matrix a1 = Matrix::from_rows(2, 2, std::vector<double>{0.0, 1.0, 0.0, 0.0});
  const Matrix a2 = Matrix::from_rows(2, 2, std::vector<double>{0.0, 0.0, 1.0, 0.0});
  models.push_back({"two-harmonic", "u = cos t A1 x + cos 2t A2 x", two_harmonic_linear_field(a1, a2), DL::DL3,
                    box2(-1.0, 1.0)});
  models.push_back({"standing-wave", "u = cos t * x",
                    standing_wave_field(
                        1, [](std::span<const double> x) { return Vec{x[0]}; },
                        [](std::span<const double>) { return Matrix::identity(1); }),
                    DL::FullyDegenerate, box1(0.5, 2.0)});

  PredatorPreyParams pp2;
  pp2.alpha_tilde = {{1, 1.0, 0.0}};
  pp2.beta_tilde = {{1, 1.0, 0.0}};
  pp2.gamma_tilde = {{1, 0.0, 1.0}};
  pp2.mu_tilde = {{1, 0.0, 1.0}};
  models.push_back({"predator-prey-dl2", "purely oscillating predator-prey", predator_prey_field(pp2), DL::DL2,
                    box2(0.5, 2.0)});
  PredatorPreyParams pp1 = pp2;
  pp1.alpha_bar = pp1.beta_bar = pp1.gamma_bar = pp1.mu_bar = 1.0;
  models.push_back({"predator-prey-dl1", "predator-prey with unit mean coefficients", predator_prey_field(pp1), DL::DL1,
                    box2(0.5, 2.0)});
  return models;
}

}  // namespace vibro
