#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "vibro/dl.hpp"
#include "vibro/field.hpp"
#include "vibro/linalg.hpp"

namespace vibro {

/// One harmonic term aₖ cos kτ + bₖ sin kτ, k ≥ 1.
struct Harmonic {
  std::size_t k = 1;
  double cos_amp = 0.0;
  double sin_amp = 0.0;
};

/// Real trigonometric polynomial c₀ + Σₖ [cₖ cos kτ + sₖ sin kτ] with exact
/// products, so averages of products come out in closed form.
class TrigPolynomial {
 public:
  TrigPolynomial() = default;
  explicit TrigPolynomial(const std::vector<Harmonic>& terms, double mean = 0.0);

  double mean() const { return cos_.empty() ? 0.0 : cos_[0]; }
  std::size_t degree() const { return cos_.empty() ? 0 : cos_.size() - 1; }
  double cos_coeff(std::size_t k) const { return k < cos_.size() ? cos_[k] : 0.0; }
  double sin_coeff(std::size_t k) const { return k < sin_.size() ? sin_[k] : 0.0; }

  double operator()(double tau) const;

  TrigPolynomial oscillating() const;
  /// Zero-mean antiderivative of the oscillating part.
  TrigPolynomial tilde_integral() const;

  friend TrigPolynomial operator*(const TrigPolynomial& a, const TrigPolynomial& b);
  friend TrigPolynomial operator+(const TrigPolynomial& a, const TrigPolynomial& b);
  friend TrigPolynomial operator*(double c, const TrigPolynomial& a);

 private:
  void resize(std::size_t degree);
  std::vector<double> cos_;  // index 0 holds the mean
  std::vector<double> sin_;
};

// --- logistic: dx/dt = a x − a b x², a = ā + ã(τ), b = b̄ + b̃(τ) ---

struct LogisticParams {
  double a_bar = 0.0;
  double b_bar = 0.0;
  std::vector<Harmonic> a_tilde;
  std::vector<Harmonic> b_tilde;
};

OscillatoryField logistic_field(const LogisticParams& params);

/// K = ⟨ã^τ ã b̃⟩ − ā⟨ã b̃^τ⟩, so that V₂ = −K x².
double logistic_drift_K(const LogisticParams& params);

/// c̄ = ā b̄ + ⟨ã b̃⟩, the averaged quadratic coefficient of the DL-1 system.
double logistic_mean_c(const LogisticParams& params);

/// x̄₀(s) = x₀ / (1 + x₀ K s). Throws std::domain_error past the pole.
double logistic_dl2_exact(double x0, double K, double s);

/// Closed-form solution of dx/dt = a x − c x² (a ≠ 0).
double logistic_dl1_exact(double x0, double a, double c, double t);

// --- predator-prey: dx/dt = αx − βxy, dy/dt = −γy + μxy ---

struct PredatorPreyParams {
  double alpha_bar = 0.0;
  double beta_bar = 0.0;
  double gamma_bar = 0.0;
  double mu_bar = 0.0;
  std::vector<Harmonic> alpha_tilde;
  std::vector<Harmonic> beta_tilde;
  std::vector<Harmonic> gamma_tilde;
  std::vector<Harmonic> mu_tilde;

  /// DL-2 requires every mean coefficient to vanish; DL-1 requires them all nonzero.
  void check_case(DL dl) const;
};

OscillatoryField predator_prey_field(const PredatorPreyParams& params);

struct PredatorPreyDrift {
  double A = 0.0;  // ⟨β̃ γ̃^τ⟩
  double B = 0.0;  // ⟨β̃ μ̃^τ⟩
  double C = 0.0;  // ⟨α̃ μ̃^τ⟩

  /// V₂ = (A x y − B x² y, −C x y + B x y²).
  Vec drift(double x, double y) const;
  /// (x − A/B)(y − C/B), conserved by the DL-2 system when B ≠ 0.
  double integral(double x, double y) const;
};

PredatorPreyDrift pp_drift_coeffs(const PredatorPreyParams& params);

// --- waves ---

/// u = cos(kx − τ), one-dimensional.
OscillatoryField stokes_field(double k);

/// u = cos τ · v(x). `dv` (row-major Jacobian of v) is optional.
OscillatoryField standing_wave_field(std::size_t dim, std::function<Vec(std::span<const double>)> v,
                                     std::function<Matrix(std::span<const double>)> dv = {});

// --- user-defined Fourier fields with affine coefficients ---

/// c(x) = M x + b; an empty matrix stands for zero.
struct AffineMap {
  Matrix matrix;
  Vec offset;
};

struct LinearHarmonic {
  std::size_t k = 1;
  AffineMap cos_map;
  AffineMap sin_map;
};

/// u = mean(x) + Σ [cos_mapₖ(x) cos kτ + sin_mapₖ(x) sin kτ], backed by an exact Fourier record.
OscillatoryField linear_fourier_field(std::size_t dim, const AffineMap& mean, const std::vector<LinearHarmonic>& harmonics);

/// ũ = cos τ A₁x + cos 2τ A₂x; V₂ ≡ 0 and V₃ = (1/8)[[v₁, v₂], v₁].
OscillatoryField two_harmonic_linear_field(const Matrix& a1, const Matrix& a2);

/// A built-in model with its documented distinguished limit.
struct BuiltinModel {
  std::string name;
  std::string description;
  OscillatoryField field;
  DL expected;
  SamplingDomain domain;
};

/// The documented case table: logistic (Case A and B), Stokes, the two-harmonic
/// linear field, the standing wave, and predator-prey (DL-1 and DL-2).
std::vector<BuiltinModel> builtin_models();

}  // namespace vibro
