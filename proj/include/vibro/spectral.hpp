#pragma once

#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "vibro/linalg.hpp"

namespace vibro {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Reduces a fast phase to [0, 2π).
double reduce_phase(double tau);

/// Uniform trapezoid nodes τₙ = τ₀ + 2πn/N over one period, with cached
/// cos/sin tables for harmonic projection. Immutable after construction.
class TauGrid {
 public:
  explicit TauGrid(std::size_t samples = 256, double origin = 0.0);

  std::size_t size() const { return n_; }
  double origin() const { return origin_; }
  double tau(std::size_t n) const { return tau_[n]; }
  std::span<const double> nodes() const { return tau_; }

  /// Highest harmonic resolved without touching the Nyquist mode.
  std::size_t max_harmonic() const { return n_ / 2 - 1; }

  double cos_kt(std::size_t n, std::size_t k) const { return cos_[n * (half_ + 1) + k]; }
  double sin_kt(std::size_t n, std::size_t k) const { return sin_[n * (half_ + 1) + k]; }

  /// Shared default grid (256 nodes, origin 0).
  static const TauGrid& standard();

 private:
  std::size_t n_;
  std::size_t half_;
  double origin_;
  std::vector<double> tau_;
  std::vector<double> cos_;
  std::vector<double> sin_;
};

/// Truncated Fourier series of a vector-valued 2π-periodic function,
///   f(τ) = mean + Σₖ [cosₖ cos kτ + sinₖ sin kτ],  k = 1..K.
class HarmonicSeries {
 public:
  HarmonicSeries() = default;
  HarmonicSeries(std::size_t dim, std::size_t harmonics);

  std::size_t dim() const { return dim_; }
  std::size_t harmonics() const { return harmonics_; }

  std::span<double> mean() { return {coeffs_.data(), dim_}; }
  std::span<const double> mean() const { return {coeffs_.data(), dim_}; }
  std::span<double> cos(std::size_t k) { return {coeffs_.data() + (2 * k - 1) * dim_, dim_}; }
  std::span<const double> cos(std::size_t k) const { return {coeffs_.data() + (2 * k - 1) * dim_, dim_}; }
  std::span<double> sin(std::size_t k) { return {coeffs_.data() + 2 * k * dim_, dim_}; }
  std::span<const double> sin(std::size_t k) const { return {coeffs_.data() + 2 * k * dim_, dim_}; }

  std::span<double> coefficients() { return coeffs_; }
  std::span<const double> coefficients() const { return coeffs_; }

  Vec operator()(double tau) const;
  void eval_into(double tau, std::span<double> out) const;

  /// Same series with the mean removed (the tilde part).
  HarmonicSeries oscillating() const;
  /// Zero-mean τ-antiderivative of the oscillating part, per harmonic:
  /// cos kτ → sin kτ / k, sin kτ → −cos kτ / k.
  HarmonicSeries tilde_integral() const;
  /// ∂/∂τ.
  HarmonicSeries derivative() const;

  /// Values at every grid node, node-major (n * dim + i). Harmonics above the
  /// grid's Nyquist limit alias.
  std::vector<double> sample(const TauGrid& grid) const;

  /// Discrete Fourier projection of node-major samples onto harmonics 0..K.
  static HarmonicSeries project(std::span<const double> samples, std::size_t dim, const TauGrid& grid,
                                std::size_t harmonics);

  /// Σ over harmonics > k_keep of (cosₖ² + sinₖ²)/2, summed over components.
  double energy_above(std::size_t k_keep) const;
  /// Total oscillating energy ⟨|f̃|²⟩.
  double oscillating_energy() const { return energy_above(0); }

  HarmonicSeries& operator+=(const HarmonicSeries& other);
  HarmonicSeries& operator-=(const HarmonicSeries& other);
  HarmonicSeries& operator*=(double s);

 private:
  std::size_t dim_ = 0;
  std::size_t harmonics_ = 0;
  std::vector<double> coeffs_;
};

HarmonicSeries operator-(HarmonicSeries a, const HarmonicSeries& b);
HarmonicSeries operator*(double s, HarmonicSeries a);

}  // namespace vibro
