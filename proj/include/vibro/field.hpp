#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "vibro/linalg.hpp"
#include "vibro/spectral.hpp"

namespace vibro {

/// u(x, s, τ) written into `out` (length dim).
using FieldFn = std::function<void(std::span<const double> x, double s, double tau, std::span<double> out)>;
/// ∂uᵢ/∂xⱼ written row-major into `out` (length dim²).
using JacobianFn = std::function<void(std::span<const double> x, double s, double tau, std::span<double> out)>;
/// A τ-independent coefficient c(x, s).
using CoeffFn = std::function<void(std::span<const double> x, double s, std::span<double> out)>;

class NonFiniteValue : public std::runtime_error {
 public:
  NonFiniteValue(const std::string& what, std::size_t coordinate)
      : std::runtime_error(what), coordinate_(coordinate) {}
  std::size_t coordinate() const { return coordinate_; }

 private:
  std::size_t coordinate_;
};

struct FourierField;

/// A velocity field u(x, s, τ), 2π-periodic in τ. Immutable; evaluation is pure.
class OscillatoryField {
 public:
  OscillatoryField() = default;
  OscillatoryField(std::size_t dim, FieldFn eval, JacobianFn jacobian = {});

  /// Field whose evaluation and harmonic content come from a Fourier record.
  static OscillatoryField from_fourier(FourierField fourier);

  std::size_t dim() const { return dim_; }

  /// Unchecked hot-path evaluation; τ is reduced mod 2π first.
  void eval_into(std::span<const double> x, double s, double tau, std::span<double> out) const {
    eval_(x, s, reduce_phase(tau), out);
  }

  bool has_jacobian() const { return static_cast<bool>(jacobian_); }
  void jacobian_into(std::span<const double> x, double s, double tau, std::span<double> out) const {
    jacobian_(x, s, reduce_phase(tau), out);
  }

  /// Non-null when the field carries an exact harmonic representation.
  const FourierField* fourier() const { return fourier_.get(); }

  /// Returns a copy whose output is multiplied by `c` (the Jacobian and any
  /// Fourier record are scaled along).
  OscillatoryField scaled(double c) const;

 private:
  std::size_t dim_ = 0;
  FieldFn eval_;
  JacobianFn jacobian_;
  std::shared_ptr<const FourierField> fourier_;
};

/// Band-limited field u = mean(x,s) + Σₖ [cₖ(x,s) cos kτ + dₖ(x,s) sin kτ].
/// Empty coefficient callables stand for zero.
struct FourierField {
  std::size_t dim = 0;
  CoeffFn mean_coeff;
  std::vector<CoeffFn> cos_coeffs;  // index k-1
  std::vector<CoeffFn> sin_coeffs;  // index k-1
  /// Optional bulk evaluator producing all coefficients at once.
  std::function<HarmonicSeries(std::span<const double> x, double s)> bulk;
  /// Non-empty when fit_fourier saw energy beyond the kept harmonics.
  std::string aliasing_warning;

  std::size_t harmonics() const { return std::max(cos_coeffs.size(), sin_coeffs.size()); }
  HarmonicSeries coefficients(std::span<const double> x, double s) const;
  Vec evaluate(std::span<const double> x, double s, double tau) const;
};

/// Lattice on which degeneracy is checked numerically.
struct SamplingDomain {
  std::vector<std::pair<double, double>> box;
  std::size_t x_grid_points_per_axis = 5;
  std::vector<double> s_samples{0.0, 0.25, 0.5, 0.75, 1.0};
  std::size_t tau_samples_per_period = 256;

  /// Throws std::invalid_argument when lo >= hi or the τ count is odd or < 4.
  void validate() const;
  std::size_t dim() const { return box.size(); }
  /// All lattice x-points (tensor product of per-axis uniform grids, endpoints included).
  std::vector<Vec> x_points() const;
};

/// Checked evaluation: rejects non-finite output naming the coordinate.
Vec evaluate(const OscillatoryField& field, std::span<const double> x, double s, double tau);

struct FitOptions {
  std::size_t tau_samples = 256;
  /// (x, s) points where truncation energy is measured; defaults to (0, 0).
  std::vector<std::pair<Vec, double>> probes;
  /// Relative energy beyond K above which a warning is recorded.
  double alias_threshold = 1e-10;
};

/// Discrete Fourier projection onto harmonics 0..K.
FourierField fit_fourier(const OscillatoryField& field, std::size_t harmonics, const FitOptions& options = {});

/// Harmonic coefficients of u(x, s, ·). Exact for Fourier-backed fields,
/// otherwise a projection on `grid` up to its highest non-Nyquist harmonic.
HarmonicSeries harmonic_snapshot(const OscillatoryField& field, std::span<const double> x, double s,
                                 const TauGrid& grid = TauGrid::standard());

/// τ-average of u at fixed (x, s).
Vec mean_part(const OscillatoryField& field, std::span<const double> x, double s,
              const TauGrid& grid = TauGrid::standard());

/// u − ū at (x, s, τ).
Vec osc_part(const OscillatoryField& field, std::span<const double> x, double s, double tau,
             const TauGrid& grid = TauGrid::standard());

}  // namespace vibro
