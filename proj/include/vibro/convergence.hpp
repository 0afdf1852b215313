#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vibro/dl.hpp"
#include "vibro/field.hpp"
#include "vibro/linalg.hpp"

namespace vibro {

struct SlopeFit {
  double slope = 0.0;
  double slope_stderr = 0.0;
  double intercept = 0.0;
};

/// Ordinary least squares y = intercept + slope·x. Needs ≥ 3 points and distinct xs.
SlopeFit fit_slope(std::span<const double> xs, std::span<const double> ys);

enum class ApproximationOrder {
  zeroth,           // x̄₀ (+ ε ũ^τ)
  first_composite,  // x̄₀ + ε(x̄₁ + ũ^τ), DL-1 only
};

struct SweepConfig {
  OscillatoryField field;
  DL dl = DL::DL2;
  ApproximationOrder order = ApproximationOrder::zeroth;
  std::vector<double> omegas;
  /// Comparison window [0, window] in the slow variable of `dl`.
  double window = 2.0;
  /// Initial value of the full problem and of x̄₀.
  Vec x0;
  std::size_t n_fast = 32;
  double reference_step = 1e-3;
  double max_steps = 2e8;
  /// Approximate number of full-trajectory samples compared per ω.
  std::size_t comparison_points = 20000;
  bool include_oscillation = true;
  /// When set, the field is classified on this lattice and must match `dl`.
  std::optional<SamplingDomain> check;
};

struct SweepPoint {
  double omega = 0.0;
  double epsilon = 0.0;
  double error = 0.0;
  bool failed = false;
  std::string diagnostic;
  double steps = 0.0;
};

struct ConvergenceReport {
  std::vector<SweepPoint> points;
  double slope = 0.0;
  double slope_stderr = 0.0;
  double intercept = 0.0;
  /// Step-halving estimate of the averaged reference's own discretization error.
  double reference_error = 0.0;
  std::string config_echo;

  std::vector<double> omegas() const;
  std::vector<double> epsilons() const;
  std::vector<double> errors() const;
};

/// For each ω: integrate the full ODE, compose the averaged solution, record the
/// sup-norm error; then fit log(error) against log(ε). Failed points are marked
/// and excluded; fewer than 3 survivors is an error.
ConvergenceReport epsilon_sweep(const SweepConfig& config);

/// `omega,epsilon,error` rows (failed points omitted).
void write_report_csv(std::ostream& out, const ConvergenceReport& report);
/// `slope,stderr` header plus one row.
void write_summary_csv(std::ostream& out, const ConvergenceReport& report);

/// n points log-spaced over [lo, hi], inclusive.
std::vector<double> log_ladder(double lo, double hi, std::size_t n);

}  // namespace vibro
