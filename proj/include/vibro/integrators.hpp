#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "vibro/dl.hpp"
#include "vibro/field.hpp"
#include "vibro/linalg.hpp"

namespace vibro {

/// Sampled solution path. States are stored flat, one row of `dim` per time.
class Trajectory {
 public:
  Trajectory() = default;
  Trajectory(std::size_t dim, TimeVariable tag) : dim_(dim), tag_(tag) {}

  std::size_t dim() const { return dim_; }
  TimeVariable time_variable() const { return tag_; }
  std::size_t size() const { return times_.size(); }
  bool empty() const { return times_.empty(); }

  double time(std::size_t i) const { return times_[i]; }
  std::span<const double> times() const { return times_; }
  std::span<const double> state(std::size_t i) const { return {states_.data() + i * dim_, dim_}; }
  double front_time() const { return times_.front(); }
  double back_time() const { return times_.back(); }

  void push_back(double time, std::span<const double> state);

  /// Four-point Lagrange interpolation (cubic); exact at the nodes.
  Vec at(double time) const;

  /// Strictly increasing, uniformly spaced except for the final interval, finite states.
  void validate() const;

 private:
  std::size_t dim_ = 0;
  TimeVariable tag_ = TimeVariable::t;
  std::vector<double> times_;
  std::vector<double> states_;
};

/// dx/dt written into `dxdt`.
using Rhs = std::function<void(std::span<const double> x, double t, std::span<double> dxdt)>;

struct IntegrateOptions {
  /// Keep every m-th step (the first and last states are always kept).
  std::size_t store_every = 1;
  TimeVariable tag = TimeVariable::t;
};

enum class IntegrationStatus { ok, non_finite };

struct IntegrationResult {
  Trajectory trajectory;
  IntegrationStatus status = IntegrationStatus::ok;
  std::string diagnostic;
  std::size_t steps = 0;
  bool ok() const { return status == IntegrationStatus::ok; }
};

/// Classical fixed-step RK4 on [t0, t1]; the last step is shortened to land on t1.
/// On a non-finite state the run stops and the partial trajectory is returned.
IntegrationResult integrate(const Rhs& rhs, std::span<const double> x0, double t0, double t1, double h,
                            const IntegrateOptions& options = {});

struct FullOptions {
  std::size_t n_fast = 32;            // RK4 steps per fast period
  double max_steps = 1e8;             // budget on ω·span·n_fast/2π
  std::size_t store_every = 1;
};

/// Integrates dx/dt = u(x, s(t), ωt) resolving the fast scale, where the slow
/// argument is s = t (DL-1), t/ω (DL-2) or t/ω² (DL-3) according to `slow`.
/// Throws std::invalid_argument when ω < 10, n_fast < 32 or the step budget is exceeded.
IntegrationResult integrate_full(const OscillatoryField& field, double omega, TimeVariable slow,
                                 std::span<const double> x0, double t0, double t1, const FullOptions& options = {});

/// Number of RK4 steps integrate_full would take.
double full_step_count(double omega, double t0, double t1, std::size_t n_fast);

/// sup over a's grid of max-component |a − b|.
double error_norm(const Trajectory& a, const std::function<Vec(double)>& b);

/// Same, with b interpolated; a's times are mapped into b's time variable via
/// s = εᵖ t when the tags differ. Throws std::invalid_argument for disjoint spans.
double error_norm(const Trajectory& a, const Trajectory& b, double epsilon = 0.0);

/// CSV with header `time,x1..xd`, 17 significant digits.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);
Trajectory read_trajectory_csv(std::istream& in, TimeVariable tag = TimeVariable::t);

/// Decimal text with 17 significant digits; parses back to the same double.
std::string format_double(double v);

}  // namespace vibro
