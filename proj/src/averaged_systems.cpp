#include "vibro/averaged_systems.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "vibro/averaging.hpp"

namespace vibro {

namespace {

const TauGrid& grid_or_default(const TauGrid* g) { return g ? *g : TauGrid::standard(); }

DLClassification checked(const OscillatoryField& field, const BuildOptions& options) {
  return classify(field, *options.check, options.tol);
}

}  // namespace

AveragedSystem build_dl1(const OscillatoryField& field, const BuildOptions& options) {
  if (options.check) {
    const auto c = checked(field, options);
    if (c.dl != DL::DL1) throw ClassificationMismatch("DL-1 requires <u> not identically zero, got " + to_string(c.dl));
  }
  const TauGrid* grid = &grid_or_default(options.grid);
  AveragedSystem sys;
  sys.dl = DL::DL1;
  sys.time_variable = TimeVariable::t;
  sys.rhs_zeroth = [field, grid](std::span<const double> x, double t) { return mean_part(field, x, t, *grid); };
  const bool drift = options.include_drift;
  sys.rhs_first = [field, grid, drift](std::span<const double> xi, std::span<const double> x0, double t) {
    Vec r = jacobian(field, x0, t, JacobianAt::mean(), *grid).apply(xi);
    if (drift) {
      DriftOptions o;
      o.grid = grid;
      r = r + drift_v2(field, x0, t, o).value;
    }
    return r;
  };
  return sys;
}

AveragedSystem build_dl2(const OscillatoryField& field, const BuildOptions& options) {
  if (options.check) {
    const auto c = checked(field, options);
    if (c.dl == DL::DL1) throw ClassificationMismatch("DL-2 requires <u> == 0");
    if (c.dl != DL::DL2) throw ClassificationMismatch("DL-2 requires V2 not identically zero, got " + to_string(c.dl));
  }
  const TauGrid* grid = &grid_or_default(options.grid);
  AveragedSystem sys;
  sys.dl = DL::DL2;
  sys.time_variable = TimeVariable::s_eps;
  sys.rhs_zeroth = [field, grid](std::span<const double> x, double s) {
    DriftOptions o;
    o.grid = grid;
    return drift_v2(field, x, s, o).value;
  };
  return sys;
}

AveragedSystem build_dl3(const OscillatoryField& field, const BuildOptions& options) {
  if (options.check) {
    const auto c = checked(field, options);
    if (c.dl == DL::DL1) throw ClassificationMismatch("DL-3 requires <u> == 0");
    if (c.dl == DL::DL2) throw ClassificationMismatch("DL-3 requires V2 == 0");
    if (c.dl == DL::FullyDegenerate) throw ClassificationMismatch("DL-3 rejected: field is fully degenerate");
  }
  const TauGrid* grid = &grid_or_default(options.grid);
  AveragedSystem sys;
  sys.dl = DL::DL3;
  sys.time_variable = TimeVariable::s_eps2;
  sys.rhs_zeroth = [field, grid](std::span<const double> x, double s) {
    DriftOptions o;
    o.grid = grid;
    return drift_v3(field, x, s, o).value;
  };
  return sys;
}

AveragedSystem build_for(const OscillatoryField& field, const DLClassification& c, const BuildOptions& options) {
  switch (c.dl) {
    case DL::DL1: return build_dl1(field, options);
    case DL::DL2: return build_dl2(field, options);
    case DL::DL3: return build_dl3(field, options);
    case DL::FullyDegenerate: break;
  }
  throw ClassificationMismatch("no averaged system for a fully degenerate field");
}

AveragedSolution solve_averaged(const AveragedSystem& system, std::span<const double> x0, double window, double h,
                                bool with_first, std::optional<Vec> x1_initial) {
  const std::size_t d = x0.size();
  IntegrateOptions opts;
  opts.tag = system.time_variable;
  AveragedSolution out;
  if (!(with_first && system.rhs_first)) {
    Rhs rhs = [&system](std::span<const double> x, double t, std::span<double> dxdt) {
      const Vec v = system.rhs_zeroth(x, t);
      std::copy(v.begin(), v.end(), dxdt.begin());
    };
    auto r = integrate(rhs, x0, 0.0, window, h, opts);
    if (!r.ok()) throw std::runtime_error("averaged system: " + r.diagnostic);
    out.x0 = std::move(r.trajectory);
    return out;
  }

  Vec joint(2 * d, 0.0);
  std::copy(x0.begin(), x0.end(), joint.begin());
  if (x1_initial) {
    if (x1_initial->size() != d) throw std::invalid_argument("solve_averaged: x1 initial state has wrong dimension");
    std::copy(x1_initial->begin(), x1_initial->end(), joint.begin() + static_cast<std::ptrdiff_t>(d));
  }
  Rhs rhs = [&system, d](std::span<const double> y, double t, std::span<double> dydt) {
    const auto xa = y.subspan(0, d);
    const auto xb = y.subspan(d, d);
    const Vec v0 = system.rhs_zeroth(xa, t);
    const Vec v1 = system.rhs_first(xb, xa, t);
    std::copy(v0.begin(), v0.end(), dydt.begin());
    std::copy(v1.begin(), v1.end(), dydt.begin() + static_cast<std::ptrdiff_t>(d));
  };
  auto r = integrate(rhs, joint, 0.0, window, h, opts);
  if (!r.ok()) throw std::runtime_error("averaged system: " + r.diagnostic);
  Trajectory a(d, system.time_variable);
  Trajectory b(d, system.time_variable);
  for (std::size_t i = 0; i < r.trajectory.size(); ++i) {
    const auto y = r.trajectory.state(i);
    a.push_back(r.trajectory.time(i), y.subspan(0, d));
    b.push_back(r.trajectory.time(i), y.subspan(d, d));
  }
  out.x0 = std::move(a);
  out.x1 = std::move(b);
  return out;
}

CompositeSolution::CompositeSolution(Trajectory x0, std::optional<Trajectory> x1, OscillatoryField field,
                                     double epsilon, ComposeOptions options)
    : x0_(std::move(x0)), x1_(std::move(x1)), field_(std::move(field)), epsilon_(epsilon), options_(options) {
  if (!(epsilon_ >= 0.0)) throw std::invalid_argument("compose_solution: epsilon must be >= 0");
  if (x0_.empty()) throw std::invalid_argument("compose_solution: empty averaged trajectory");
  if (x1_) {
    if (x1_->time_variable() != x0_.time_variable() || x1_->size() != x0_.size() ||
        x1_->back_time() != x0_.back_time())
      throw std::invalid_argument("compose_solution: x0 and x1 trajectories are on incompatible grids");
  }
}

double CompositeSolution::t_end() const {
  const int p = epsilon_power(x0_.time_variable());
  if (p == 0) return x0_.back_time();
  if (epsilon_ == 0.0) return std::numeric_limits<double>::infinity();
  return x0_.back_time() / std::pow(epsilon_, p);
}

Vec CompositeSolution::operator()(double t) const {
  const int p = epsilon_power(x0_.time_variable());
  const double sigma = p == 0 ? t : t * std::pow(epsilon_, p);
  const Vec xbar = x0_.at(sigma);
  if (epsilon_ == 0.0) return xbar;
  Vec x = xbar;
  if (x1_) x = x + epsilon_ * x1_->at(sigma);
  if (options_.include_oscillation) {
    const TauGrid& grid = grid_or_default(options_.grid);
    const Vec osc = oscillation_primitive(field_, xbar, sigma, grid)(reduce_phase(t / epsilon_));
    x = x + epsilon_ * osc;
  }
  return x;
}

CompositeSolution compose_solution(const Trajectory& x0, const Trajectory* x1, const OscillatoryField& field,
                                   double epsilon, const ComposeOptions& options) {
  return CompositeSolution(x0, x1 ? std::optional<Trajectory>(*x1) : std::nullopt, field, epsilon, options);
}

}  // namespace vibro
