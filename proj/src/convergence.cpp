#include "vibro/convergence.hpp"

#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "vibro/averaged_systems.hpp"
#include "vibro/averaging.hpp"
#include "vibro/classifier.hpp"
#include "vibro/integrators.hpp"

namespace vibro {

SlopeFit fit_slope(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw std::invalid_argument("fit_slope: size mismatch");
  const std::size_t n = xs.size();
  if (n < 3) throw std::invalid_argument("fit_slope: need at least 3 points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (xs[i] == xs[j]) throw std::invalid_argument("fit_slope: degenerate xs (repeated value)");
  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ys[i] - fit.intercept - fit.slope * xs[i];
    rss += r * r;
  }
  fit.slope_stderr = std::sqrt(rss / static_cast<double>(n - 2) / sxx);
  return fit;
}

std::vector<double> ConvergenceReport::omegas() const {
  std::vector<double> v;
  for (const auto& p : points) v.push_back(p.omega);
  return v;
}

std::vector<double> ConvergenceReport::epsilons() const {
  std::vector<double> v;
  for (const auto& p : points) v.push_back(p.epsilon);
  return v;
}

std::vector<double> ConvergenceReport::errors() const {
  std::vector<double> v;
  for (const auto& p : points) v.push_back(p.error);
  return v;
}

std::vector<double> log_ladder(double lo, double hi, std::size_t n) {
  if (n < 2 || !(lo > 0.0) || !(hi > lo)) throw std::invalid_argument("log_ladder: need n >= 2 and 0 < lo < hi");
  std::vector<double> v(n);
  const double a = std::log10(lo), b = std::log10(hi);
  for (std::size_t i = 0; i < n; ++i) v[i] = std::pow(10.0, a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
  return v;
}

namespace {

AveragedSystem system_for(const SweepConfig& c) {
  BuildOptions o;
  o.check = c.check;
  switch (c.dl) {
    case DL::DL1: return build_dl1(c.field, o);
    case DL::DL2: return build_dl2(c.field, o);
    case DL::DL3: return build_dl3(c.field, o);
    case DL::FullyDegenerate: break;
  }
  throw std::invalid_argument("epsilon_sweep: no averaged system for a fully degenerate field");
}

std::string echo(const SweepConfig& c) {
  std::ostringstream out;
  out << "dl=" << to_string(c.dl) << " order=" << (c.order == ApproximationOrder::zeroth ? "zeroth" : "first_composite")
      << " window=" << c.window << " n_fast=" << c.n_fast << " reference_step=" << c.reference_step << " omegas=";
  for (std::size_t i = 0; i < c.omegas.size(); ++i) out << (i ? ";" : "") << c.omegas[i];
  out << " x0=";
  for (std::size_t i = 0; i < c.x0.size(); ++i) out << (i ? ";" : "") << c.x0[i];
  return out.str();
}

// Odd strides are coprime with any power-of-two n_fast, so stored samples
// sweep through all fast phases instead of sitting at one stroboscopic phase.
std::size_t comparison_stride(double steps, std::size_t points) {
  std::size_t m = static_cast<std::size_t>(std::max(1.0, std::floor(steps / static_cast<double>(std::max<std::size_t>(1, points)))));
  if (m % 2 == 0) ++m;
  return m;
}

}  // namespace

ConvergenceReport epsilon_sweep(const SweepConfig& config) {
  if (config.omegas.size() < 3) throw std::invalid_argument("epsilon_sweep: need at least 3 omegas");
  for (std::size_t i = 0; i < config.omegas.size(); ++i) {
    if (!(config.omegas[i] >= 100.0)) throw std::invalid_argument("epsilon_sweep: omegas must be >= 1e2");
    if (i > 0 && !(config.omegas[i] > config.omegas[i - 1]))
      throw std::invalid_argument("epsilon_sweep: omegas must be strictly increasing");
  }
  if (!(config.window > 0.0)) throw std::invalid_argument("epsilon_sweep: window must be positive");
  if (config.x0.size() != config.field.dim()) throw std::invalid_argument("epsilon_sweep: x0 has wrong dimension");
  const bool first = config.order == ApproximationOrder::first_composite;
  if (first && config.dl != DL::DL1)
    throw std::invalid_argument("epsilon_sweep: the first-order composite is only assembled for DL-1");

  const AveragedSystem sys = system_for(config);
  // The full problem starts at x0 = x̄₀(0). For the first-order composite,
  // x̄₁(0) = −ũ^τ(x0, 0, 0) makes the composite match that initial value.
  std::optional<Vec> x1_start;
  if (first) {
    x1_start = oscillation_primitive(config.field, config.x0, 0.0, TauGrid::standard())(0.0);
    for (double& v : *x1_start) v = -v;
  }
  const AveragedSolution ref = solve_averaged(sys, config.x0, config.window, config.reference_step, first, x1_start);
  const AveragedSolution fine =
      solve_averaged(sys, config.x0, config.window, 0.5 * config.reference_step, first, x1_start);

  ConvergenceReport report;
  report.config_echo = echo(config);
  report.reference_error = error_norm(ref.x0, fine.x0);
  if (first) report.reference_error = std::max(report.reference_error, error_norm(*ref.x1, *fine.x1));

  const int p = epsilon_power(sys.time_variable);
  for (double omega : config.omegas) {
    SweepPoint pt;
    pt.omega = omega;
    pt.epsilon = 1.0 / omega;
    const CompositeSolution composite(ref.x0, first ? ref.x1 : std::nullopt, config.field, pt.epsilon,
                                      ComposeOptions{config.include_oscillation, nullptr});
    const double t_end = config.window * std::pow(omega, p);
    try {
      FullOptions fo;
      fo.n_fast = config.n_fast;
      fo.max_steps = config.max_steps;
      pt.steps = full_step_count(omega, 0.0, t_end, config.n_fast);
      fo.store_every = comparison_stride(pt.steps, config.comparison_points);
      const auto full = integrate_full(config.field, omega, sys.time_variable, config.x0, 0.0, t_end, fo);
      if (!full.ok()) {
        pt.failed = true;
        pt.diagnostic = full.diagnostic;
      } else {
        pt.error = error_norm(full.trajectory, [&composite](double t) { return composite(t); });
        if (!(pt.error > 0.0) || !std::isfinite(pt.error)) {
          pt.failed = true;
          pt.diagnostic = "error is not positive and finite";
        }
      }
    } catch (const std::exception& e) {
      pt.failed = true;
      pt.diagnostic = e.what();
    }
    report.points.push_back(std::move(pt));
  }

  std::vector<double> lx, ly;
  for (const auto& pt : report.points) {
    if (pt.failed) continue;
    lx.push_back(std::log(pt.epsilon));
    ly.push_back(std::log(pt.error));
  }
  if (lx.size() < 3) {
    std::ostringstream msg;
    msg << "epsilon_sweep: only " << lx.size() << " sweep points survived";
    for (const auto& pt : report.points)
      if (pt.failed) msg << "; omega=" << pt.omega << ": " << pt.diagnostic;
    throw std::runtime_error(msg.str());
  }
  const SlopeFit fit = fit_slope(lx, ly);
  report.slope = fit.slope;
  report.slope_stderr = fit.slope_stderr;
  report.intercept = fit.intercept;
  return report;
}

void write_report_csv(std::ostream& out, const ConvergenceReport& report) {
  out << "omega,epsilon,error\n";
  for (const auto& p : report.points) {
    if (p.failed) continue;
    out << format_double(p.omega) << ',' << format_double(p.epsilon) << ',' << format_double(p.error) << "\n";
  }
}

void write_summary_csv(std::ostream& out, const ConvergenceReport& report) {
  out << "slope,stderr\n" << format_double(report.slope) << ',' << format_double(report.slope_stderr) << "\n";
}

}  // namespace vibro
