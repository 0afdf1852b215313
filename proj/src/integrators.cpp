#include "vibro/integrators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace vibro {

void Trajectory::push_back(double time, std::span<const double> state) {
  if (state.size() != dim_) throw std::invalid_argument("Trajectory::push_back: state has wrong dimension");
  times_.push_back(time);
  states_.insert(states_.end(), state.begin(), state.end());
}

Vec Trajectory::at(double time) const {
  if (times_.empty()) throw std::out_of_range("Trajectory::at: empty trajectory");
  const double span = times_.back() - times_.front();
  const double slack = 1e-12 * std::max(1.0, std::max(std::abs(times_.front()), std::abs(times_.back())));
  if (time < times_.front() - slack || time > times_.back() + slack) {
    std::ostringstream msg;
    msg << "requested time " << time << " outside trajectory span [" << times_.front() << ", " << times_.back() << "]";
    throw std::out_of_range(msg.str());
  }
  const std::size_t n = times_.size();
  if (n == 1 || span == 0.0) return Vec(state(0).begin(), state(0).end());

  // Interval [i, i+1] containing time, then a 4-node stencil around it.
  std::size_t i = static_cast<std::size_t>(std::upper_bound(times_.begin(), times_.end(), time) - times_.begin());
  i = i == 0 ? 0 : std::min(i - 1, n - 2);
  const std::size_t m = std::min<std::size_t>(4, n);
  std::size_t first = i >= 1 ? i - 1 : 0;
  if (first + m > n) first = n - m;

  Vec out(dim_, 0.0);
  for (std::size_t a = first; a < first + m; ++a) {
    if (times_[a] == time) return Vec(state(a).begin(), state(a).end());
    double w = 1.0;
    for (std::size_t b = first; b < first + m; ++b)
      if (b != a) w *= (time - times_[b]) / (times_[a] - times_[b]);
    const auto xa = state(a);
    for (std::size_t c = 0; c < dim_; ++c) out[c] += w * xa[c];
  }
  return out;
}

void Trajectory::validate() const {
  if (times_.empty()) throw std::invalid_argument("Trajectory: empty");
  for (double v : states_)
    if (!std::isfinite(v)) throw std::invalid_argument("Trajectory: non-finite state");
  if (times_.size() < 2) return;
  const double scale = std::max(std::abs(times_.front()), std::abs(times_.back()));
  const double dt0 = times_[1] - times_[0];
  for (std::size_t i = 1; i < times_.size(); ++i) {
    const double dt = times_[i] - times_[i - 1];
    if (!(dt > 0.0)) throw std::invalid_argument("Trajectory: times not strictly increasing");
    const bool last = i + 1 == times_.size();
    if (!last && std::abs(dt - dt0) > 1e-12 * std::max(scale, dt0))
      throw std::invalid_argument("Trajectory: non-uniform spacing");
    if (last && dt > dt0 * (1.0 + 1e-9) + 1e-12 * scale)
      throw std::invalid_argument("Trajectory: final interval longer than the step");
  }
}

IntegrationResult integrate(const Rhs& rhs, std::span<const double> x0, double t0, double t1, double h,
                            const IntegrateOptions& options) {
  if (!(h > 0.0)) throw std::invalid_argument("integrate: step must be positive");
  if (!std::isfinite(t0) || !std::isfinite(t1) || !(t1 > t0)) throw std::invalid_argument("integrate: need finite t0 < t1");
  const std::size_t d = x0.size();
  const std::size_t store_every = std::max<std::size_t>(1, options.store_every);

  const double span = t1 - t0;
  std::size_t n_uniform = static_cast<std::size_t>(std::floor(span / h));
  const double rem = span - static_cast<double>(n_uniform) * h;
  const std::size_t total = std::max<std::size_t>(1, rem > 1e-9 * h ? n_uniform + 1 : n_uniform);

  IntegrationResult result;
  result.trajectory = Trajectory(d, options.tag);
  Vec x(x0.begin(), x0.end());
  Vec k1(d), k2(d), k3(d), k4(d), tmp(d);
  result.trajectory.push_back(t0, x);

  for (std::size_t i = 0; i < total; ++i) {
    const double t = t0 + static_cast<double>(i) * h;
    const bool last = i + 1 == total;
    const double step = last ? t1 - t : h;
    rhs(x, t, k1);
    for (std::size_t c = 0; c < d; ++c) tmp[c] = x[c] + 0.5 * step * k1[c];
    rhs(tmp, t + 0.5 * step, k2);
    for (std::size_t c = 0; c < d; ++c) tmp[c] = x[c] + 0.5 * step * k2[c];
    rhs(tmp, t + 0.5 * step, k3);
    for (std::size_t c = 0; c < d; ++c) tmp[c] = x[c] + step * k3[c];
    rhs(tmp, t + step, k4);
    bool finite = true;
    for (std::size_t c = 0; c < d; ++c) {
      x[c] += step / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
      finite = finite && std::isfinite(x[c]);
    }
    result.steps = i + 1;
    const double t_new = last ? t1 : t0 + static_cast<double>(i + 1) * h;
    if (!finite) {
      result.status = IntegrationStatus::non_finite;
      std::ostringstream msg;
      msg << "non-finite state after step " << i + 1 << " at time " << t_new;
      result.diagnostic = msg.str();
      return result;
    }
    if (last || (i + 1) % store_every == 0) result.trajectory.push_back(t_new, x);
  }
  return result;
}

double full_step_count(double omega, double t0, double t1, std::size_t n_fast) {
  return omega * (t1 - t0) * static_cast<double>(n_fast) / two_pi;
}

IntegrationResult integrate_full(const OscillatoryField& field, double omega, TimeVariable slow,
                                 std::span<const double> x0, double t0, double t1, const FullOptions& options) {
  if (!(omega >= 10.0)) throw std::invalid_argument("integrate_full: omega must be >= 10");
  if (options.n_fast < 32) throw std::invalid_argument("integrate_full: need at least 32 steps per fast period");
  if (x0.size() != field.dim()) throw std::invalid_argument("integrate_full: initial state has wrong dimension");
  const double steps = full_step_count(omega, t0, t1, options.n_fast);
  if (steps > options.max_steps) {
    std::ostringstream msg;
    msg << "integrate_full: step budget exceeded (" << steps << " > " << options.max_steps
        << "); use a shorter span or a smaller omega";
    throw std::invalid_argument(msg.str());
  }
  const double slow_scale = std::pow(omega, -epsilon_power(slow));
  const double h = two_pi / (omega * static_cast<double>(options.n_fast));
  Rhs rhs = [&field, omega, slow_scale](std::span<const double> x, double t, std::span<double> dxdt) {
    field.eval_into(x, t * slow_scale, omega * t, dxdt);
  };
  IntegrateOptions opts;
  opts.store_every = options.store_every;
  opts.tag = TimeVariable::t;
  return integrate(rhs, x0, t0, t1, h, opts);
}

double error_norm(const Trajectory& a, const std::function<Vec(double)>& b) {
  double err = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Vec bv = b(a.time(i));
    const auto av = a.state(i);
    for (std::size_t c = 0; c < a.dim(); ++c) err = std::max(err, std::abs(av[c] - bv[c]));
  }
  return err;
}

double error_norm(const Trajectory& a, const Trajectory& b, double epsilon) {
  if (a.dim() != b.dim()) throw std::invalid_argument("error_norm: dimension mismatch");
  if (a.empty() || b.empty()) throw std::invalid_argument("error_norm: empty trajectory");
  const int pa = epsilon_power(a.time_variable());
  const int pb = epsilon_power(b.time_variable());
  if (pa != pb && !(epsilon > 0.0)) throw std::invalid_argument("error_norm: time variables differ, epsilon required");
  const double map = pa == pb ? 1.0 : std::pow(epsilon, pb - pa);
  const double slack = 1e-12 * std::max({1.0, std::abs(b.front_time()), std::abs(b.back_time())});
  double err = 0.0;
  std::size_t compared = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double tb = a.time(i) * map;
    if (tb < b.front_time() - slack || tb > b.back_time() + slack) continue;
    const Vec bv = b.at(std::clamp(tb, b.front_time(), b.back_time()));
    const auto av = a.state(i);
    for (std::size_t c = 0; c < a.dim(); ++c) err = std::max(err, std::abs(av[c] - bv[c]));
    ++compared;
  }
  if (compared == 0) throw std::invalid_argument("error_norm: trajectories have disjoint spans");
  return err;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  out << "time";
  for (std::size_t c = 0; c < traj.dim(); ++c) out << ",x" << c + 1;
  out << "\n";
  for (std::size_t i = 0; i < traj.size(); ++i) {
    out << format_double(traj.time(i));
    for (double v : traj.state(i)) out << ',' << format_double(v);
    out << "\n";
  }
}

Trajectory read_trajectory_csv(std::istream& in, TimeVariable tag) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("read_trajectory_csv: missing header");
  const std::size_t columns = static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
  if (line.rfind("time", 0) != 0 || columns < 2) throw std::invalid_argument("read_trajectory_csv: bad header '" + line + "'");
  Trajectory traj(columns - 1, tag);
  std::size_t line_no = 1;
  Vec row(columns);
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const char* p = line.c_str();
    for (std::size_t c = 0; c < columns; ++c) {
      char* end = nullptr;
      row[c] = std::strtod(p, &end);
      if (end == p || (c + 1 < columns && *end != ',') || (c + 1 == columns && *end != '\0'))
        throw std::invalid_argument("read_trajectory_csv: malformed line " + std::to_string(line_no));
      p = end + (c + 1 < columns ? 1 : 0);
    }
    traj.push_back(row[0], std::span<const double>(row).subspan(1));
  }
  return traj;
}

}  // namespace vibro
