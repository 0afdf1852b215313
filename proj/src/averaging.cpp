#include "vibro/averaging.hpp"

#include <cmath>
#include <sstream>

namespace vibro {

namespace {

const TauGrid& grid_or_default(const TauGrid* g) { return g ? *g : TauGrid::standard(); }

// ⟨f_a g_b⟩ for zero-mean series with equal harmonic count (Parseval).
double parseval(const HarmonicSeries& f, std::size_t a, const HarmonicSeries& g, std::size_t b) {
  double acc = 0.0;
  for (std::size_t k = 1; k <= f.harmonics(); ++k) acc += f.cos(k)[a] * g.cos(k)[b] + f.sin(k)[a] * g.sin(k)[b];
  return 0.5 * acc;
}

std::size_t expansion_harmonics(const OscillatoryField& field, const HarmonicSeries& u, const TauGrid& grid) {
  return field.fourier() ? u.harmonics() : grid.max_harmonic();
}

HarmonicSeries shifted_snapshot(const OscillatoryField& field, std::span<const double> x, double s,
                                const TauGrid& grid, std::size_t j, double delta) {
  Vec xs(x.begin(), x.end());
  xs[j] += delta;
  return harmonic_snapshot(field, xs, s, grid);
}

}  // namespace

double tau_average(const std::function<double(double)>& g, const TauGrid& grid) {
  double acc = 0.0;
  for (std::size_t n = 0; n < grid.size(); ++n) acc += g(grid.tau(n));
  return acc / static_cast<double>(grid.size());
}

Vec tau_average(const std::function<Vec(double)>& g, const TauGrid& grid) {
  Vec acc;
  for (std::size_t n = 0; n < grid.size(); ++n) {
    const Vec v = g(grid.tau(n));
    if (acc.empty()) acc.assign(v.size(), 0.0);
    for (std::size_t i = 0; i < v.size(); ++i) acc[i] += v[i];
  }
  for (double& v : acc) v /= static_cast<double>(grid.size());
  return acc;
}

HarmonicSeries tilde_integrate(const std::function<double(double)>& g, const TildeOptions& options) {
  const TauGrid& grid = grid_or_default(options.grid);
  std::vector<double> samples(grid.size());
  for (std::size_t n = 0; n < grid.size(); ++n) samples[n] = g(grid.tau(n));
  const auto series = HarmonicSeries::project(samples, 1, grid, grid.max_harmonic());
  return tilde_integrate(series, options.tol_mean);
}

HarmonicSeries tilde_integrate(const HarmonicSeries& g, double tol_mean) {
  const double m = max_norm(g.mean());
  if (m > tol_mean) {
    std::ostringstream msg;
    msg << "input not in tilde class: |mean| = " << m << " exceeds " << tol_mean;
    throw NotTildeClass(msg.str());
  }
  return g.tilde_integral();
}

Matrix finite_difference_jacobian(const VectorFn& f, std::span<const double> x, double s) {
  const std::size_t d = x.size();
  Matrix jac;
  Vec xp(x.begin(), x.end());
  for (std::size_t j = 0; j < d; ++j) {
    const double h = fd_step(x[j]);
    xp[j] = x[j] + h;
    const Vec fp = f(xp, s);
    xp[j] = x[j] - h;
    const Vec fm = f(xp, s);
    xp[j] = x[j];
    if (jac.rows() == 0) jac = Matrix(fp.size(), d);
    for (std::size_t i = 0; i < fp.size(); ++i) jac(i, j) = (fp[i] - fm[i]) / (2.0 * h);
  }
  return jac;
}

Matrix jacobian(const OscillatoryField& field, std::span<const double> x, double s, JacobianAt at,
                const TauGrid& grid) {
  const std::size_t d = field.dim();
  if (field.has_jacobian()) {
    Matrix jac(d, d);
    if (!at.averaged) {
      field.jacobian_into(x, s, at.tau, jac.data());
      return jac;
    }
    Matrix buf(d, d);
    for (std::size_t n = 0; n < grid.size(); ++n) {
      field.jacobian_into(x, s, grid.tau(n), buf.data());
      jac = jac + buf;
    }
    return (1.0 / static_cast<double>(grid.size())) * jac;
  }
  if (at.averaged) {
    return finite_difference_jacobian(
        [&](std::span<const double> y, double ss) { return mean_part(field, y, ss, grid); }, x, s);
  }
  return finite_difference_jacobian(
      [&](std::span<const double> y, double ss) {
        Vec out(d);
        field.eval_into(y, ss, at.tau, out);
        return out;
      },
      x, s);
}

Vec commutator(const VectorFn& u, const VectorFn& v, std::span<const double> x, double s) {
  const Matrix ju = finite_difference_jacobian(u, x, s);
  const Matrix jv = finite_difference_jacobian(v, x, s);
  return ju.apply(v(x, s)) - jv.apply(u(x, s));
}

LocalExpansion local_expansion(const OscillatoryField& field, std::span<const double> x, double s,
                               const TauGrid& grid, StencilOrder order, double rel_step) {
  const std::size_t d = field.dim();
  LocalExpansion e;
  e.u = harmonic_snapshot(field, x, s, grid);
  e.du.reserve(d);
  if (field.has_jacobian()) {
    std::vector<double> samples(grid.size() * d * d);
    for (std::size_t n = 0; n < grid.size(); ++n)
      field.jacobian_into(x, s, grid.tau(n), std::span<double>(samples.data() + n * d * d, d * d));
    const auto jac = HarmonicSeries::project(samples, d * d, grid, expansion_harmonics(field, e.u, grid));
    for (std::size_t j = 0; j < d; ++j) {
      HarmonicSeries col(d, jac.harmonics());
      auto src = jac.coefficients();
      auto dst = col.coefficients();
      for (std::size_t block = 0; block < 2 * jac.harmonics() + 1; ++block)
        for (std::size_t i = 0; i < d; ++i) dst[block * d + i] = src[block * d * d + i * d + j];
      e.du.push_back(std::move(col));
    }
    return e;
  }
  for (std::size_t j = 0; j < d; ++j) {
    const double h = rel_step * (1.0 + std::abs(x[j]));
    HarmonicSeries deriv;
    if (order == StencilOrder::second) {
      deriv = shifted_snapshot(field, x, s, grid, j, h) - shifted_snapshot(field, x, s, grid, j, -h);
      deriv *= 1.0 / (2.0 * h);
    } else {
      deriv = 8.0 * shifted_snapshot(field, x, s, grid, j, h);
      deriv -= 8.0 * shifted_snapshot(field, x, s, grid, j, -h);
      deriv -= shifted_snapshot(field, x, s, grid, j, 2.0 * h);
      deriv += shifted_snapshot(field, x, s, grid, j, -2.0 * h);
      deriv *= 1.0 / (12.0 * h);
    }
    e.du.push_back(std::move(deriv));
  }
  return e;
}

HarmonicSeries oscillation_primitive(const OscillatoryField& field, std::span<const double> x, double s,
                                     const TauGrid& grid) {
  return harmonic_snapshot(field, x, s, grid).tilde_integral();
}

namespace {

Vec v2_advective(const LocalExpansion& e, const TauGrid& grid) {
  const std::size_t d = e.u.dim();
  const auto ut = e.u.tilde_integral().sample(grid);
  Vec v(d, 0.0);
  for (std::size_t j = 0; j < d; ++j) {
    const auto duj = e.du[j].oscillating().sample(grid);
    for (std::size_t n = 0; n < grid.size(); ++n)
      for (std::size_t i = 0; i < d; ++i) v[i] += ut[n * d + j] * duj[n * d + i];
  }
  for (double& c : v) c /= static_cast<double>(grid.size());
  return v;
}

Vec v2_commutator(const LocalExpansion& e) {
  const std::size_t d = e.u.dim();
  const auto u_osc = e.u.oscillating();
  const auto ut = e.u.tilde_integral();
  Vec v(d, 0.0);
  for (std::size_t j = 0; j < d; ++j) {
    const auto duj = e.du[j].oscillating();
    const auto duj_t = duj.tilde_integral();
    for (std::size_t i = 0; i < d; ++i) v[i] += 0.5 * (parseval(duj, i, ut, j) - parseval(duj_t, i, u_osc, j));
  }
  return v;
}

std::string resolution_warning(double residual, std::size_t samples) {
  if (residual <= 1e-6) return {};
  std::ostringstream msg;
  msg << "drift paths disagree by " << residual << " at " << samples << " tau samples; try " << 2 * samples;
  return msg.str();
}

// Node-major samples of w = [ũ, ũ^τ] = J_ũ ũ^τ − J_{ũ^τ} ũ.
std::vector<double> inner_bracket(const LocalExpansion& e, const TauGrid& grid) {
  const std::size_t d = e.u.dim();
  const auto u_osc = e.u.oscillating().sample(grid);
  const auto ut = e.u.tilde_integral().sample(grid);
  std::vector<double> w(grid.size() * d, 0.0);
  for (std::size_t j = 0; j < d; ++j) {
    const auto duj = e.du[j].oscillating();
    const auto a = duj.sample(grid);
    const auto b = duj.tilde_integral().sample(grid);
    for (std::size_t n = 0; n < grid.size(); ++n)
      for (std::size_t i = 0; i < d; ++i) w[n * d + i] += a[n * d + i] * ut[n * d + j] - b[n * d + i] * u_osc[n * d + j];
  }
  return w;
}

Vec v3_value(const OscillatoryField& field, std::span<const double> x, double s, const TauGrid& grid, double rel_step) {
  const std::size_t d = field.dim();
  const auto expand = [&](std::span<const double> y) {
    return local_expansion(field, y, s, grid, StencilOrder::fourth, rel_step);
  };
  const LocalExpansion e = expand(x);
  const auto w = inner_bracket(e, grid);
  const auto ut = e.u.tilde_integral().sample(grid);
  const std::size_t n_nodes = grid.size();

  Vec v(d, 0.0);
  Vec xs(x.begin(), x.end());
  for (std::size_t j = 0; j < d; ++j) {
    const double h = rel_step * (1.0 + std::abs(x[j]));
    auto w_shift = [&](double delta) {
      xs[j] = x[j] + delta;
      auto r = inner_bracket(expand(xs), grid);
      xs[j] = x[j];
      return r;
    };
    const auto wp1 = w_shift(h);
    const auto wm1 = w_shift(-h);
    const auto wp2 = w_shift(2.0 * h);
    const auto wm2 = w_shift(-2.0 * h);
    const auto dut_t = e.du[j].oscillating().tilde_integral().sample(grid);
    for (std::size_t n = 0; n < n_nodes; ++n) {
      for (std::size_t i = 0; i < d; ++i) {
        const std::size_t a = n * d + i;
        const double dw = (8.0 * (wp1[a] - wm1[a]) - (wp2[a] - wm2[a])) / (12.0 * h);
        v[i] += dw * ut[n * d + j] - dut_t[a] * w[n * d + j];
      }
    }
  }
  for (double& c : v) c /= 3.0 * static_cast<double>(n_nodes);
  return v;
}

}  // namespace

DriftEvaluation drift_v2(const OscillatoryField& field, std::span<const double> x, double s,
                         const DriftOptions& options) {
  if (x.size() != field.dim()) throw std::invalid_argument("drift_v2: state has wrong dimension");
  const TauGrid& grid = grid_or_default(options.grid);
  const LocalExpansion e = local_expansion(field, x, s, grid);
  DriftEvaluation r;
  r.method = options.method;
  r.quadrature_samples = grid.size();
  r.value = options.method == DriftMethod::advective ? v2_advective(e, grid) : v2_commutator(e);
  if (options.cross_check) {
    const Vec other = options.method == DriftMethod::advective ? v2_commutator(e) : v2_advective(e, grid);
    r.residual = max_norm(r.value - other);
    r.warning = resolution_warning(*r.residual, grid.size());
  }
  return r;
}

DriftEvaluation drift_v3(const OscillatoryField& field, std::span<const double> x, double s,
                         const DriftOptions& options) {
  if (x.size() != field.dim()) throw std::invalid_argument("drift_v3: state has wrong dimension");
  const TauGrid& grid = grid_or_default(options.grid);
  DriftEvaluation r;
  r.method = DriftMethod::commutator;
  r.quadrature_samples = grid.size();
  r.value = v3_value(field, x, s, grid, 1e-3);
  if (options.cross_check) {
    r.residual = max_norm(r.value - v3_value(field, x, s, grid, 2e-3));
    r.warning = resolution_warning(*r.residual, grid.size());
  }
  return r;
}

}  // namespace vibro
