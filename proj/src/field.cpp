#include "vibro/field.hpp"

#include <cmath>
#include <sstream>

namespace vibro {

OscillatoryField::OscillatoryField(std::size_t dim, FieldFn eval, JacobianFn jacobian)
    : dim_(dim), eval_(std::move(eval)), jacobian_(std::move(jacobian)) {
  if (dim_ == 0) throw std::invalid_argument("OscillatoryField: dimension must be positive");
  if (!eval_) throw std::invalid_argument("OscillatoryField: empty evaluator");
}

OscillatoryField OscillatoryField::from_fourier(FourierField fourier) {
  if (fourier.dim == 0) throw std::invalid_argument("FourierField: dimension must be positive");
  auto record = std::make_shared<const FourierField>(std::move(fourier));
  OscillatoryField f(record->dim, [record](std::span<const double> x, double s, double tau, std::span<double> out) {
    record->coefficients(x, s).eval_into(tau, out);
  });
  f.fourier_ = std::move(record);
  return f;
}

OscillatoryField OscillatoryField::scaled(double c) const {
  OscillatoryField f = *this;
  f.eval_ = [inner = eval_, c](std::span<const double> x, double s, double tau, std::span<double> out) {
    inner(x, s, tau, out);
    for (double& v : out) v *= c;
  };
  if (jacobian_) {
    f.jacobian_ = [inner = jacobian_, c](std::span<const double> x, double s, double tau, std::span<double> out) {
      inner(x, s, tau, out);
      for (double& v : out) v *= c;
    };
  }
  if (fourier_) {
    FourierField scaled_record = *fourier_;
    auto scale = [c](CoeffFn& fn) {
      if (!fn) return;
      fn = [inner = fn, c](std::span<const double> x, double s, std::span<double> out) {
        inner(x, s, out);
        for (double& v : out) v *= c;
      };
    };
    scale(scaled_record.mean_coeff);
    for (auto& fn : scaled_record.cos_coeffs) scale(fn);
    for (auto& fn : scaled_record.sin_coeffs) scale(fn);
    if (scaled_record.bulk) {
      scaled_record.bulk = [inner = scaled_record.bulk, c](std::span<const double> x, double s) {
        return c * inner(x, s);
      };
    }
    f.fourier_ = std::make_shared<const FourierField>(std::move(scaled_record));
  }
  return f;
}

HarmonicSeries FourierField::coefficients(std::span<const double> x, double s) const {
  if (bulk) return bulk(x, s);
  const std::size_t k_max = harmonics();
  HarmonicSeries r(dim, k_max);
  if (mean_coeff) mean_coeff(x, s, r.mean());
  for (std::size_t k = 1; k <= k_max; ++k) {
    if (k <= cos_coeffs.size() && cos_coeffs[k - 1]) cos_coeffs[k - 1](x, s, r.cos(k));
    if (k <= sin_coeffs.size() && sin_coeffs[k - 1]) sin_coeffs[k - 1](x, s, r.sin(k));
  }
  return r;
}

Vec FourierField::evaluate(std::span<const double> x, double s, double tau) const {
  return coefficients(x, s)(reduce_phase(tau));
}

void SamplingDomain::validate() const {
  if (box.empty()) throw std::invalid_argument("SamplingDomain: empty box");
  for (std::size_t i = 0; i < box.size(); ++i) {
    if (!(box[i].first < box[i].second)) {
      std::ostringstream msg;
      msg << "SamplingDomain: axis " << i << " needs lo < hi, got [" << box[i].first << ", " << box[i].second << "]";
      throw std::invalid_argument(msg.str());
    }
  }
  if (tau_samples_per_period < 4 || tau_samples_per_period % 2 != 0)
    throw std::invalid_argument("SamplingDomain: tau samples per period must be even and >= 4");
  if (x_grid_points_per_axis == 0) throw std::invalid_argument("SamplingDomain: need at least one point per axis");
  if (s_samples.empty()) throw std::invalid_argument("SamplingDomain: need at least one s sample");
}

std::vector<Vec> SamplingDomain::x_points() const {
  const std::size_t d = box.size();
  const std::size_t m = x_grid_points_per_axis;
  std::size_t total = 1;
  for (std::size_t i = 0; i < d; ++i) total *= m;
  std::vector<Vec> pts;
  pts.reserve(total);
  std::vector<std::size_t> idx(d, 0);
  for (std::size_t p = 0; p < total; ++p) {
    Vec x(d);
    for (std::size_t i = 0; i < d; ++i) {
      const auto [lo, hi] = box[i];
      x[i] = m == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * static_cast<double>(idx[i]) / static_cast<double>(m - 1);
    }
    pts.push_back(std::move(x));
    for (std::size_t i = 0; i < d; ++i) {
      if (++idx[i] < m) break;
      idx[i] = 0;
    }
  }
  return pts;
}

Vec evaluate(const OscillatoryField& field, std::span<const double> x, double s, double tau) {
  if (x.size() != field.dim()) throw std::invalid_argument("evaluate: state has wrong dimension");
  Vec out(field.dim());
  field.eval_into(x, s, tau, out);
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!std::isfinite(out[i])) {
      std::ostringstream msg;
      msg << "non-finite field value in component " << i << " at s=" << s << ", tau=" << tau;
      throw NonFiniteValue(msg.str(), i);
    }
  }
  return out;
}

namespace {

HarmonicSeries sampled_projection(const OscillatoryField& field, std::span<const double> x, double s,
                                  const TauGrid& grid, std::size_t harmonics) {
  const std::size_t d = field.dim();
  std::vector<double> samples(grid.size() * d);
  for (std::size_t n = 0; n < grid.size(); ++n)
    field.eval_into(x, s, grid.tau(n), std::span<double>(samples.data() + n * d, d));
  return HarmonicSeries::project(samples, d, grid, harmonics);
}

}  // namespace

HarmonicSeries harmonic_snapshot(const OscillatoryField& field, std::span<const double> x, double s,
                                 const TauGrid& grid) {
  if (const FourierField* f = field.fourier()) return f->coefficients(x, s);
  return sampled_projection(field, x, s, grid, grid.max_harmonic());
}

FourierField fit_fourier(const OscillatoryField& field, std::size_t harmonics, const FitOptions& options) {
  auto grid = std::make_shared<const TauGrid>(options.tau_samples);
  if (harmonics > grid->max_harmonic())
    throw std::invalid_argument("fit_fourier: need 2K+1 < tau samples");

  FourierField out;
  out.dim = field.dim();
  const std::size_t d = field.dim();
  auto project = [field, grid, harmonics](std::span<const double> x, double s) {
    return sampled_projection(field, x, s, *grid, harmonics);
  };
  out.bulk = project;
  out.mean_coeff = [project, d](std::span<const double> x, double s, std::span<double> o) {
    const auto c = project(x, s);
    for (std::size_t i = 0; i < d; ++i) o[i] = c.mean()[i];
  };
  out.cos_coeffs.resize(harmonics);
  out.sin_coeffs.resize(harmonics);
  for (std::size_t k = 1; k <= harmonics; ++k) {
    out.cos_coeffs[k - 1] = [project, d, k](std::span<const double> x, double s, std::span<double> o) {
      const auto c = project(x, s);
      for (std::size_t i = 0; i < d; ++i) o[i] = c.cos(k)[i];
    };
    out.sin_coeffs[k - 1] = [project, d, k](std::span<const double> x, double s, std::span<double> o) {
      const auto c = project(x, s);
      for (std::size_t i = 0; i < d; ++i) o[i] = c.sin(k)[i];
    };
  }

  std::vector<std::pair<Vec, double>> probes = options.probes;
  if (probes.empty()) probes.emplace_back(Vec(d, 0.0), 0.0);
  for (const auto& [x, s] : probes) {
    const auto full = sampled_projection(field, x, s, *grid, grid->max_harmonic());
    const double total = full.oscillating_energy();
    const double beyond = full.energy_above(harmonics);
    if (total > 0.0 && beyond > options.alias_threshold * total) {
      std::ostringstream msg;
      msg << "energy beyond harmonic " << harmonics << " is " << beyond / total
          << " of the oscillating energy at s=" << s << "; increase K";
      out.aliasing_warning = msg.str();
      break;
    }
  }
  return out;
}

Vec mean_part(const OscillatoryField& field, std::span<const double> x, double s, const TauGrid& grid) {
  const std::size_t d = field.dim();
  Vec m(d, 0.0);
  if (const FourierField* f = field.fourier()) {
    if (f->mean_coeff) f->mean_coeff(x, s, m);
    return m;
  }
  Vec buf(d);
  for (std::size_t n = 0; n < grid.size(); ++n) {
    field.eval_into(x, s, grid.tau(n), buf);
    for (std::size_t i = 0; i < d; ++i) m[i] += buf[i];
  }
  for (double& v : m) v /= static_cast<double>(grid.size());
  return m;
}

Vec osc_part(const OscillatoryField& field, std::span<const double> x, double s, double tau, const TauGrid& grid) {
  return evaluate(field, x, s, tau) - mean_part(field, x, s, grid);
}

}  // namespace vibro
