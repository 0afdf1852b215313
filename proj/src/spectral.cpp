#include "vibro/spectral.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace vibro {

double reduce_phase(double tau) {
  double r = std::fmod(tau, two_pi);
  if (r < 0.0) r += two_pi;
  return r;
}

TauGrid::TauGrid(std::size_t samples, double origin) : n_(samples), half_(samples / 2), origin_(origin) {
  if (samples < 4 || samples % 2 != 0)
    throw std::invalid_argument("TauGrid: samples per period must be even and >= 4, got " + std::to_string(samples));
  tau_.resize(n_);
  cos_.resize(n_ * (half_ + 1));
  sin_.resize(n_ * (half_ + 1));
  for (std::size_t n = 0; n < n_; ++n) {
    tau_[n] = origin_ + two_pi * static_cast<double>(n) / static_cast<double>(n_);
    for (std::size_t k = 0; k <= half_; ++k) {
      // k·n mod N keeps the table argument small and exact for origin 0.
      const double arg = origin_ * static_cast<double>(k) +
                         two_pi * static_cast<double>((k * n) % n_) / static_cast<double>(n_);
      cos_[n * (half_ + 1) + k] = std::cos(arg);
      sin_[n * (half_ + 1) + k] = std::sin(arg);
    }
  }
}

const TauGrid& TauGrid::standard() {
  static const TauGrid grid(256);
  return grid;
}

HarmonicSeries::HarmonicSeries(std::size_t dim, std::size_t harmonics)
    : dim_(dim), harmonics_(harmonics), coeffs_((2 * harmonics + 1) * dim, 0.0) {}

void HarmonicSeries::eval_into(double tau, std::span<double> out) const {
  const auto m = mean();
  for (std::size_t i = 0; i < dim_; ++i) out[i] = m[i];
  if (harmonics_ == 0) return;
  const double c1 = std::cos(tau);
  const double s1 = std::sin(tau);
  double ck = c1;
  double sk = s1;
  for (std::size_t k = 1; k <= harmonics_; ++k) {
    const auto a = cos(k);
    const auto b = sin(k);
    for (std::size_t i = 0; i < dim_; ++i) out[i] += a[i] * ck + b[i] * sk;
    const double cn = ck * c1 - sk * s1;
    const double sn = sk * c1 + ck * s1;
    ck = cn;
    sk = sn;
  }
}

Vec HarmonicSeries::operator()(double tau) const {
  Vec out(dim_);
  eval_into(tau, out);
  return out;
}

HarmonicSeries HarmonicSeries::oscillating() const {
  HarmonicSeries r = *this;
  for (double& v : r.mean()) v = 0.0;
  return r;
}

HarmonicSeries HarmonicSeries::tilde_integral() const {
  HarmonicSeries r(dim_, harmonics_);
  for (std::size_t k = 1; k <= harmonics_; ++k) {
    const double inv_k = 1.0 / static_cast<double>(k);
    for (std::size_t i = 0; i < dim_; ++i) {
      r.sin(k)[i] = cos(k)[i] * inv_k;
      r.cos(k)[i] = -sin(k)[i] * inv_k;
    }
  }
  return r;
}

HarmonicSeries HarmonicSeries::derivative() const {
  HarmonicSeries r(dim_, harmonics_);
  for (std::size_t k = 1; k <= harmonics_; ++k) {
    const double kk = static_cast<double>(k);
    for (std::size_t i = 0; i < dim_; ++i) {
      r.cos(k)[i] = sin(k)[i] * kk;
      r.sin(k)[i] = -cos(k)[i] * kk;
    }
  }
  return r;
}

std::vector<double> HarmonicSeries::sample(const TauGrid& grid) const {
  std::vector<double> out(grid.size() * dim_);
  const auto m = mean();
  for (std::size_t n = 0; n < grid.size(); ++n) {
    double* row = out.data() + n * dim_;
    for (std::size_t i = 0; i < dim_; ++i) row[i] = m[i];
    for (std::size_t k = 1; k <= harmonics_; ++k) {
      // Harmonics past the table alias on this grid; sample them directly.
      const bool tabled = k <= grid.size() / 2;
      const double arg = static_cast<double>(k) * grid.tau(n);
      const double ck = tabled ? grid.cos_kt(n, k) : std::cos(arg);
      const double sk = tabled ? grid.sin_kt(n, k) : std::sin(arg);
      const auto a = cos(k);
      const auto b = sin(k);
      for (std::size_t i = 0; i < dim_; ++i) row[i] += a[i] * ck + b[i] * sk;
    }
  }
  return out;
}

HarmonicSeries HarmonicSeries::project(std::span<const double> samples, std::size_t dim, const TauGrid& grid,
                                       std::size_t harmonics) {
  const std::size_t n_nodes = grid.size();
  if (samples.size() != n_nodes * dim) throw std::invalid_argument("HarmonicSeries::project: sample count mismatch");
  if (harmonics > grid.max_harmonic())
    throw std::invalid_argument("HarmonicSeries::project: need 2K+1 < samples (K=" + std::to_string(harmonics) +
                                ", samples=" + std::to_string(n_nodes) + ")");
  HarmonicSeries r(dim, harmonics);
  const double inv_n = 1.0 / static_cast<double>(n_nodes);
  auto m = r.mean();
  for (std::size_t n = 0; n < n_nodes; ++n) {
    const double* row = samples.data() + n * dim;
    for (std::size_t i = 0; i < dim; ++i) m[i] += row[i];
    for (std::size_t k = 1; k <= harmonics; ++k) {
      const double ck = grid.cos_kt(n, k);
      const double sk = grid.sin_kt(n, k);
      auto a = r.cos(k);
      auto b = r.sin(k);
      for (std::size_t i = 0; i < dim; ++i) {
        a[i] += row[i] * ck;
        b[i] += row[i] * sk;
      }
    }
  }
  for (std::size_t i = 0; i < dim; ++i) m[i] *= inv_n;
  for (std::size_t k = 1; k <= harmonics; ++k) {
    for (double& v : r.cos(k)) v *= 2.0 * inv_n;
    for (double& v : r.sin(k)) v *= 2.0 * inv_n;
  }
  return r;
}

double HarmonicSeries::energy_above(std::size_t k_keep) const {
  double e = 0.0;
  for (std::size_t k = k_keep + 1; k <= harmonics_; ++k)
    for (std::size_t i = 0; i < dim_; ++i) e += 0.5 * (cos(k)[i] * cos(k)[i] + sin(k)[i] * sin(k)[i]);
  return e;
}

HarmonicSeries& HarmonicSeries::operator+=(const HarmonicSeries& other) {
  if (other.dim_ != dim_ || other.harmonics_ != harmonics_) throw std::invalid_argument("HarmonicSeries: shape mismatch");
  for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] += other.coeffs_[k];
  return *this;
}

HarmonicSeries& HarmonicSeries::operator-=(const HarmonicSeries& other) {
  if (other.dim_ != dim_ || other.harmonics_ != harmonics_) throw std::invalid_argument("HarmonicSeries: shape mismatch");
  for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] -= other.coeffs_[k];
  return *this;
}

HarmonicSeries& HarmonicSeries::operator*=(double s) {
  for (double& v : coeffs_) v *= s;
  return *this;
}

HarmonicSeries operator-(HarmonicSeries a, const HarmonicSeries& b) { return a -= b; }
HarmonicSeries operator*(double s, HarmonicSeries a) { return a *= s; }

}  // namespace vibro
