#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "vibro/field.hpp"
#include "vibro/linalg.hpp"
#include "vibro/spectral.hpp"

namespace vibro {

/// (1/2π)∫ g dτ by the trapezoid rule on `grid`.
double tau_average(const std::function<double(double)>& g, const TauGrid& grid = TauGrid::standard());
Vec tau_average(const std::function<Vec(double)>& g, const TauGrid& grid = TauGrid::standard());

class NotTildeClass : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct TildeOptions {
  double tol_mean = 1e-8;
  const TauGrid* grid = nullptr;  // default: TauGrid::standard()
};

/// Zero-mean τ-antiderivative g̃^τ of a zero-mean periodic function, obtained
/// through its harmonic coefficients. Throws NotTildeClass if |⟨g⟩| > tol_mean.
HarmonicSeries tilde_integrate(const std::function<double(double)>& g, const TildeOptions& options = {});
/// Exact per-harmonic rule on an already-known series.
HarmonicSeries tilde_integrate(const HarmonicSeries& g, double tol_mean = 1e-8);

/// Chooses where ∇₀ is taken: at a fast phase τ, or on the τ-averaged field.
struct JacobianAt {
  bool averaged = false;
  double tau = 0.0;
  static JacobianAt phase(double t) { return {false, t}; }
  static JacobianAt mean() { return {true, 0.0}; }
};

/// Central-difference step for coordinate value v: 1e-6·(1 + |v|).
inline double fd_step(double v) { return 1e-6 * (1.0 + std::abs(v)); }

using VectorFn = std::function<Vec(std::span<const double> x, double s)>;

/// J[i][j] = ∂uᵢ/∂xⱼ; analytic when the field supplies it, otherwise central differences.
Matrix jacobian(const OscillatoryField& field, std::span<const double> x, double s, JacobianAt at,
                const TauGrid& grid = TauGrid::standard());

/// Central-difference Jacobian of an arbitrary vector function.
Matrix finite_difference_jacobian(const VectorFn& f, std::span<const double> x, double s);

/// [u, v] = (v·∇)u − (u·∇)v.
Vec commutator(const VectorFn& u, const VectorFn& v, std::span<const double> x, double s);

enum class DriftMethod { advective, commutator };

struct DriftOptions {
  DriftMethod method = DriftMethod::commutator;
  /// Also evaluate the other path (V₂) or a doubled step (V₃), filling `residual`.
  bool cross_check = false;
  const TauGrid* grid = nullptr;  // default: TauGrid::standard()
};

struct DriftEvaluation {
  Vec value;
  DriftMethod method = DriftMethod::commutator;
  std::size_t quadrature_samples = 0;
  std::optional<double> residual;
  std::string warning;
};

/// V₂ = ⟨(ũ^τ·∇)ũ⟩ (advective) = ½⟨[ũ, ũ^τ]⟩ (commutator).
DriftEvaluation drift_v2(const OscillatoryField& field, std::span<const double> x, double s,
                         const DriftOptions& options = {});

/// V₃ = ⅓⟨[[ũ, ũ^τ], ũ^τ]⟩. The outer gradient uses fourth-order central
/// differences with step 1e-3·(1 + |xⱼ|).
DriftEvaluation drift_v3(const OscillatoryField& field, std::span<const double> x, double s,
                         const DriftOptions& options = {});

/// Harmonic series of ũ^τ(x, s, ·), the first oscillatory correction.
HarmonicSeries oscillation_primitive(const OscillatoryField& field, std::span<const double> x, double s,
                                     const TauGrid& grid = TauGrid::standard());

/// Local harmonic expansion of u and its x-gradient at one (x, s).
struct LocalExpansion {
  HarmonicSeries u;
  std::vector<HarmonicSeries> du;  // du[j] = ∂u/∂xⱼ
};

enum class StencilOrder { second, fourth };

/// `rel_step` scales the step as rel_step·(1 + |xⱼ|).
LocalExpansion local_expansion(const OscillatoryField& field, std::span<const double> x, double s,
                               const TauGrid& grid, StencilOrder order = StencilOrder::second,
                               double rel_step = 1e-6);

}  // namespace vibro
