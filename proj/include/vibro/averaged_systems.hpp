#pragma once

#include <functional>
#include <optional>
#include <span>
#include <stdexcept>

#include "vibro/classifier.hpp"
#include "vibro/dl.hpp"
#include "vibro/field.hpp"
#include "vibro/integrators.hpp"
#include "vibro/linalg.hpp"

namespace vibro {

/// Closed averaged ODE system for one distinguished limit. The `time` argument
/// of the right-hand sides is the slow variable, which is also the field's s.
struct AveragedSystem {
  DL dl = DL::DL1;
  TimeVariable time_variable = TimeVariable::t;
  std::function<Vec(std::span<const double> x, double time)> rhs_zeroth;
  /// DL-1 only: dx̄₁/dt = (x̄₁·∇)ū(x̄₀, t) + V₂(x̄₀, t).
  std::function<Vec(std::span<const double> xi, std::span<const double> x0, double time)> rhs_first;
};

class ClassificationMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct BuildOptions {
  /// When set, the degeneracy required by the DL is checked on this lattice.
  std::optional<SamplingDomain> check;
  double tol = 1e-8;
  /// DL-1 only: drop V₂ to get the homogeneous (plain linearization) first-order system.
  bool include_drift = true;
  const TauGrid* grid = nullptr;
};

AveragedSystem build_dl1(const OscillatoryField& field, const BuildOptions& options = {});
AveragedSystem build_dl2(const OscillatoryField& field, const BuildOptions& options = {});
AveragedSystem build_dl3(const OscillatoryField& field, const BuildOptions& options = {});

/// Dispatches on a classification; throws for FullyDegenerate.
AveragedSystem build_for(const OscillatoryField& field, const DLClassification& c, const BuildOptions& options = {});

struct AveragedSolution {
  Trajectory x0;
  std::optional<Trajectory> x1;
};

/// RK4 solution of the averaged system on [0, window]. For DL-1 with
/// `with_first`, x̄₀ and x̄₁ are integrated together; x̄₁(0) defaults to 0.
AveragedSolution solve_averaged(const AveragedSystem& system, std::span<const double> x0, double window, double h,
                                bool with_first = true, std::optional<Vec> x1_initial = std::nullopt);

struct ComposeOptions {
  bool include_oscillation = true;
  const TauGrid* grid = nullptr;
};

/// x(t) ≈ x̄₀(σ) + ε(x̄₁(σ) + ũ^τ(x̄₀(σ), σ, t/ε)), σ = εᵖ t from x̄₀'s time variable.
/// x̄₁ enters only when supplied (DL-1).
class CompositeSolution {
 public:
  CompositeSolution(Trajectory x0, std::optional<Trajectory> x1, OscillatoryField field, double epsilon,
                    ComposeOptions options = {});

  /// Throws std::out_of_range when t maps outside the averaged trajectory.
  Vec operator()(double t) const;

  double epsilon() const { return epsilon_; }
  /// Physical-time span covered by the averaged trajectory.
  double t_end() const;

 private:
  Trajectory x0_;
  std::optional<Trajectory> x1_;
  OscillatoryField field_;
  double epsilon_;
  ComposeOptions options_;
};

CompositeSolution compose_solution(const Trajectory& x0, const Trajectory* x1, const OscillatoryField& field,
                                   double epsilon, const ComposeOptions& options = {});

}  // namespace vibro
