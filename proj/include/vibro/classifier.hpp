#pragma once

#include <string>
#include <vector>

#include "vibro/dl.hpp"
#include "vibro/field.hpp"
#include "vibro/linalg.hpp"

namespace vibro {

struct ScanRow {
  Vec x;
  double s = 0.0;
  double mean_norm = 0.0;
  double v2_norm = 0.0;
  double v3_norm = 0.0;
};

struct ScanOptions {
  bool with_v2 = true;
  bool with_v3 = true;
};

/// Tabulates |⟨u⟩|, |V₂| and |V₃| (Euclidean norms) over the lattice.
std::vector<ScanRow> degeneracy_scan(const OscillatoryField& field, const SamplingDomain& scan,
                                     const ScanOptions& options = {});

/// Root-mean-square of |u| over the lattice and one period of τ.
double field_rms(const OscillatoryField& field, const SamplingDomain& scan);

struct DLClassification {
  DL dl = DL::FullyDegenerate;
  double max_mean_norm = 0.0;
  double max_v2_norm = 0.0;
  double max_v3_norm = 0.0;
  SamplingDomain scan;
  double tol = 0.0;
  double rms = 0.0;
  /// Absolute thresholds tol·rms, tol·rms², tol·rms³ for the three levels.
  double mean_threshold = 0.0;
  double v2_threshold = 0.0;
  double v3_threshold = 0.0;
  std::vector<std::string> diagnostics;
  std::vector<ScanRow> table;
};

/// Finds the first non-degenerate level of the chain ū → V₂ → V₃.
/// `tol` is relative: the level-p norm is compared with tol·rmsᵖ.
/// Throws std::invalid_argument for lattices with fewer than 2 points per axis.
DLClassification classify(const OscillatoryField& field, const SamplingDomain& scan, double tol = 1e-8);

/// Multi-line human-readable report.
std::string describe(const DLClassification& c);

}  // namespace vibro
