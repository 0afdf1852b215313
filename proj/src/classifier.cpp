#include "vibro/classifier.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "vibro/averaging.hpp"

namespace vibro {

std::vector<ScanRow> degeneracy_scan(const OscillatoryField& field, const SamplingDomain& scan,
                                     const ScanOptions& options) {
  scan.validate();
  if (scan.dim() != field.dim()) throw std::invalid_argument("degeneracy_scan: box dimension differs from field");
  const TauGrid grid(scan.tau_samples_per_period);
  DriftOptions drift_opts;
  drift_opts.grid = &grid;
  std::vector<ScanRow> rows;
  for (double s : scan.s_samples) {
    for (const Vec& x : scan.x_points()) {
      ScanRow r;
      r.x = x;
      r.s = s;
      r.mean_norm = euclidean_norm(mean_part(field, x, s, grid));
      if (options.with_v2) r.v2_norm = euclidean_norm(drift_v2(field, x, s, drift_opts).value);
      if (options.with_v3) r.v3_norm = euclidean_norm(drift_v3(field, x, s, drift_opts).value);
      rows.push_back(std::move(r));
    }
  }
  return rows;
}

double field_rms(const OscillatoryField& field, const SamplingDomain& scan) {
  scan.validate();
  const TauGrid grid(scan.tau_samples_per_period);
  Vec buf(field.dim());
  double acc = 0.0;
  std::size_t count = 0;
  for (double s : scan.s_samples) {
    for (const Vec& x : scan.x_points()) {
      for (std::size_t n = 0; n < grid.size(); ++n) {
        field.eval_into(x, s, grid.tau(n), buf);
        for (double v : buf) acc += v * v;
        ++count;
      }
    }
  }
  return std::sqrt(acc / static_cast<double>(count));
}

DLClassification classify(const OscillatoryField& field, const SamplingDomain& scan, double tol) {
  scan.validate();
  if (scan.x_grid_points_per_axis < 2)
    throw std::invalid_argument("classify: scan too coarse, need at least 2 points per axis");
  if (!(tol > 0.0)) throw std::invalid_argument("classify: tol must be positive");

  DLClassification c;
  c.scan = scan;
  c.tol = tol;
  c.rms = field_rms(field, scan);
  c.mean_threshold = tol * c.rms;
  c.v2_threshold = tol * c.rms * c.rms;
  c.v3_threshold = tol * c.rms * c.rms * c.rms;
  if (c.rms == 0.0) {
    c.diagnostics.push_back("field vanishes identically on the scan");
    c.dl = DL::FullyDegenerate;
    return c;
  }

  c.table = degeneracy_scan(field, scan);
  for (const auto& r : c.table) {
    c.max_mean_norm = std::max(c.max_mean_norm, r.mean_norm);
    c.max_v2_norm = std::max(c.max_v2_norm, r.v2_norm);
    c.max_v3_norm = std::max(c.max_v3_norm, r.v3_norm);
  }

  if (c.max_mean_norm > c.mean_threshold) c.dl = DL::DL1;
  else if (c.max_v2_norm > c.v2_threshold) c.dl = DL::DL2;
  else if (c.max_v3_norm > c.v3_threshold) c.dl = DL::DL3;
  else c.dl = DL::FullyDegenerate;

  // The averaged equations presume a non-constant slow motion; flag lattices
  // where the driving term of the selected level vanishes somewhere.
  std::size_t zero_rows = 0;
  for (const auto& r : c.table) {
    const double level = c.dl == DL::DL1 ? r.mean_norm : c.dl == DL::DL2 ? r.v2_norm : r.v3_norm;
    const double thr = c.dl == DL::DL1 ? c.mean_threshold : c.dl == DL::DL2 ? c.v2_threshold : c.v3_threshold;
    if (c.dl != DL::FullyDegenerate && level <= thr) ++zero_rows;
  }
  if (zero_rows > 0) {
    std::ostringstream msg;
    msg << zero_rows << " of " << c.table.size()
        << " lattice points are equilibria of the selected averaged system";
    c.diagnostics.push_back(msg.str());
  }
  return c;
}

std::string describe(const DLClassification& c) {
  std::ostringstream out;
  out << "classification: " << to_string(c.dl) << "\n";
  switch (c.dl) {
    case DL::DL1:
      out << "rationale: <u> does not vanish identically (Case A); use the DL-1 system\n"
          << "  dx0/dt = <u>(x0, t),  dx1/dt = (x1 . grad) <u> + V2,  s = t\n";
      break;
    case DL::DL2:
      out << "rationale: <u> == 0 on the scan while V2 does not vanish (Case B/C); use the DL-2 system\n"
          << "  dx0/ds = V2(x0, s),  s = eps t\n";
      break;
    case DL::DL3:
      out << "rationale: <u> == 0 and V2 == 0 on the scan while V3 does not vanish; use the DL-3 system\n"
          << "  dx0/ds = V3(x0, s),  s = eps^2 t\n";
      break;
    case DL::FullyDegenerate:
      out << "rationale: <u>, V2 and V3 all vanish on the scan; the field is fully degenerate\n";
      break;
  }
  out << "max |<u>| = " << c.max_mean_norm << " (threshold " << c.mean_threshold << ")\n"
      << "max |V2|  = " << c.max_v2_norm << " (threshold " << c.v2_threshold << ")\n"
      << "max |V3|  = " << c.max_v3_norm << " (threshold " << c.v3_threshold << ")\n"
      << "rms |u|   = " << c.rms << ", tol = " << c.tol << ", lattice points = " << c.table.size() << "\n";
  for (const auto& d : c.diagnostics) out << "note: " << d << "\n";
  return out.str();
}

}  // namespace vibro
