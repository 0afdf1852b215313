#include "vibro/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>

#include "vibro/averaged_systems.hpp"
#include "vibro/averaging.hpp"
#include "vibro/classifier.hpp"
#include "vibro/config.hpp"
#include "vibro/convergence.hpp"
#include "vibro/integrators.hpp"

namespace vibro::cli {

namespace {

constexpr unsigned long long default_seed = 20240917ULL;

const std::set<std::string> known_sections{"", "model", "scan", "drift", "simulate", "converge", "run"};

struct Context {
  Config config;
  std::filesystem::path out_dir;
  bool quiet = false;
  std::ostream& out;
  std::ostream& err;

  void note(const std::string& line) const {
    if (!quiet) out << line << "\n";
  }
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::ofstream open_output(const Context& ctx, const std::string& name) {
  std::error_code ec;
  std::filesystem::create_directories(ctx.out_dir, ec);
  if (ec) throw IoError("cannot create output directory " + ctx.out_dir.string() + ": " + ec.message());
  const auto path = ctx.out_dir / name;
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  return f;
}

void finish(std::ofstream& f, const std::string& name) {
  f.flush();
  if (!f) throw IoError("write failed for " + name);
}

std::string join(std::span<const double> v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_double(v[i]);
  return s;
}

Vec initial_state(const Config& cfg, const std::string& section, const ModelSpec& model) {
  Vec mid;
  for (const auto& [lo, hi] : model.domain.box) mid.push_back(0.5 * (lo + hi));
  Vec x0 = cfg.get_list(section, "x0", mid);
  if (x0.size() != model.field.dim())
    cfg.fail(section, "x0", "expected " + std::to_string(model.field.dim()) + " components");
  return x0;
}

/// Explicit `dl` key, or the classifier's verdict on the scan lattice.
DL resolve_dl(const Context& ctx, const std::string& section, const ModelSpec& model) {
  const std::string text = ctx.config.get_string(section, "dl", "auto");
  if (text != "auto") {
    try {
      return parse_dl(text);
    } catch (const std::invalid_argument& e) {
      ctx.config.fail(section, "dl", e.what());
    }
  }
  const auto scan = scan_from_config(ctx.config, model.domain);
  const auto c = classify(model.field, scan, ctx.config.get_positive("scan", "tol", 1e-8));
  ctx.note("dl = auto -> " + to_string(c.dl));
  return c.dl;
}

int cmd_classify(const Context& ctx) {
  const auto model = model_from_config(ctx.config);
  const auto scan = scan_from_config(ctx.config, model.domain);
  const auto c = classify(model.field, scan, ctx.config.get_positive("scan", "tol", 1e-8));
  ctx.out << "model: " << model.name << "\n" << describe(c);
  if (model.expected && *model.expected != c.dl)
    ctx.err << "warning: built-in model '" << model.name << "' is documented as " << to_string(*model.expected)
            << "\n";

  auto f = open_output(ctx, "classification.csv");
  for (std::size_t j = 0; j < scan.dim(); ++j) f << "x" << j + 1 << ",";
  f << "s,mean_norm,v2_norm,v3_norm\n";
  for (const auto& row : c.table)
    f << join(row.x) << "," << format_double(row.s) << "," << format_double(row.mean_norm) << ","
      << format_double(row.v2_norm) << "," << format_double(row.v3_norm) << "\n";
  finish(f, "classification.csv");
  return c.dl == DL::FullyDegenerate ? fully_degenerate : ok;
}

int cmd_drift(const Context& ctx) {
  const Config& cfg = ctx.config;
  cfg.require_known("drift", {"points", "random_points", "s", "method", "cross_check", "order"});
  cfg.require_known("run", {"seed"});
  const auto model = model_from_config(cfg);
  const std::size_t d = model.field.dim();

  std::vector<Vec> points = cfg.get_groups("drift", "points");
  for (const auto& p : points)
    if (p.size() != d) cfg.fail("drift", "points", "each point needs " + std::to_string(d) + " components");
  if (cfg.has("drift", "random_points")) {
    const auto seed = static_cast<unsigned long long>(cfg.get_double("run", "seed", static_cast<double>(default_seed)));
    std::mt19937_64 rng(seed);
    const auto box = scan_from_config(cfg, model.domain).box;
    for (std::size_t i = 0, n = cfg.get_count("drift", "random_points", 1); i < n; ++i) {
      Vec p(d);
      for (std::size_t j = 0; j < d; ++j) p[j] = std::uniform_real_distribution<double>(box[j].first, box[j].second)(rng);
      points.push_back(std::move(p));
    }
  }
  if (points.empty()) throw ConfigError(cfg.source() + ": [drift] needs 'points' or 'random_points'");

  const double s = cfg.get_double("drift", "s", 0.0);
  const std::size_t order = cfg.get_count("drift", "order", 2);
  if (order != 2 && order != 3) cfg.fail("drift", "order", "must be 2 or 3");
  DriftOptions opts;
  const std::string method = cfg.get_string("drift", "method", "commutator");
  if (method == "advective") opts.method = DriftMethod::advective;
  else if (method != "commutator") cfg.fail("drift", "method", "expected 'advective' or 'commutator'");
  opts.cross_check = cfg.get_bool("drift", "cross_check", false);

  auto f = open_output(ctx, "drift.csv");
  for (std::size_t j = 0; j < d; ++j) f << "x" << j + 1 << ",";
  f << "s";
  for (std::size_t j = 0; j < d; ++j) f << ",v" << j + 1;
  if (opts.cross_check) f << ",residual";
  f << "\n";
  for (const auto& p : points) {
    const auto r = order == 2 ? drift_v2(model.field, p, s, opts) : drift_v3(model.field, p, s, opts);
    f << join(p) << "," << format_double(s) << "," << join(r.value);
    if (opts.cross_check) f << "," << format_double(r.residual.value_or(0.0));
    f << "\n";
    if (!r.warning.empty()) ctx.err << "warning: " << r.warning << "\n";
  }
  finish(f, "drift.csv");
  ctx.note("wrote " + std::to_string(points.size()) + " rows to " + (ctx.out_dir / "drift.csv").string());
  return ok;
}

AveragedSystem system_for(const OscillatoryField& field, DL dl) {
  switch (dl) {
    case DL::DL1: return build_dl1(field);
    case DL::DL2: return build_dl2(field);
    case DL::DL3: return build_dl3(field);
    case DL::FullyDegenerate: break;
  }
  throw std::invalid_argument("no averaged system for a fully degenerate field");
}

int cmd_simulate(const Context& ctx) {
  const Config& cfg = ctx.config;
  cfg.require_known("simulate", {"dl", "omega", "x0", "window", "n_fast", "averaged_step", "store_every", "max_steps"});
  const auto model = model_from_config(cfg);
  const DL dl = resolve_dl(ctx, "simulate", model);
  if (dl == DL::FullyDegenerate) {
    ctx.err << "field is fully degenerate; no averaged system to simulate\n";
    return fully_degenerate;
  }
  const double omega = cfg.get_positive("simulate", "omega", 1000.0);
  if (omega < 10.0) cfg.fail("simulate", "omega", "must be >= 10");
  const double window = cfg.get_positive("simulate", "window", 2.0);
  const double h_avg = cfg.get_positive("simulate", "averaged_step", 1e-3);
  const Vec x0 = initial_state(cfg, "simulate", model);

  const AveragedSystem sys = system_for(model.field, dl);
  FullOptions fo;
  fo.n_fast = cfg.get_count("simulate", "n_fast", 32);
  fo.max_steps = cfg.get_positive("simulate", "max_steps", 1e8);
  const double t_end = window * std::pow(omega, epsilon_power(sys.time_variable));
  const double steps = full_step_count(omega, 0.0, t_end, fo.n_fast);
  std::size_t stride = static_cast<std::size_t>(std::max(1.0, std::floor(steps / 20000.0)));
  if (stride % 2 == 0) ++stride;
  fo.store_every = cfg.get_count("simulate", "store_every", stride);

  const auto full = integrate_full(model.field, omega, sys.time_variable, x0, 0.0, t_end, fo);
  auto ff = open_output(ctx, "full.csv");
  write_trajectory_csv(ff, full.trajectory);
  finish(ff, "full.csv");
  if (!full.ok()) {
    ctx.err << "numerical abort in full integration: " << full.diagnostic << "; partial output written to "
            << (ctx.out_dir / "full.csv").string() << "\n";
    return numerical_abort;
  }

  const auto avg = solve_averaged(sys, x0, window, h_avg, false);
  auto fa = open_output(ctx, "averaged.csv");
  write_trajectory_csv(fa, avg.x0);
  finish(fa, "averaged.csv");

  const auto xf = full.trajectory.state(full.trajectory.size() - 1);
  const auto xa = avg.x0.state(avg.x0.size() - 1);
  double diff = 0.0;
  for (std::size_t j = 0; j < xf.size(); ++j) diff = std::max(diff, std::abs(xf[j] - xa[j]));
  ctx.note(to_string(dl) + ", omega = " + format_double(omega) + ", t_end = " + format_double(t_end) +
           ", time variable " + to_string(sys.time_variable));
  ctx.note("full endpoint:     " + join(xf));
  ctx.note("averaged endpoint: " + join(xa));
  ctx.note("endpoint difference: " + format_double(diff));
  return ok;
}

int cmd_converge(const Context& ctx) {
  const Config& cfg = ctx.config;
  cfg.require_known("converge", {"dl", "order", "omegas", "omega_min", "omega_max", "omega_count", "window", "x0",
                                 "n_fast", "reference_step", "max_steps", "comparison_points", "include_oscillation"});
  const auto model = model_from_config(cfg);
  SweepConfig sc;
  sc.field = model.field;
  sc.dl = resolve_dl(ctx, "converge", model);
  if (sc.dl == DL::FullyDegenerate) {
    ctx.err << "field is fully degenerate; nothing to converge to\n";
    return fully_degenerate;
  }
  const std::string order = cfg.get_string("converge", "order", "zeroth");
  if (order == "first_composite") sc.order = ApproximationOrder::first_composite;
  else if (order != "zeroth") cfg.fail("converge", "order", "expected 'zeroth' or 'first_composite'");
  if (sc.order == ApproximationOrder::first_composite && sc.dl != DL::DL1)
    cfg.fail("converge", "order", "first_composite is only available for DL-1");

  if (cfg.has("converge", "omegas")) {
    sc.omegas = cfg.get_list("converge", "omegas", {});
  } else {
    const double lo = cfg.get_positive("converge", "omega_min", 100.0);
    const double hi = cfg.get_positive("converge", "omega_max", std::pow(10.0, 3.5));
    if (!(hi > lo)) cfg.fail("converge", "omega_max", "must exceed omega_min");
    sc.omegas = log_ladder(lo, hi, cfg.get_count("converge", "omega_count", 4));
  }
  for (std::size_t i = 0; i < sc.omegas.size(); ++i) {
    if (!(sc.omegas[i] >= 100.0)) cfg.fail("converge", "omegas", "every omega must be >= 100");
    if (i > 0 && !(sc.omegas[i] > sc.omegas[i - 1])) cfg.fail("converge", "omegas", "must be strictly increasing");
  }
  if (sc.omegas.size() < 3) cfg.fail("converge", "omegas", "need at least 3 values");
  sc.window = cfg.get_positive("converge", "window", 2.0);
  sc.x0 = initial_state(cfg, "converge", model);
  sc.n_fast = cfg.get_count("converge", "n_fast", 32);
  if (sc.n_fast < 32) cfg.fail("converge", "n_fast", "must be >= 32");
  sc.reference_step = cfg.get_positive("converge", "reference_step", 1e-3);
  sc.max_steps = cfg.get_positive("converge", "max_steps", 2e8);
  sc.comparison_points = cfg.get_count("converge", "comparison_points", 20000);
  sc.include_oscillation = cfg.get_bool("converge", "include_oscillation", true);

  const auto report = epsilon_sweep(sc);
  for (const auto& p : report.points)
    if (p.failed) ctx.err << "omega = " << format_double(p.omega) << " failed: " << p.diagnostic << "\n";
  auto fr = open_output(ctx, "convergence.csv");
  write_report_csv(fr, report);
  finish(fr, "convergence.csv");
  auto fs = open_output(ctx, "summary.csv");
  write_summary_csv(fs, report);
  finish(fs, "summary.csv");

  ctx.note(report.config_echo);
  for (const auto& p : report.points)
    if (!p.failed) ctx.note("omega = " + format_double(p.omega) + "  error = " + format_double(p.error));
  ctx.note("slope = " + format_double(report.slope) + " +- " + format_double(report.slope_stderr) +
           "  (reference error estimate " + format_double(report.reference_error) + ")");
  return ok;
}

constexpr const char* footer = R"(Config is sectioned key = value text ([model], [scan], [drift], [simulate],
[converge], [run]); unknown keys are rejected. Outputs, written to --out:
  classify  classification.csv  x1..xd,s,mean_norm,v2_norm,v3_norm
  drift     drift.csv           x1..xd,s,v1..vd[,residual]
  simulate  full.csv            time,x1..xd   (physical time t)
            averaged.csv        time,x1..xd   (slow time of the chosen DL)
  converge  convergence.csv     omega,epsilon,error
            summary.csv         slope,stderr
Numbers are written with 17 significant digits.
Exit codes: 0 ok, 1 bad input or I/O failure, 2 fully degenerate field,
3 numerical abort (partial output is reported on stderr).)";

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Averaging toolkit for fast-oscillating ODEs", "vibro"};
  app.footer(footer);
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path;
  std::string out_dir = ".";
  bool quiet = false;
  app.add_option("--config", config_path, "Config file (sectioned key = value)")->required();
  app.add_option("--out", out_dir, "Output directory for CSV files");
  app.add_flag("--quiet", quiet, "Suppress progress lines");
  auto* classify_cmd = app.add_subcommand("classify", "Classify the model's distinguished limit");
  auto* drift_cmd = app.add_subcommand("drift", "Evaluate the drift V2 (or V3) at given states");
  auto* simulate_cmd = app.add_subcommand("simulate", "Integrate the full and averaged systems");
  auto* converge_cmd = app.add_subcommand("converge", "Sweep omega and fit the error order");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << "run with --help for usage\n";
    return bad_input;
  }

  try {
    Context ctx{Config::parse_file(config_path), out_dir, quiet, out, err};
    ctx.config.require_sections(known_sections);
    ctx.config.require_known("", {});
    ctx.config.require_known("run", {"seed"});
    if (*classify_cmd) return cmd_classify(ctx);
    if (*drift_cmd) return cmd_drift(ctx);
    if (*simulate_cmd) return cmd_simulate(ctx);
    if (*converge_cmd) return cmd_converge(ctx);
    return bad_input;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return bad_input;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << "\n";
    return bad_input;
  } catch (const std::invalid_argument& e) {
    err << "invalid input: " << e.what() << "\n";
    return bad_input;
  } catch (const std::exception& e) {
    err << "numerical abort: " << e.what() << "\n";
    return numerical_abort;
  }
}

}  // namespace vibro::cli
