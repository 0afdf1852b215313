#include "vibro/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <sstream>

namespace vibro {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string strip_comment(const std::string& line) {
  for (std::size_t i = 0; i < line.size(); ++i) {
    if ((line[i] == '#' || line[i] == ';') && (i == 0 || std::isspace(static_cast<unsigned char>(line[i - 1]))))
      return line.substr(0, i);
  }
  return line;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) parts.push_back(trim(cur));
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

std::optional<double> to_double(const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) return std::nullopt;
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

}  // namespace

Config Config::parse(std::istream& in, const std::string& source) {
  Config cfg;
  cfg.source_ = source;
  std::string section;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    auto where = [&] { return source + ":" + std::to_string(line_no) + ": "; };
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where() + "unterminated section header '" + line + "'");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) throw ConfigError(where() + "empty section name");
      cfg.sections_[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where() + "expected 'key = value', got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError(where() + "missing key before '='");
    auto& sec = cfg.sections_[section];
    if (sec.count(key))
      throw ConfigError(where() + "duplicate key '" + key + "' in [" + section + "] (first set on line " +
                        std::to_string(sec[key].line) + ")");
    sec[key] = Entry{trim(line.substr(eq + 1)), line_no};
  }
  return cfg;
}

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  return parse(in, path);
}

bool Config::has(const std::string& section, const std::string& key) const { return find(section, key) != nullptr; }

const Config::Entry* Config::find(const std::string& section, const std::string& key) const {
  const auto s = sections_.find(section);
  if (s == sections_.end()) return nullptr;
  const auto k = s->second.find(key);
  return k == s->second.end() ? nullptr : &k->second;
}

void Config::fail(const std::string& section, const std::string& key, const std::string& message) const {
  const Entry* e = find(section, key);
  std::ostringstream msg;
  msg << source_ << ":";
  if (e) msg << e->line << ":";
  msg << " " << message << " (key '" << key << "' in [" << section << "])";
  throw ConfigError(msg.str());
}

void Config::require_known(const std::string& section, const std::set<std::string>& allowed) const {
  const auto s = sections_.find(section);
  if (s == sections_.end()) return;
  // Report in file order so the first offending line is named.
  const std::pair<const std::string, Entry>* first = nullptr;
  for (const auto& kv : s->second)
    if (!allowed.count(kv.first) && (!first || kv.second.line < first->second.line)) first = &kv;
  if (first) fail(section, first->first, "unknown key");
}

void Config::require_sections(const std::set<std::string>& allowed) const {
  for (const auto& [name, keys] : sections_) {
    if (allowed.count(name)) continue;
    std::size_t line = 0;
    for (const auto& kv : keys) line = line == 0 ? kv.second.line : std::min(line, kv.second.line);
    std::ostringstream msg;
    msg << source_ << ":";
    if (line) msg << line << ":";
    msg << " unknown section [" << name << "]";
    throw ConfigError(msg.str());
  }
}

std::string Config::get_string(const std::string& section, const std::string& key, const std::string& fallback) const {
  const Entry* e = find(section, key);
  return e ? e->value : fallback;
}

double Config::get_double(const std::string& section, const std::string& key, double fallback) const {
  const Entry* e = find(section, key);
  if (!e) return fallback;
  const auto v = to_double(e->value);
  if (!v) fail(section, key, "expected a finite number, got '" + e->value + "'");
  return *v;
}

double Config::get_positive(const std::string& section, const std::string& key, double fallback) const {
  const double v = get_double(section, key, fallback);
  if (!(v > 0.0)) fail(section, key, "must be positive");
  return v;
}

std::size_t Config::get_count(const std::string& section, const std::string& key, std::size_t fallback) const {
  const Entry* e = find(section, key);
  if (!e) return fallback;
  const auto v = to_double(e->value);
  if (!v || *v < 1.0 || *v != std::floor(*v) || *v > 1e15)
    fail(section, key, "expected a positive integer, got '" + e->value + "'");
  return static_cast<std::size_t>(*v);
}

bool Config::get_bool(const std::string& section, const std::string& key, bool fallback) const {
  const Entry* e = find(section, key);
  if (!e) return fallback;
  const std::string v = lower(e->value);
  if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
  if (v == "false" || v == "no" || v == "off" || v == "0") return false;
  fail(section, key, "expected true or false, got '" + e->value + "'");
}

Vec Config::get_list(const std::string& section, const std::string& key, const Vec& fallback) const {
  const Entry* e = find(section, key);
  if (!e) return fallback;
  Vec out;
  for (const auto& part : split(e->value, ',')) {
    const auto v = to_double(part);
    if (!v) fail(section, key, "expected comma-separated numbers, got '" + e->value + "'");
    out.push_back(*v);
  }
  if (out.empty()) fail(section, key, "empty list");
  return out;
}

std::vector<Vec> Config::get_groups(const std::string& section, const std::string& key) const {
  const Entry* e = find(section, key);
  if (!e) return {};
  std::vector<Vec> out;
  for (const auto& group : split(e->value, ';')) {
    Vec g;
    for (const auto& part : split(group, ',')) {
      const auto v = to_double(part);
      if (!v) fail(section, key, "expected ';'-separated groups of numbers, got '" + e->value + "'");
      g.push_back(*v);
    }
    out.push_back(std::move(g));
  }
  return out;
}

std::vector<Harmonic> Config::get_harmonics(const std::string& section, const std::string& key) const {
  const Entry* e = find(section, key);
  if (!e) return {};
  std::vector<Harmonic> out;
  if (trim(e->value).empty() || lower(trim(e->value)) == "none") return out;
  for (const auto& term : split(e->value, ';')) {
    const auto colon = term.find(':');
    const auto parts = colon == std::string::npos ? std::vector<std::string>{} : split(term.substr(colon + 1), ',');
    const auto k = colon == std::string::npos ? std::nullopt : to_double(term.substr(0, colon));
    if (!k || parts.size() != 2 || *k < 1.0 || *k != std::floor(*k) || *k > 1e6)
      fail(section, key, "expected harmonics as 'k:cos,sin;...', got '" + e->value + "'");
    const auto c = to_double(parts[0]);
    const auto s = to_double(parts[1]);
    if (!c || !s) fail(section, key, "expected harmonics as 'k:cos,sin;...', got '" + e->value + "'");
    out.push_back({static_cast<std::size_t>(*k), *c, *s});
  }
  return out;
}

DL parse_dl(const std::string& text) {
  std::string t = lower(trim(text));
  t.erase(std::remove(t.begin(), t.end(), '-'), t.end());
  if (t == "dl1") return DL::DL1;
  if (t == "dl2") return DL::DL2;
  if (t == "dl3") return DL::DL3;
  throw std::invalid_argument("unknown distinguished limit '" + text + "' (expected DL-1, DL-2 or DL-3)");
}

namespace {

SamplingDomain cube(std::size_t dim, double lo, double hi) {
  SamplingDomain d;
  d.box.assign(dim, {lo, hi});
  return d;
}

Matrix matrix_from(const Config& cfg, const std::string& key, const Matrix& fallback) {
  const auto rows = cfg.get_groups("model", key);
  if (rows.empty()) return fallback;
  const std::size_t n = rows.size();
  Vec flat;
  for (const auto& r : rows) {
    if (r.size() != n) cfg.fail("model", key, "expected a square matrix written as rows 'a,b;c,d'");
    flat.insert(flat.end(), r.begin(), r.end());
  }
  return Matrix::from_rows(n, n, flat);
}

std::vector<Harmonic> harmonics_or(const Config& cfg, const std::string& key, std::vector<Harmonic> fallback) {
  return cfg.has("model", key) ? cfg.get_harmonics("model", key) : std::move(fallback);
}

}  // namespace

ModelSpec model_from_config(const Config& cfg) {
  if (!cfg.has("model", "name")) throw ConfigError(cfg.source() + ": missing [model] name");
  ModelSpec spec;
  spec.name = cfg.get_string("model", "name", "");
  const std::vector<Harmonic> cos1{{1, 1.0, 0.0}};
  const std::vector<Harmonic> sin1{{1, 0.0, 1.0}};
  const std::vector<Harmonic> sin2{{2, 0.0, 1.0}};

  if (spec.name == "logistic") {
    cfg.require_known("model", {"name", "a_bar", "b_bar", "a_tilde", "b_tilde"});
    LogisticParams p;
    p.a_bar = cfg.get_double("model", "a_bar", 0.0);
    p.b_bar = cfg.get_double("model", "b_bar", 0.0);
    p.a_tilde = harmonics_or(cfg, "a_tilde", cos1);
    p.b_tilde = harmonics_or(cfg, "b_tilde", sin2);
    spec.field = logistic_field(p);
    spec.domain = cube(1, 0.5, 2.0);
  } else if (spec.name == "predator-prey") {
    cfg.require_known("model", {"name", "alpha_bar", "beta_bar", "gamma_bar", "mu_bar", "alpha_tilde", "beta_tilde",
                                "gamma_tilde", "mu_tilde"});
    PredatorPreyParams p;
    p.alpha_bar = cfg.get_double("model", "alpha_bar", 0.0);
    p.beta_bar = cfg.get_double("model", "beta_bar", 0.0);
    p.gamma_bar = cfg.get_double("model", "gamma_bar", 0.0);
    p.mu_bar = cfg.get_double("model", "mu_bar", 0.0);
    p.alpha_tilde = harmonics_or(cfg, "alpha_tilde", cos1);
    p.beta_tilde = harmonics_or(cfg, "beta_tilde", cos1);
    p.gamma_tilde = harmonics_or(cfg, "gamma_tilde", sin1);
    p.mu_tilde = harmonics_or(cfg, "mu_tilde", sin1);
    spec.field = predator_prey_field(p);
    spec.domain = cube(2, 0.5, 2.0);
  } else if (spec.name == "stokes") {
    cfg.require_known("model", {"name", "k"});
    spec.field = stokes_field(cfg.get_double("model", "k", 1.0));
    spec.domain = cube(1, -3.0, 3.0);
  } else if (spec.name == "standing-wave") {
    cfg.require_known("model", {"name", "dim"});
    const std::size_t dim = cfg.get_count("model", "dim", 1);
    spec.field = standing_wave_field(
        dim, [](std::span<const double> x) { return Vec(x.begin(), x.end()); },
        [dim](std::span<const double>) { return Matrix::identity(dim); });
    spec.domain = cube(dim, 0.5, 2.0);
  } else if (spec.name == "two-harmonic") {
    cfg.require_known("model", {"name", "a1", "a2"});
    const double up[] = {0.0, 1.0, 0.0, 0.0};
    const double down[] = {0.0, 0.0, 1.0, 0.0};
    const Matrix a1 = matrix_from(cfg, "a1", Matrix::from_rows(2, 2, up));
    const Matrix a2 = matrix_from(cfg, "a2", Matrix::from_rows(2, 2, down));
    if (a1.rows() != a2.rows()) cfg.fail("model", "a2", "a1 and a2 must have the same size");
    spec.field = two_harmonic_linear_field(a1, a2);
    spec.domain = cube(a1.rows(), -1.0, 1.0);
  } else {
    for (auto& m : builtin_models()) {
      if (m.name != spec.name) continue;
      cfg.require_known("model", {"name"});
      spec.field = std::move(m.field);
      spec.domain = std::move(m.domain);
      spec.expected = m.expected;
      return spec;
    }
    std::string names;
    for (const auto& m : builtin_models()) names += ", " + m.name;
    cfg.fail("model", "name",
             "unknown model '" + spec.name + "' (expected logistic, predator-prey, stokes, standing-wave, two-harmonic" +
                 names + ")");
  }
  return spec;
}

SamplingDomain scan_from_config(const Config& cfg, const SamplingDomain& fallback) {
  cfg.require_known("scan", {"box", "points", "s_samples", "tau_samples", "tol"});
  SamplingDomain d = fallback;
  if (cfg.has("scan", "box")) {
    d.box.clear();
    for (const auto& g : cfg.get_groups("scan", "box")) {
      if (g.size() != 2 || !(g[0] < g[1])) cfg.fail("scan", "box", "expected per-axis 'lo,hi' pairs separated by ';'");
      d.box.emplace_back(g[0], g[1]);
    }
  }
  d.x_grid_points_per_axis = cfg.get_count("scan", "points", d.x_grid_points_per_axis);
  if (d.x_grid_points_per_axis < 2) cfg.fail("scan", "points", "need at least 2 points per axis");
  d.s_samples = cfg.get_list("scan", "s_samples", d.s_samples);
  d.tau_samples_per_period = cfg.get_count("scan", "tau_samples", d.tau_samples_per_period);
  if (d.tau_samples_per_period % 2 != 0 || d.tau_samples_per_period < 4)
    cfg.fail("scan", "tau_samples", "must be an even number >= 4");
  return d;
}

}  // namespace vibro
