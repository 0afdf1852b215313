#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "vibro/linalg.hpp"
#include "vibro/models.hpp"

namespace vibro {

/// Raised for any malformed or unknown configuration entry; the message carries
/// the source name, line and key.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sectioned key = value text. `#` and `;` start comments when they begin a
/// line or follow whitespace. Keys before any section header go to "".
class Config {
 public:
  struct Entry {
    std::string value;
    std::size_t line = 0;
  };

  static Config parse(std::istream& in, const std::string& source = "config");
  static Config parse_file(const std::string& path);

  bool has_section(const std::string& section) const { return sections_.count(section) != 0; }
  bool has(const std::string& section, const std::string& key) const;
  const Entry* find(const std::string& section, const std::string& key) const;

  /// Throws ConfigError naming the first key of `section` not in `allowed`.
  void require_known(const std::string& section, const std::set<std::string>& allowed) const;
  /// Throws ConfigError for any section not in `allowed`.
  void require_sections(const std::set<std::string>& allowed) const;

  std::string get_string(const std::string& section, const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& section, const std::string& key, double fallback) const;
  double get_positive(const std::string& section, const std::string& key, double fallback) const;
  std::size_t get_count(const std::string& section, const std::string& key, std::size_t fallback) const;
  bool get_bool(const std::string& section, const std::string& key, bool fallback) const;
  /// Comma-separated reals.
  Vec get_list(const std::string& section, const std::string& key, const Vec& fallback) const;
  /// Semicolon-separated groups of comma-separated reals.
  std::vector<Vec> get_groups(const std::string& section, const std::string& key) const;
  /// `k:cos,sin` terms separated by semicolons.
  std::vector<Harmonic> get_harmonics(const std::string& section, const std::string& key) const;

  /// "source:line: message (key 'k' in [section])".
  [[noreturn]] void fail(const std::string& section, const std::string& key, const std::string& message) const;

  const std::string& source() const { return source_; }

 private:
  std::string source_;
  std::map<std::string, std::map<std::string, Entry>> sections_;
};

/// Field built from the [model] section, plus its default scan box.
struct ModelSpec {
  std::string name;
  OscillatoryField field;
  SamplingDomain domain;
  std::optional<DL> expected;
};

/// `name` selects a parametric family (logistic, predator-prey, stokes,
/// standing-wave, two-harmonic) or one of the built-in models by its name.
ModelSpec model_from_config(const Config& config);

/// Scan lattice from [scan], falling back to the model's default box.
SamplingDomain scan_from_config(const Config& config, const SamplingDomain& fallback);

/// Parses "DL-1", "DL1", "dl-2", ...
DL parse_dl(const std::string& text);

}  // namespace vibro
