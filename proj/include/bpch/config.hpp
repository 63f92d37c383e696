#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "bpch/convergence.hpp"
#include "bpch/initial_conditions.hpp"
#include "bpch/schemes.hpp"

namespace bpch {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::runtime_error(key + ": " + message), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

struct RunConfig {
  SchemeParams params;
  int dim = 1;
  std::size_t nx = 0;
  std::size_t ny = 0;
  double t_end = 0.0;
  bool abort_on_fail = true;
  InitialSpec initial;
  std::size_t record_every = 1;
  std::size_t snapshot_every = 0;
  std::filesystem::path output_dir = "out";

  // converge / compare
  std::vector<Scheme> schemes;
  std::vector<std::size_t> sizes;
  std::size_t reference = 12000;
  bool has_reference_scheme = false;
  Scheme reference_scheme = Scheme::GEps;

  /// t_end / dt rounded; validate() guarantees it is whole.
  std::size_t steps() const;
  MeshPtr make_mesh() const;
  SimulationConfig simulation() const;
  ConvergenceSpec convergence() const;
  /// Schemes for compare/converge, falling back to params.scheme.
  std::vector<Scheme> scheme_list() const;

  /// Throws ConfigError naming the offending key.
  void validate() const;
};

/// Accumulates key=value settings from files, presets and flags (later
/// settings win) and produces a validated RunConfig.
class ConfigBuilder {
 public:
  /// Throws ConfigError for unknown keys and unparsable values.
  void set(const std::string& key, const std::string& value);
  /// Lines of key=value; blank lines and '#' comments are skipped.
  void load_text(const std::string& text);
  void load_file(const std::filesystem::path& path);

  bool has(const std::string& key) const { return values_.count(key) > 0; }

  /// Throws ConfigError if scheme, eta, nx, dt or t_end are missing or any
  /// value is invalid.
  RunConfig build() const;

 private:
  std::map<std::string, std::string> values_;
};

const std::vector<std::string>& config_keys();

std::vector<std::string> preset_names();
/// Throws ConfigError (key "preset") for an unknown name.
ConfigBuilder preset(const std::string& name);

/// Full resolved config as key=value lines; parsing it back gives an equal
/// config.
std::string to_manifest(const RunConfig& config);

/// 17 significant digits.
std::string format_double(double v);

}  // namespace bpch
