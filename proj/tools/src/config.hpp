#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <dgprobe/analysis.hpp>

namespace dgprobe::cli {

/// Invalid run configuration; maps to exit status 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TimeSpec {
  double t_max = 20.0;
  std::size_t steps = 400;
};

struct ScanSpec {
  std::string parameter;
  double from = 0.0;
  double to = 0.0;
  std::size_t points = 0;
  Diagnostic diagnostic = Diagnostic::MinLog10ModulusSq;
  double chi = 10.0;
};

struct RunConfig {
  std::string command;
  std::string model;
  ParameterMap params;
  std::optional<double> delta;
  std::vector<std::size_t> grid;
  /// Sites (ssh-open) or cells across the open direction (qwz-strip, km-ribbon).
  std::size_t cells = 0;
  TimeSpec time;
  /// Snapshot time for kmap and path.
  double t = 20.0;
  std::optional<ScanSpec> scan;
  std::vector<PathVertex> path;
  std::size_t samples = 100;
  FillingRule filling;
  std::string out;
  std::string format = "csv";
  unsigned threads = 1;
};

struct ModelInfo {
  std::string id;
  std::string kind;  // bloch, lattice or ribbon
  std::vector<std::pair<std::string, double>> defaults;
  std::vector<std::size_t> grid;
  std::size_t cells = 0;
  std::string summary;
};

const std::vector<ModelInfo>& model_catalog();
const ModelInfo& model_info(const std::string& id);

struct Preset {
  std::string name;
  std::string summary;
  std::string yaml;
};

const std::vector<Preset>& presets();
const Preset& find_preset(const std::string& name);

/// `sources` are YAML documents merged in order (later keys win); `overrides`
/// are "dotted.key=value" strings applied last. Validation is strict: unknown
/// keys and ill-typed values raise ConfigError with the offending line.
RunConfig load_config(const std::vector<std::pair<std::string, std::string>>& sources,
                      const std::vector<std::string>& overrides);

/// Reads a config file into a (label, text) source.
std::pair<std::string, std::string> read_config_file(const std::string& path);

/// Canonical JSON of everything that affects data files (not output path,
/// format or thread count).
std::string canonical_json(const RunConfig& config);
std::string config_hash(const RunConfig& config);

}  // namespace dgprobe::cli
