#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "commands.hpp"

#ifndef DGPROBE_VERSION
#define DGPROBE_VERSION "0.0.0"
#endif

namespace dgprobe::cli {

namespace {

std::string stem_of(const std::string& out) {
  for (const char* ext : {".csv", ".json"}) {
    const std::string e = ext;
    if (out.size() > e.size() && out.compare(out.size() - e.size(), e.size(), e) == 0)
      return out.substr(0, out.size() - e.size());
  }
  return out;
}

void write_table(std::ostream& os, const std::string& format, const Header& header, const Table& table) {
  if (format == "json") {
    write_json(os, header, table);
  } else {
    write_csv(os, header, table);
  }
}

}  // namespace

void list_models(std::ostream& out) {
  out << "models\n";
  out << std::left << std::setw(11) << "id" << std::setw(9) << "kind" << std::setw(14) << "grid" << "parameters (defaults)\n";
  for (const ModelInfo& m : model_catalog()) {
    std::string grid;
    for (std::size_t n : m.grid) grid += (grid.empty() ? "" : "x") + std::to_string(n);
    if (m.cells) grid += (grid.empty() ? "" : ", ") + std::string("cells ") + std::to_string(m.cells);
    std::string params;
    for (const auto& [name, value] : m.defaults) params += (params.empty() ? "" : ", ") + name + "=" + format_number(value);
    out << std::setw(11) << m.id << std::setw(9) << m.kind << std::setw(14) << grid << params << "\n";
    out << std::setw(34) << "" << m.summary << "\n";
  }
  out << "\npresets\n";
  for (const Preset& p : presets()) out << std::setw(8) << p.name << p.summary << "\n";
  out << "\ncommands: sweep kmap path series nodes topo spectrum models\n";
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"dgprobe: ground-state degeneracy from probe-qubit decoherence", "dgprobe"};
  std::string command, config_path, preset, out_path, format;
  std::vector<std::string> overrides;
  unsigned threads = 0;
  app.add_option("command", command, "sweep | kmap | path | series | nodes | topo | spectrum | models")->required();
  app.add_option("--config,-c", config_path, "YAML run configuration");
  app.add_option("--preset,-p", preset, "named preset (see `dgprobe models`)");
  app.add_option("--out,-o", out_path, "output stem; files are <stem>.csv|json plus <stem>.manifest.json");
  app.add_option("--format,-f", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--threads,-j", threads, "worker threads")->check(CLI::Range(1u, 1024u));
  app.add_option("--set,-s", overrides, "override a config key, e.g. --set params.phi=0.5");
  app.set_version_flag("--version", DGPROBE_VERSION);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << DGPROBE_VERSION << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "dgprobe: " << e.what() << "\n";
    return 2;
  }

  if (command == "models") {
    list_models(out);
    return 0;
  }

  const auto start = std::chrono::steady_clock::now();
  try {
    std::vector<std::pair<std::string, std::string>> sources;
    if (!preset.empty()) {
      const Preset& p = find_preset(preset);
      sources.emplace_back("preset " + p.name, p.yaml);
    }
    if (!config_path.empty()) sources.push_back(read_config_file(config_path));
    std::vector<std::string> all = overrides;
    all.insert(all.begin(), "command=" + command);
    RunConfig config = load_config(sources, all);
    if (!out_path.empty()) config.out = out_path;
    if (!format.empty()) config.format = format;
    if (threads) config.threads = threads;
    if (config.format != "csv" && config.format != "json")
      throw ConfigError("output.format: expected csv or json, got '" + config.format + "'");

    const std::vector<Table> tables = execute(config);
    const Header header{DGPROBE_VERSION, config.command, config.model, config_hash(config)};

    if (config.out.empty()) {
      for (const Table& t : tables) write_table(out, config.format, header, t);
      return 0;
    }

    const std::string stem = stem_of(config.out);
    const std::filesystem::path parent = std::filesystem::path(stem).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    std::vector<std::string> files;
    for (const Table& t : tables) {
      const std::string path = stem + t.suffix + "." + config.format;
      std::ofstream f(path, std::ios::binary);
      if (!f) throw ConfigError(path + ": cannot open for writing");
      write_table(f, config.format, header, t);
      files.push_back(path);
    }

    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    nlohmann::ordered_json manifest;
    manifest["generator"] = "dgprobe";
    manifest["version"] = DGPROBE_VERSION;
    manifest["config_hash"] = header.hash;
    manifest["config"] = nlohmann::ordered_json::parse(canonical_json(config));
    manifest["threads"] = config.threads;
    manifest["files"] = files;
    manifest["wall_time_s"] = wall;
    std::ofstream m(stem + ".manifest.json", std::ios::binary);
    m << manifest.dump(2) << "\n";
    for (const auto& f : files) out << f << "\n";
    return 0;
  } catch (const ConfigError& e) {
    err << "dgprobe: invalid configuration: " << e.what() << "\n";
    return 2;
  } catch (const InvalidInput& e) {
    err << "dgprobe: invalid configuration: " << e.what() << "\n";
    return 2;
  } catch (const NumericFailure& e) {
    err << "dgprobe: numeric failure: " << e.what() << "\n";
    return 3;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "dgprobe: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace dgprobe::cli
