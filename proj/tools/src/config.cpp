#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>
#include <yaml-cpp/yaml.h>

namespace dgprobe::cli {

namespace {

constexpr const char* kPi = "3.141592653589793";

std::string weyl_params(const std::string& extra) {
  return "params: {epsilon: 6, t: 1, lambda: 2, lambda_z: 2, b0: 0, b1: 0, b2: 0, b3: 0" + extra + "}\n";
}

std::string weyl_case(char c) {
  switch (c) {
    case 'a': return weyl_params("");
    case 'b': return weyl_params(", b3: 1.8");
    case 'c': return weyl_params(", b0: 1.4");
    default: return weyl_params(", epsilon: 5.5, b0: 1.4");
  }
}

std::vector<Preset> build_presets() {
  std::vector<Preset> p;
  p.push_back({"fig1", "SSH chain, N=200, delta=0.1: phi sweep and k-resolved echo",
               "command: sweep\nmodel: ssh\nparams: {phi: 0}\ndelta: 0.1\ngrid: [200]\n"
               "scan: {parameter: phi, from: -1, to: 1, points: 101}\n"});
  p.push_back({"fig2", "open SSH chain, 200 sites, delta=0.1: boundary states at phi=0.5",
               "command: spectrum\nmodel: ssh-open\nparams: {phi: 0.5}\ncells: 200\ndelta: 0.1\n"
               "scan: {parameter: phi, from: -1, to: 1, points: 101}\n"});
  p.push_back({"fig3", "QWZ, 100x100, delta=0.1: M sweep and k-maps at t=20",
               "command: sweep\nmodel: qwz\nparams: {M: -2}\ndelta: 0.1\ngrid: [100, 100]\nt: 20\n"
               "scan: {parameter: M, from: -5, to: 1, points: 121}\n"});
  p.push_back({"fig4", "QWZ strip open along x, 16 cells, delta=0.1, t=20",
               "command: kmap\nmodel: qwz-strip\nparams: {M: 0}\ncells: 16\ngrid: [100]\ndelta: 0.1\nt: 20\n"});
  for (char c : {'a', 'b', 'c', 'd'}) {
    p.push_back({std::string("fig5") + c, std::string("Weyl regime (") + c + "): node search on 40^3",
                 "command: nodes\nmodel: weyl\n" + weyl_case(c) + "grid: [40, 40, 40]\ndelta: 0.5\n"});
  }
  for (char c : {'a', 'b', 'c', 'd'}) {
    p.push_back({std::string("fig6") + c, std::string("Weyl regime (") + c + "): |L_k|^2 map, delta=0.5, t=20",
                 "command: kmap\nmodel: weyl\n" + weyl_case(c) + "grid: [40, 40, 40]\ndelta: 0.5\nt: 20\n"});
  }
  const std::string pi = kPi;
  p.push_back({"fig7", "Weyl path Z-Gamma-M-Z, delta=0.5, t=20 (regime a; --set params for others)",
               "command: path\nmodel: weyl\n" + weyl_case('a') + "delta: 0.5\nt: 20\nsamples: 100\npath:\n"
               "  - {label: Z, k: [" + pi + ", 0, " + pi + "]}\n  - {label: G, k: [0, 0, 0]}\n"
               "  - {label: M, k: [0, 0, " + pi + "]}\n  - {label: Z, k: [" + pi + ", 0, " + pi + "]}\n"});
  p.push_back({"km", "Kane-Mele zigzag ribbon, 8 chains, 100 k_y, delta=0.1, t=20",
               "command: kmap\nmodel: km-ribbon\nparams: {lambda_so: 0.06, lambda_r: 0.05, lambda_v: 0.05773502691896258}\n"
               "cells: 8\ngrid: [100]\ndelta: 0.1\nt: 20\n"});
  return p;
}

std::string where(const std::string& source, const YAML::Node& node) {
  std::ostringstream os;
  os << source;
  const YAML::Mark mark = node.Mark();
  if (!mark.is_null() && source.rfind("--set", 0) != 0) os << ":" << mark.line + 1;
  return os.str();
}

[[noreturn]] void fail(const std::string& source, const YAML::Node& node, const std::string& message) {
  throw ConfigError(where(source, node) + ": " + message);
}

enum class Type { String, Number, Count, CountList, NumberMap, Filling, Path, Time, Scan, Output };

const std::map<std::string, Type>& top_schema() {
  static const std::map<std::string, Type> schema{
      {"command", Type::String}, {"model", Type::String},   {"params", Type::NumberMap}, {"delta", Type::Number},
      {"grid", Type::CountList}, {"cells", Type::Count},    {"time", Type::Time},        {"t", Type::Number},
      {"scan", Type::Scan},      {"path", Type::Path},      {"samples", Type::Count},    {"filling", Type::Filling},
      {"output", Type::Output},  {"threads", Type::Count},
  };
  return schema;
}

void check_scalar(const std::string& src, const YAML::Node& n, const std::string& key, Type type) {
  if (!n.IsScalar()) fail(src, n, "'" + key + "' must be a scalar");
  try {
    if (type == Type::Number) {
      (void)n.as<double>();
    } else if (type == Type::Count) {
      if (n.as<long long>() < 0) fail(src, n, "'" + key + "' must be a non-negative integer");
    }
  } catch (const YAML::BadConversion&) {
    fail(src, n, "'" + key + "' expects " + (type == Type::Count ? "an integer" : "a number") + ", got '" +
                     n.Scalar() + "'");
  }
}

void check_map(const std::string& src, const YAML::Node& n, const std::string& key,
               const std::map<std::string, Type>& fields) {
  if (!n.IsMap()) fail(src, n, "'" + key + "' must be a mapping");
  for (const auto& kv : n) {
    const std::string name = kv.first.as<std::string>();
    const auto it = fields.find(name);
    if (it == fields.end()) fail(src, kv.first, "unknown key '" + key + "." + name + "'");
    check_scalar(src, kv.second, key + "." + name, it->second);
  }
}

void check_top(const std::string& src, const YAML::Node& root) {
  if (!root.IsMap()) fail(src, root, "top level must be a mapping");
  for (const auto& kv : root) {
    const std::string key = kv.first.as<std::string>();
    const auto it = top_schema().find(key);
    if (it == top_schema().end()) fail(src, kv.first, "unknown key '" + key + "'");
    const YAML::Node& v = kv.second;
    if (v.IsNull()) continue;  // null removes an inherited key
    switch (it->second) {
      case Type::String:
      case Type::Number:
      case Type::Count: check_scalar(src, v, key, it->second); break;
      case Type::Filling:
        if (!v.IsScalar()) fail(src, v, "'filling' must be 'negative' or an occupied-level count");
        break;
      case Type::CountList:
        if (v.IsScalar()) {
          check_scalar(src, v, key, Type::Count);
        } else if (v.IsSequence()) {
          for (const auto& e : v) check_scalar(src, e, key, Type::Count);
        } else {
          fail(src, v, "'grid' must be an integer or a list of integers");
        }
        break;
      case Type::NumberMap:
        if (!v.IsMap()) fail(src, v, "'params' must be a mapping of names to numbers");
        for (const auto& p : v) check_scalar(src, p.second, "params." + p.first.as<std::string>(), Type::Number);
        break;
      case Type::Time: check_map(src, v, key, {{"t_max", Type::Number}, {"steps", Type::Count}}); break;
      case Type::Scan:
        check_map(src, v, key,
                  {{"parameter", Type::String},
                   {"from", Type::Number},
                   {"to", Type::Number},
                   {"points", Type::Count},
                   {"diagnostic", Type::String},
                   {"chi", Type::Number}});
        break;
      case Type::Output: check_map(src, v, key, {{"path", Type::String}, {"format", Type::String}}); break;
      case Type::Path:
        if (!v.IsSequence()) fail(src, v, "'path' must be a list of {label, k} entries");
        for (const auto& e : v) {
          if (!e.IsMap()) fail(src, e, "path entries must be mappings with 'label' and 'k'");
          for (const auto& f : e) {
            const std::string name = f.first.as<std::string>();
            if (name == "label") {
              check_scalar(src, f.second, "path.label", Type::String);
            } else if (name == "k") {
              if (!f.second.IsSequence() || f.second.size() < 1 || f.second.size() > 3)
                fail(src, f.second, "'path.k' must be a list of 1 to 3 numbers");
              for (const auto& c : f.second) check_scalar(src, c, "path.k", Type::Number);
            } else {
              fail(src, f.first, "unknown key 'path." + name + "'");
            }
          }
          if (!e["label"] || !e["k"]) fail(src, e, "path entries need both 'label' and 'k'");
        }
        break;
    }
  }
}

void merge_into(YAML::Node target, const YAML::Node& source) {
  for (const auto& kv : source) {
    const std::string key = kv.first.as<std::string>();
    if (kv.second.IsNull()) {
      target.remove(key);
    } else if (kv.second.IsMap() && target[key] && target[key].IsMap()) {
      merge_into(target[key], kv.second);
    } else {
      target[key] = kv.second;
    }
  }
}

/// "a.b=value" -> {a: {b: value}}
YAML::Node override_node(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("--set " + text + ": expected key=value");
  const std::string path = text.substr(0, eq);
  YAML::Node value;
  try {
    value = YAML::Load(text.substr(eq + 1));
  } catch (const YAML::Exception& e) {
    throw ConfigError("--set " + text + ": " + e.msg);
  }
  std::vector<std::string> parts;
  std::stringstream ss(path);
  for (std::string part; std::getline(ss, part, '.');) {
    if (part.empty()) throw ConfigError("--set " + text + ": empty key component");
    parts.push_back(part);
  }
  YAML::Node node = value;
  for (auto it = parts.rbegin(); it != parts.rend(); ++it) {
    YAML::Node parent(YAML::NodeType::Map);
    parent[*it] = node;
    node = parent;
  }
  return node;
}

Diagnostic parse_diagnostic(const std::string& s) {
  if (s == "min-log10") return Diagnostic::MinLog10ModulusSq;
  if (s == "min") return Diagnostic::MinModulusSq;
  if (s == "snapshot") return Diagnostic::SnapshotLog10;
  throw ConfigError("scan.diagnostic: expected min-log10, min or snapshot, got '" + s + "'");
}

std::string diagnostic_name(Diagnostic d) {
  switch (d) {
    case Diagnostic::MinModulusSq: return "min";
    case Diagnostic::MinLog10ModulusSq: return "min-log10";
    case Diagnostic::SnapshotLog10: return "snapshot";
  }
  return "";
}

const std::vector<std::string>& commands() {
  static const std::vector<std::string> c{"sweep", "kmap", "path", "series", "nodes", "topo", "spectrum"};
  return c;
}

bool needs_delta(const std::string& command) {
  return command == "sweep" || command == "kmap" || command == "path" || command == "series";
}

}  // namespace

const std::vector<ModelInfo>& model_catalog() {
  static const std::vector<ModelInfo> catalog{
      {"ssh", "bloch", {{"phi", 0.0}}, {200}, 0, "dimerized chain, Bloch form"},
      {"ssh-open", "lattice", {{"phi", 0.0}}, {}, 200, "dimerized chain, open ends, real space"},
      {"qwz", "bloch", {{"M", -2.0}}, {100, 100}, 0, "Qi-Wu-Zhang Chern insulator"},
      {"qwz-strip", "ribbon", {{"M", 0.0}}, {100}, 16, "QWZ strip open along x, k_y kept"},
      {"km-ribbon",
       "ribbon",
       {{"lambda_so", 0.06}, {"lambda_r", 0.05}, {"lambda_v", 0.1 / 1.7320508075688772}},
       {100},
       8,
       "Kane-Mele zigzag ribbon, open along x, k_y kept"},
      {"weyl",
       "bloch",
       {{"epsilon", 6.0},
        {"t", 1.0},
        {"lambda", 2.0},
        {"lambda_z", 2.0},
        {"b0", 0.0},
        {"b1", 0.0},
        {"b2", 0.0},
        {"b3", 0.0}},
       {40, 40, 40},
       0,
       "four-band cubic Weyl model"},
  };
  return catalog;
}

const ModelInfo& model_info(const std::string& id) {
  for (const auto& m : model_catalog())
    if (m.id == id) return m;
  std::string known;
  for (const auto& m : model_catalog()) known += (known.empty() ? "" : ", ") + m.id;
  throw ConfigError("unknown model '" + id + "' (available: " + known + ")");
}

const std::vector<Preset>& presets() {
  static const std::vector<Preset> p = build_presets();
  return p;
}

const Preset& find_preset(const std::string& name) {
  for (const auto& p : presets())
    if (p.name == name) return p;
  std::string known;
  for (const auto& p : presets()) known += (known.empty() ? "" : ", ") + p.name;
  throw ConfigError("unknown preset '" + name + "' (available: " + known + ")");
}

std::pair<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::ostringstream os;
  os << in.rdbuf();
  return {path, os.str()};
}

RunConfig load_config(const std::vector<std::pair<std::string, std::string>>& sources,
                      const std::vector<std::string>& overrides) {
  YAML::Node merged(YAML::NodeType::Map);
  auto absorb = [&](const std::string& label, const YAML::Node& doc) {
    if (doc.IsNull()) return;
    check_top(label, doc);
    merge_into(merged, doc);
  };
  for (const auto& [label, text] : sources) {
    YAML::Node doc;
    try {
      doc = YAML::Load(text);
    } catch (const YAML::ParserException& e) {
      throw ConfigError(label + ":" + std::to_string(e.mark.line + 1) + ": " + e.msg);
    }
    absorb(label, doc);
  }
  for (const auto& o : overrides) absorb("--set " + o, override_node(o));

  RunConfig c;
  auto get = [&](const char* key) { return merged[key]; };

  if (get("command")) c.command = get("command").as<std::string>();
  if (c.command.empty()) throw ConfigError("missing required field 'command'");
  if (std::find(commands().begin(), commands().end(), c.command) == commands().end())
    throw ConfigError("unknown command '" + c.command + "'");

  if (!get("model")) throw ConfigError("missing required field 'model'");
  c.model = get("model").as<std::string>();
  const ModelInfo& info = model_info(c.model);

  for (const auto& [name, value] : info.defaults) c.params[name] = value;
  if (get("params")) {
    for (const auto& kv : get("params")) {
      const std::string name = kv.first.as<std::string>();
      if (!c.params.count(name)) throw ConfigError("params." + name + ": not a parameter of model " + c.model);
      c.params[name] = kv.second.as<double>();
    }
  }

  if (get("delta")) c.delta = get("delta").as<double>();
  if (c.delta && !std::isfinite(*c.delta)) throw ConfigError("delta: must be finite");
  if (!c.delta && needs_delta(c.command)) throw ConfigError("missing required field 'delta'");

  c.grid = info.grid;
  if (YAML::Node g = get("grid")) {
    c.grid.clear();
    if (g.IsScalar()) {
      c.grid.assign(std::max<std::size_t>(info.grid.size(), 1), g.as<std::size_t>());
    } else {
      for (const auto& e : g) c.grid.push_back(e.as<std::size_t>());
    }
  }
  if (info.kind != "lattice" && c.grid.size() != info.grid.size())
    throw ConfigError("grid: model " + c.model + " needs " + std::to_string(info.grid.size()) + " axis sizes");
  for (std::size_t n : c.grid)
    if (n < 2) throw ConfigError("grid: sizes must be at least 2");

  c.cells = info.cells;
  if (get("cells")) c.cells = get("cells").as<std::size_t>();
  if (info.kind != "bloch" && c.cells < 2) throw ConfigError("cells: must be at least 2");

  if (YAML::Node t = get("time")) {
    if (t["t_max"]) c.time.t_max = t["t_max"].as<double>();
    if (t["steps"]) c.time.steps = t["steps"].as<std::size_t>();
  }
  if (!(c.time.t_max > 0.0)) throw ConfigError("time.t_max: must be positive");
  if (c.time.steps < 1) throw ConfigError("time.steps: must be at least 1");
  if (get("t")) c.t = get("t").as<double>();
  if (!std::isfinite(c.t) || c.t < 0.0) throw ConfigError("t: must be a finite non-negative time");

  if (YAML::Node s = get("scan")) {
    ScanSpec scan;
    if (!s["parameter"]) throw ConfigError("scan: missing required field 'scan.parameter'");
    scan.parameter = s["parameter"].as<std::string>();
    if (!c.params.count(scan.parameter))
      throw ConfigError("scan.parameter: '" + scan.parameter + "' is not a parameter of model " + c.model);
    for (const char* f : {"from", "to", "points"})
      if (!s[f]) throw ConfigError(std::string("scan: missing required field 'scan.") + f + "'");
    scan.from = s["from"].as<double>();
    scan.to = s["to"].as<double>();
    scan.points = s["points"].as<std::size_t>();
    if (!(scan.to > scan.from)) throw ConfigError("scan: 'to' must exceed 'from'");
    if (scan.points < 5) throw ConfigError("scan.points: need at least 5");
    if (s["diagnostic"]) scan.diagnostic = parse_diagnostic(s["diagnostic"].as<std::string>());
    if (s["chi"]) scan.chi = s["chi"].as<double>();
    if (!(scan.chi > 0.0)) throw ConfigError("scan.chi: must be positive");
    c.scan = scan;
  }

  if (YAML::Node p = get("path")) {
    for (const auto& e : p) {
      PathVertex v;
      v.label = e["label"].as<std::string>();
      std::size_t i = 0;
      for (const auto& x : e["k"]) v.k[i++] = x.as<double>();
      c.path.push_back(v);
    }
  }
  if (get("samples")) c.samples = get("samples").as<std::size_t>();
  if (c.samples < 1) throw ConfigError("samples: must be at least 1");

  if (YAML::Node f = get("filling")) {
    const std::string s = f.as<std::string>();
    if (s != "negative") {
      try {
        c.filling = FillingRule::lowest(f.as<std::size_t>());
      } catch (const YAML::BadConversion&) {
        throw ConfigError("filling: expected 'negative' or an occupied-level count, got '" + s + "'");
      }
    }
  }

  if (YAML::Node o = get("output")) {
    if (o["path"]) c.out = o["path"].as<std::string>();
    if (o["format"]) c.format = o["format"].as<std::string>();
  }
  if (get("threads")) c.threads = get("threads").as<unsigned>();
  return c;
}

std::string canonical_json(const RunConfig& c) {
  nlohmann::ordered_json j;
  j["command"] = c.command;
  j["model"] = c.model;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  for (const auto& [name, value] : c.params) params[name] = value;
  j["params"] = params;
  j["delta"] = c.delta ? nlohmann::ordered_json(*c.delta) : nlohmann::ordered_json(nullptr);
  j["grid"] = c.grid;
  j["cells"] = c.cells;
  j["time"] = {{"t_max", c.time.t_max}, {"steps", c.time.steps}};
  j["t"] = c.t;
  if (c.scan) {
    j["scan"] = {{"parameter", c.scan->parameter},
                 {"from", c.scan->from},
                 {"to", c.scan->to},
                 {"points", c.scan->points},
                 {"diagnostic", diagnostic_name(c.scan->diagnostic)},
                 {"chi", c.scan->chi}};
  } else {
    j["scan"] = nullptr;
  }
  nlohmann::ordered_json path = nlohmann::ordered_json::array();
  for (const auto& v : c.path) path.push_back({{"label", v.label}, {"k", v.k}});
  j["path"] = path;
  j["samples"] = c.samples;
  j["filling"] = c.filling.mode == FillMode::NegativeEnergy ? nlohmann::ordered_json("negative")
                                                            : nlohmann::ordered_json(c.filling.count);
  return j.dump();
}

std::string config_hash(const RunConfig& config) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : canonical_json(config)) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << h;
  return "fnv1a64:" + os.str();
}

}  // namespace dgprobe::cli
