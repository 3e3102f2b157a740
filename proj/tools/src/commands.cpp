#include "commands.hpp"

#include <cmath>
#include <sstream>
#include <variant>

#include <dgprobe/parallel.hpp>

namespace dgprobe::cli {

namespace {

using BlochModel = std::variant<TwoBandBloch, MultiBandBloch>;

WeylParameters weyl_parameters(const ParameterMap& p) {
  WeylParameters w;
  w.epsilon = p.at("epsilon");
  w.hopping = p.at("t");
  w.lambda = p.at("lambda");
  w.lambda_z = p.at("lambda_z");
  w.b0 = p.at("b0");
  w.b1 = p.at("b1");
  w.b2 = p.at("b2");
  w.b3 = p.at("b3");
  return w;
}

BlochModel make_bloch(const std::string& id, const ParameterMap& p) {
  if (id == "ssh") return ssh_bloch(p.at("phi"));
  if (id == "qwz") return qwz_bloch(p.at("M"));
  return weyl_bloch(weyl_parameters(p));
}

MultiBandBloch as_multi(const BlochModel& m) {
  if (const auto* two = std::get_if<TwoBandBloch>(&m)) return as_multiband(*two);
  return std::get<MultiBandBloch>(m);
}

LatticeModel make_lattice(const RunConfig& c, const ParameterMap& p) {
  LatticeModel m = ssh_open_chain(c.cells, p.at("phi"));
  m.filling = c.filling;
  return m;
}

RibbonModel make_ribbon(const RunConfig& c) {
  RibbonModel r;
  if (c.model == "qwz-strip") {
    r = qwz_strip(c.cells, c.params.at("M"));
  } else {
    r = km_ribbon(c.cells, KaneMeleParameters{c.params.at("lambda_so"), c.params.at("lambda_r"),
                                              c.params.at("lambda_v")});
  }
  r.filling = c.filling;
  return r;
}

const std::string& kind(const RunConfig& c) { return model_info(c.model).kind; }

[[noreturn]] void unsupported(const RunConfig& c) {
  throw ConfigError(c.command + ": not available for model " + c.model + " (" + kind(c) + ")");
}

MomentumGrid bloch_grid(const RunConfig& c) { return MomentumGrid::of(c.grid); }

std::vector<Column> momentum_columns(int dimension) {
  static const char* names[] = {"kx", "ky", "kz"};
  std::vector<Column> cols;
  for (int a = 0; a < dimension; ++a) cols.push_back({names[a], "1/a"});
  return cols;
}

std::string join_indices(const std::vector<double>& values) {
  std::ostringstream os;
  for (std::size_t i = 0; i < values.size(); ++i) os << (i ? " " : "") << format_number(values[i]);
  return values.empty() ? "none" : os.str();
}

std::vector<double> scan_values(const ScanSpec& s) { return linspace(s.from, s.to, s.points); }

Table run_sweep(const RunConfig& c) {
  if (!c.scan) throw ConfigError("sweep: missing required field 'scan'");
  if (kind(c) == "ribbon") unsupported(c);
  const ScanSpec& scan = *c.scan;
  const std::vector<double> values = scan_values(scan);

  ModelFamily family;
  if (kind(c) == "lattice") {
    family = std::function<LatticeModel(double)>([&](double x) {
      ParameterMap p = c.params;
      p[scan.parameter] = x;
      return make_lattice(c, p);
    });
  } else if (c.model == "weyl") {
    family = std::function<MultiBandBloch(double)>([&](double x) {
      ParameterMap p = c.params;
      p[scan.parameter] = x;
      return std::get<MultiBandBloch>(make_bloch(c.model, p));
    });
  } else {
    family = std::function<TwoBandBloch(double)>([&](double x) {
      ParameterMap p = c.params;
      p[scan.parameter] = x;
      return std::get<TwoBandBloch>(make_bloch(c.model, p));
    });
  }

  SweepOptions options;
  options.diagnostic = scan.diagnostic;
  options.snapshot_time = c.t;
  options.chi = scan.chi;
  options.filling = c.filling;
  options.threads = c.threads;
  const std::vector<double> times = time_grid(c.time.t_max, c.time.steps);
  const MomentumGrid grid = kind(c) == "bloch" ? bloch_grid(c) : MomentumGrid::uniform(1, 2);
  const ScanResult result = sweep_parameter(scan.parameter, family, values, grid, *c.delta, times, options);

  Table t;
  const char* unit = scan.diagnostic == Diagnostic::MinModulusSq ? "1" : "log10";
  t.columns = {{scan.parameter, "1"}, {"diagnostic", unit}, {"is_cusp", "bool"}};
  std::vector<double> cusp_at;
  std::vector<bool> is_cusp(values.size(), false);
  for (std::size_t i : result.cusps) {
    is_cusp[i] = true;
    cusp_at.push_back(values[i]);
  }
  for (std::size_t i = 0; i < values.size(); ++i)
    t.rows.push_back({values[i], result.diagnostic[i], is_cusp[i] ? 1.0 : 0.0});
  t.meta = {{"diagnostic", scan.diagnostic == Diagnostic::MinModulusSq        ? "min_t |L|^2"
                           : scan.diagnostic == Diagnostic::MinLog10ModulusSq ? "min_t log10 |L|^2"
                                                                                : "log10 |L(t)|^2 at t=" + format_number(c.t)},
            {"cusps", join_indices(cusp_at)}};
  return t;
}

Table run_kmap(const RunConfig& c) {
  Table t;
  const double delta = *c.delta;
  if (kind(c) == "bloch") {
    const BlochModel model = make_bloch(c.model, c.params);
    const MomentumGrid grid = bloch_grid(c);
    std::vector<double> lk2(grid.size());
    std::vector<char> flagged(grid.size());
    parallel_for(grid.size(), c.threads, [&](std::size_t f) {
      std::visit(
          [&](const auto& m) {
            const MomentumEcho echo(m, grid.point(f), delta, c.filling);
            lk2[f] = std::norm(echo(c.t));
            flagged[f] = echo.choice() != OrbitalChoice::Regular;
          },
          model);
    });
    t.columns = momentum_columns(grid.dimension);
    t.columns.push_back({"lk2", "1"});
    t.columns.push_back({"flagged", "bool"});
    for (std::size_t f = 0; f < grid.size(); ++f) {
      const Momentum k = grid.point(f);
      std::vector<double> row(k.begin(), k.begin() + grid.dimension);
      row.push_back(lk2[f]);
      row.push_back(flagged[f] ? 1.0 : 0.0);
      t.rows.push_back(std::move(row));
    }
  } else if (kind(c) == "ribbon") {
    const RibbonModel ribbon = make_ribbon(c);
    const std::vector<double> ks = MomentumGrid::of(c.grid).axis(0);
    const std::vector<double> at{c.t};
    t.rows.resize(ks.size());
    parallel_for(ks.size(), c.threads, [&](std::size_t i) {
      const LatticeModel slice = ribbon.at(ks[i]);
      const DecoherenceSeries s = realspace_series(slice, delta, at);
      t.rows[i] = {ks[i], s.modsq(0), s.flagged ? 1.0 : 0.0, direct_gap(slice.h)};
    });
    t.columns = {{ribbon.momentum_axis, "1/a"}, {"lk2", "1"}, {"flagged", "bool"}, {"gap", "energy"}};
  } else {
    unsupported(c);
  }
  t.meta = {{"t", format_number(c.t)}, {"delta", format_number(delta)}};
  return t;
}

Table run_path(const RunConfig& c) {
  if (kind(c) != "bloch") unsupported(c);
  if (c.path.size() < 2) throw ConfigError("path: need at least two vertices");
  const MultiBandBloch model = as_multi(make_bloch(c.model, c.params));
  const PathScan scan = momentum_path_scan(model, c.path, c.samples, *c.delta, c.t, c.filling);

  Table t;
  t.columns = {{"s", "1/a"}, {"kx", "1/a"}, {"ky", "1/a"}, {"kz", "1/a"}, {"lk2", "1"}, {"flagged", "bool"}};
  for (std::size_t b = 0; b < model.bands; ++b) t.columns.push_back({"E" + std::to_string(b), "energy"});
  for (std::size_t i = 0; i < scan.momenta.size(); ++i) {
    std::vector<double> row{scan.arclength[i], scan.momenta[i][0], scan.momenta[i][1], scan.momenta[i][2],
                            scan.lk2[i], scan.flagged[i] ? 1.0 : 0.0};
    row.insert(row.end(), scan.bands[i].begin(), scan.bands[i].end());
    t.rows.push_back(std::move(row));
  }
  std::ostringstream vertices;
  for (std::size_t v = 0; v < c.path.size(); ++v)
    vertices << (v ? " " : "") << c.path[v].label << "@" << format_number(scan.arclength[scan.vertex_index[v]]);
  t.meta = {{"vertices", vertices.str()}, {"t", format_number(c.t)}, {"delta", format_number(*c.delta)}};
  return t;
}

Table run_series(const RunConfig& c) {
  const std::vector<double> times = time_grid(c.time.t_max, c.time.steps);
  DecoherenceSeries s;
  if (kind(c) == "bloch") {
    ProductOptions options;
    options.filling = c.filling;
    options.threads = c.threads;
    const MomentumGrid grid = bloch_grid(c);
    s = std::visit([&](const auto& m) { return product_series(m, grid, *c.delta, times, options); },
                   make_bloch(c.model, c.params));
  } else if (kind(c) == "lattice") {
    s = realspace_series(make_lattice(c, c.params), *c.delta, times);
  } else {
    unsupported(c);
  }
  Table t;
  t.columns = {{"t", "1/energy"}, {"modsq", "1"}, {"log10_modsq", "log10"}, {"phase", "rad"}};
  for (std::size_t i = 0; i < times.size(); ++i)
    t.rows.push_back({times[i], std::pow(10.0, s.log10_modsq[i]), s.log10_modsq[i], s.phase[i]});
  t.meta = {{"delta", format_number(*c.delta)}, {"flagged", std::to_string(s.flagged)}};
  return t;
}

Table run_nodes(const RunConfig& c) {
  if (kind(c) != "bloch") unsupported(c);
  NodeOptions options;
  options.threads = c.threads;
  const MultiBandBloch model = as_multi(make_bloch(c.model, c.params));
  const NodeReport report = locate_nodes(model, bloch_grid(c), options);
  Table t;
  t.columns = {{"kx", "1/a"}, {"ky", "1/a"},       {"kz", "1/a"},
               {"gap", "energy"}, {"degenerate", "bool"}, {"multiplicity", "count"}};
  for (const Node& n : report.nodes)
    t.rows.push_back({n.k[0], n.k[1], n.k[2], n.gap, n.degenerate ? 1.0 : 0.0, static_cast<double>(n.multiplicity)});
  t.meta = {{"degenerate_count", std::to_string(report.degenerate_count())},
            {"coarse_min_gap", format_number(report.coarse_min_gap)},
            {"refinement_radius", format_number(report.refinement_radius)}};
  return t;
}

Table run_topo(const RunConfig& c) {
  if (c.model != "ssh" && c.model != "qwz") unsupported(c);
  const bool zak = c.model == "ssh";
  const std::string param = zak ? "phi" : "M";
  if (c.scan && c.scan->parameter != param) throw ConfigError("scan.parameter: topo scans " + param);
  const std::vector<double> values = c.scan ? scan_values(*c.scan) : std::vector<double>{c.params.at(param)};
  const std::size_t n_k = c.grid[0];

  Table t;
  t.rows.resize(values.size());
  std::vector<char> gapless(values.size(), 0);
  parallel_for(values.size(), c.threads, [&](std::size_t i) {
    ParameterMap p = c.params;
    p[param] = values[i];
    const TwoBandBloch model = std::get<TwoBandBloch>(make_bloch(c.model, p));
    try {
      if (zak) {
        const ZakPhase z = zak_phase(model, n_k);
        t.rows[i] = {values[i], z.value, z.raw, z.quantized ? 1.0 : 0.0};
      } else {
        const ChernNumber ch = chern_number(model, n_k);
        t.rows[i] = {values[i], static_cast<double>(ch.value), ch.raw, ch.residue};
      }
    } catch (const NumericFailure&) {
      // A single point propagates; inside a scan the gapless value is marked.
      if (!c.scan) throw;
      const double nan = std::nan("");
      t.rows[i] = {values[i], nan, nan, zak ? 0.0 : nan};
      gapless[i] = 1;
    }
  });
  if (zak) {
    t.columns = {{"phi", "1"}, {"zak", "rad"}, {"zak_raw", "rad"}, {"quantized", "bool"}};
  } else {
    t.columns = {{"M", "1"}, {"chern", "1"}, {"chern_raw", "1"}, {"residue", "1"}};
  }
  std::vector<double> skipped;
  for (std::size_t i = 0; i < values.size(); ++i)
    if (gapless[i]) skipped.push_back(values[i]);
  t.meta = {{"n_k", std::to_string(n_k)}, {"gapless", join_indices(skipped)}};
  return t;
}

std::vector<Table> run_spectrum(const RunConfig& c) {
  std::vector<Table> out(1);
  Table& t = out[0];
  if (kind(c) == "bloch") {
    const MultiBandBloch model = as_multi(make_bloch(c.model, c.params));
    const MomentumGrid grid = bloch_grid(c);
    t.rows.resize(grid.size());
    parallel_for(grid.size(), c.threads, [&](std::size_t f) {
      const Momentum k = grid.point(f);
      std::vector<double> row(k.begin(), k.begin() + grid.dimension);
      const auto e = eig_hermitian(model.hamiltonian(k)).eigenvalues;
      row.insert(row.end(), e.begin(), e.end());
      t.rows[f] = std::move(row);
    });
    t.columns = momentum_columns(grid.dimension);
    for (std::size_t b = 0; b < model.bands; ++b) t.columns.push_back({"E" + std::to_string(b), "energy"});
  } else if (kind(c) == "ribbon") {
    const RibbonModel ribbon = make_ribbon(c);
    const std::vector<double> ks = MomentumGrid::of(c.grid).axis(0);
    t.rows.resize(ks.size());
    parallel_for(ks.size(), c.threads, [&](std::size_t i) {
      const auto e = eig_hermitian(ribbon.h_of_k(ks[i])).eigenvalues;
      t.rows[i] = {ks[i]};
      t.rows[i].insert(t.rows[i].end(), e.begin(), e.end());
    });
    t.columns = {{ribbon.momentum_axis, "1/a"}};
    for (std::size_t b = 0; b < ribbon.dimension(); ++b) t.columns.push_back({"E" + std::to_string(b), "energy"});
    if (c.model == "km-ribbon") {
      Table sites;
      sites.suffix = ".sites";
      sites.columns = {{"site", "index"}, {"chain", "index"}, {"sublattice", "0=A,1=B"}, {"x", "a"}, {"y", "a"}};
      for (const KaneMeleSite& s : km_ribbon_sites(c.cells))
        sites.rows.push_back({static_cast<double>(s.index), static_cast<double>(s.chain),
                              static_cast<double>(s.sublattice), s.x, s.y});
      sites.meta = {{"orbital", "2*site + spin (0=up, 1=down)"}};
      out.push_back(std::move(sites));
    }
  } else {
    const LatticeModel m = make_lattice(c, c.params);
    const EigenSystem es = eig_hermitian(m.h);
    const auto loc = edge_localization(es, m.geometry);
    t.columns = {{"index", "count"}, {"energy", "energy"}, {"ipr", "1"}, {"edge_weight", "1"},
                 {"left_weight", "1"}, {"right_weight", "1"}};
    for (std::size_t i = 0; i < es.eigenvalues.size(); ++i)
      t.rows.push_back({static_cast<double>(i), es.eigenvalues[i], loc[i].ipr, loc[i].edge_weight(),
                        loc[i].left_weight, loc[i].right_weight});
  }
  return out;
}

}  // namespace

std::vector<Table> execute(const RunConfig& c) {
  if (c.command == "sweep") return {run_sweep(c)};
  if (c.command == "kmap") return {run_kmap(c)};
  if (c.command == "path") return {run_path(c)};
  if (c.command == "series") return {run_series(c)};
  if (c.command == "nodes") return {run_nodes(c)};
  if (c.command == "topo") return {run_topo(c)};
  if (c.command == "spectrum") return run_spectrum(c);
  throw ConfigError("unknown command '" + c.command + "'");
}

}  // namespace dgprobe::cli
