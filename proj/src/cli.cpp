#include "tsol/cli.hpp"

#include "tsol/catalog.hpp"
#include "tsol/flow.hpp"
#include "tsol/hull.hpp"
#include "tsol/io.hpp"
#include "tsol/pde.hpp"
#include "tsol/verify.hpp"
#include "tsol/wedge.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace tsol {

namespace {

const std::vector<std::string> kFamilyKeys = {"family", "n",     "h",      "rmax",   "R",
                                              "smax",   "theta", "extent", "angle", "offset",
                                              "angular"};

std::vector<std::string> with_family(std::vector<std::string> extra) {
  extra.insert(extra.begin(), kFamilyKeys.begin(), kFamilyKeys.end());
  return extra;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

class Params {
 public:
  explicit Params(const std::map<std::string, std::string>& p) : p_(p) {}

  bool has(const std::string& key) const { return p_.count(key) > 0; }

  std::string text(const std::string& key, const std::string& fallback) const {
    const auto it = p_.find(key);
    return it == p_.end() ? fallback : it->second;
  }

  double real(const std::string& key, double fallback) const {
    const auto it = p_.find(key);
    return it == p_.end() ? fallback : to_real(key, it->second);
  }

  int integer(const std::string& key, int fallback) const {
    const auto it = p_.find(key);
    if (it == p_.end()) return fallback;
    int v = 0;
    const auto& s = it->second;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size()) throw UsageError(key + " must be an integer");
    return v;
  }

  Vector vector(const std::string& key) const {
    const auto it = p_.find(key);
    if (it == p_.end()) throw UsageError("missing parameter " + key);
    std::vector<double> parts;
    std::stringstream ss(it->second);
    std::string item;
    while (std::getline(ss, item, ',')) parts.push_back(to_real(key, trim(item)));
    if (parts.empty()) throw UsageError(key + " must be a comma separated list");
    return Eigen::Map<const Vector>(parts.data(), static_cast<Index>(parts.size()));
  }

  std::map<std::string, double> reals(const std::vector<std::string>& keys) const {
    std::map<std::string, double> out;
    for (const auto& k : keys) {
      if (has(k)) out[k] = real(k, 0.0);
    }
    return out;
  }

 private:
  static double to_real(const std::string& key, const std::string& s) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v)) {
      throw UsageError(key + " must be a finite number");
    }
    return v;
  }

  const std::map<std::string, std::string>& p_;
};

std::string join(const Vector& v) {
  std::string s;
  for (Index i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_real(v(i));
  return s;
}

std::string flag(bool b) { return b ? "1" : "0"; }

CatalogSpec catalog_spec(const Params& p) {
  const auto family = parse_family(p.text("family", "bowl"));
  if (!family) throw UsageError("unknown family " + p.text("family", ""));
  CatalogSpec spec{*family, p.integer("n", 2), p.reals({"h", "rmax", "R", "smax", "theta", "extent", "angle", "offset", "angular"})};
  spec.validate();
  return spec;
}

struct Context {
  const ExperimentConfig& config;
  Params params;
  std::ostream& report;

  std::filesystem::path file(const std::string& name) const { return config.output_dir / name; }
};

int run_generate(Context& ctx) {
  const CatalogSpec spec = catalog_spec(ctx.params);
  const std::string name(family_name(spec.family));
  const SurfaceSample s = generate_sample(spec);
  write_csv(ctx.file(name + "_sample.csv"), sample_table(s));
  const auto profile = generate_profile(spec);
  if (profile) write_csv(ctx.file(name + "_profile.csv"), profile_table(*profile));
  if (spec.dim == 2) {
    if (profile) {
      write_obj(ctx.file(name + ".obj"), *profile, static_cast<Index>(ctx.params.real("angular", 64)));
    } else if (const auto patch = generate_patch(spec)) {
      write_obj(ctx.file(name + ".obj"), *patch);
    }
  }
  ctx.report << "check=generate family=" << name << " n=" << spec.dim << " samples=" << s.size()
             << (profile ? " profile=" + std::to_string(profile->samples.size()) : std::string()) << '\n';
  return kExitOk;
}

int run_verify(Context& ctx) {
  CatalogSpec spec = catalog_spec(ctx.params);
  const int levels = ctx.params.integer("levels", 3);
  const double factor = ctx.params.real("factor", 10.0);
  if (levels < 1) throw UsageError("levels must be positive");
  const double h0 = spec.param("h", 0.04);
  std::vector<ResidualReport> reports;
  CsvTable table{{"family", "h", "max_abs", "rms", "bound", "pass"}, {}};
  bool ok = true;
  const std::string name(family_name(spec.family));
  for (int k = 0; k < levels; ++k) {
    const double h = h0 / std::pow(2.0, k);
    spec.params["h"] = h;
    const auto r = translator_residual(generate_sample(spec));
    reports.push_back(r);
    const double bound = factor * h * h * r.curvature_scale;
    const bool pass = r.passes(factor);
    ok = ok && pass;
    table.add({name, format_real(h), format_real(r.max_abs), format_real(r.l2), format_real(bound), flag(pass)});
    ctx.report << "check=translator_residual family=" << name << " h=" << format_real(h)
               << " max_abs=" << format_real(r.max_abs) << " bound=" << format_real(bound)
               << " pass=" << flag(pass) << '\n';
  }
  const auto order = convergence_order(reports);
  if (order) {
    const bool pass = *order >= 1.8;
    ok = ok && pass;
    ctx.report << "check=convergence_order family=" << name << " order=" << format_real(*order)
               << " pass=" << flag(pass) << '\n';
  } else {
    ctx.report << "check=convergence_order family=" << name << " order=exact pass=1\n";
  }
  write_csv(ctx.file("verify_" + name + ".csv"), table);
  return ok ? kExitOk : kExitCheckFailed;
}

int run_wedge(Context& ctx) {
  const Vector w1 = ctx.params.vector("w1");
  const Vector w2 = ctx.params.vector("w2");
  if (w1.size() != w2.size() || w1.size() < 2) throw UsageError("w1 and w2 need the same size >= 2");
  if (std::abs(w1.norm() - 1.0) > 1e-9 || std::abs(w2.norm() - 1.0) > 1e-9) {
    throw UsageError("w1 and w2 must be unit vectors");
  }
  const WedgeVerdict v = wedge_existence(w1, w2);
  const std::string verdict = v.exists ? "Exists" : "None";
  ctx.report << "check=wedge_existence verdict=" << verdict << " rule=" << v.label() << '\n';
  CsvTable table{{"w1", "w2", "verdict", "rule"}, {}};
  table.add({join(w1), join(w2), verdict, std::string(v.label())});
  if (w1.size() >= 3 && is_vertical(w1) && is_vertical(w2) && is_transverse(w1, w2)) {
    const Vector zero = Vector::Zero(w1.size());
    const auto [nf, motion] = normalize_pair(Halfspace(zero, w1), Halfspace(zero, w2));
    ctx.report << "check=wedge_normal_form xi=" << format_real(nf.xi) << " eta=" << format_real(nf.eta) << '\n';
  }
  write_csv(ctx.file("wedge.csv"), table);
  return kExitOk;
}

int run_classify(Context& ctx) {
  const Params& p = ctx.params;
  SamplingProtocol protocol;
  protocol.levels = p.integer("levels", 6);
  protocol.directions = p.integer("directions", 64);
  protocol.rho0 = p.real("rho0", 1.0);
  protocol.seed = ctx.config.seed;
  if (protocol.levels < 2 || protocol.directions < 4 || !(protocol.rho0 > 0.0)) {
    throw UsageError("classify needs levels >= 2, directions >= 4, rho0 > 0");
  }
  const int n = p.integer("n", 2);
  if (n < 1 || n > 3) throw UsageError("n must be 1, 2 or 3");
  const double rho_max = protocol.radii().back();
  const std::string family = p.text("family", "bowl");
  SurfaceSampler sampler;
  if (family == "bowl") {
    sampler = bowl_sampler(Bowl(n, rho_max + 1.0));
  } else if (family == "cap") {
    sampler = bowl_cap_sampler(Bowl(n, rho_max + 1.0), p.real("cap_height", 2.0));
  } else if (family == "grim_reaper") {
    sampler = grim_reaper_sampler(n, 0.0);
  } else if (family == "tilted_grim_reaper") {
    sampler = grim_reaper_sampler(n, p.real("theta", 0.3));
  } else if (family == "plane") {
    Vector w = Vector::Zero(n + 1);
    const double angle = p.real("angle", 0.0);
    w(0) = std::cos(angle);
    if (n >= 2) w(1) = std::sin(angle);
    sampler = vertical_plane_sampler(w, p.real("offset", 0.0));
  } else if (family == "winglike") {
    sampler = winglike_sampler(winglike(n, p.real("R", 1.0), p.real("smax", 300.0), p.real("h", 0.05)));
  } else {
    throw UsageError("classify family must be bowl, cap, grim_reaper, tilted_grim_reaper, plane or winglike");
  }
  const HullCase c = classify_hull(sampler, n, protocol);
  ctx.report << "check=hull_classification family=" << family << ' ' << c.describe() << '\n';
  CsvTable table{{"family", "case", "width", "normal"}, {}};
  table.add({family, std::string(variant_name(c.variant)), format_real(c.width), join(c.normal)});
  write_csv(ctx.file("classify_" + family + ".csv"), table);
  return c.variant == HullVariant::Indeterminate ? kExitCheckFailed : kExitOk;
}

int run_dirichlet(Context& ctx) {
  const Params& p = ctx.params;
  const std::string problem = p.text("problem", "cap");
  const double h = p.real("h", 0.05);
  SolverOptions options;
  options.max_halvings = p.integer("halvings", options.max_halvings);
  if (options.max_halvings < 10) throw UsageError("halvings must be at least 10");
  GraphPatch data;
  bool expect_flag = false;
  std::function<double(const Vector&)> exact;
  if (problem == "cap") {
    const CapData cap = construct_cap_data(p.real("theta", 0.6), p.real("c", -0.2), h);
    data = cap.problem;
    expect_flag = cap.nongraphical;
    exact = cap.exact;
    ctx.report << "check=cap_data nongraphical=" << flag(cap.nongraphical) << " convex=" << flag(cap.convex) << '\n';
  } else if (problem == "bowl") {
    const int n = p.integer("n", 2);
    const double radius = p.real("radius", 2.0);
    const auto b = std::make_shared<Bowl>(n, radius + 1.0);
    exact = [b](const Vector& y) { return b->height(y.norm()); };
    data = ball_problem(Vector::Zero(n), radius, h, GraphDirection::Vertical, exact);
  } else {
    throw UsageError("dirichlet problem must be cap or bowl");
  }
  const auto [solution, rep] =
      data.direction == GraphDirection::Sideways ? solve_side(data, options) : solve_vertical(data, options);
  double error = std::nan("");
  if (exact && rep.converged) {
    error = 0.0;
    for (Index node = 0; node < solution.grid.size(); ++node) {
      if (solution.active(node)) {
        error = std::max(error, std::abs(solution.values(node) - exact(solution.grid.coordinate(node))));
      }
    }
  }
  ctx.report << "check=dirichlet problem=" << problem << " h=" << format_real(h) << " converged=" << flag(rep.converged)
             << " nonexistence_flag=" << flag(rep.nonexistence_flag) << " iterations=" << rep.iterations
             << " residual=" << format_real(rep.final_residual) << " max_gradient=" << format_real(rep.max_gradient)
             << " coarse_gradient=" << format_real(rep.coarse_gradient) << " max_error=" << format_real(error)
             << (rep.nonexistence_flag ? " evidence=numerical" : "") << '\n';
  write_csv(ctx.file("dirichlet_" + problem + ".csv"), patch_table(solution));
  if (solution.domain_dim() == 2) write_obj(ctx.file("dirichlet_" + problem + ".obj"), solution);
  const bool ok = expect_flag ? rep.nonexistence_flag : rep.converged;
  return ok ? kExitOk : kExitCheckFailed;
}

int run_flow(Context& ctx) {
  const Params& p = ctx.params;
  const std::string family = p.text("family", "grim_reaper");
  const double h = p.real("h", 0.02);
  const double T = p.real("T", 1.0);
  const double extent = p.real("extent", 0.4);
  FlowOptions options;
  options.snapshots = p.integer("snapshots", 10);
  const std::string scheme = p.text("scheme", "explicit");
  if (scheme == "semi_implicit") {
    options.scheme = FlowScheme::SemiImplicit;
  } else if (scheme != "explicit") {
    throw UsageError("scheme must be explicit or semi_implicit");
  }
  GraphPatch initial;
  Vector lo(2), hi(2);
  if (family == "grim_reaper") {
    lo << -p.real("width", 1.0), -extent;
    hi << p.real("width", 1.0), extent;
    initial = grim_reaper(2, GridSpec::box(lo, hi, h));
    options.boundary = [](const Vector& y, double t) { return -std::log(std::cos(y(0))) + t; };
  } else if (family == "bowl") {
    lo << -extent, -extent;
    hi << extent, extent;
    const auto b = std::make_shared<Bowl>(2, 2.0 * extent + 1.0);
    initial = bowl_patch(*b, GridSpec::box(lo, hi, h));
    options.boundary = [b](const Vector& y, double t) { return b->height(y.norm()) + t; };
  } else if (family == "plane") {
    lo << -extent, -extent;
    hi << extent, extent;
    const GridSpec g = GridSpec::box(lo, hi, h);
    initial = GraphPatch{g, Vector::Zero(g.size()), GraphDirection::Vertical, {}};
  } else {
    throw UsageError("flow family must be grim_reaper, bowl or plane");
  }
  const double dt = p.real("dt", cfl_limit(initial.grid));
  const FlowTrajectory flow = flow_graph_mcf(initial, T, dt, options);

  CsvTable table{{"time", "y0", "y1", "u"}, {}};
  for (std::size_t k = 0; k < flow.snapshots.size(); ++k) {
    const auto& snap = flow.snapshots[k];
    for (Index node = 0; node < snap.patch.grid.size(); ++node) {
      const Vector y = snap.patch.grid.coordinate(node);
      table.add({format_real(snap.time), format_real(y(0)), format_real(y(1)), format_real(snap.patch.values(node))});
    }
    char name[32];
    std::snprintf(name, sizeof name, "flow_%03zu.obj", k);
    write_obj(ctx.file(name), snap.patch);
  }
  write_csv(ctx.file("flow_" + family + ".csv"), table);

  bool ok = true;
  const double tol = p.real("tol", 1e-2);
  const double defect = family == "plane" ? (flow.snapshots.back().patch.values - initial.values).cwiseAbs().maxCoeff()
                                          : translation_defect(flow);
  const bool pass = defect <= tol;
  ok = ok && pass;
  ctx.report << "check=" << (family == "plane" ? "static_plane" : "self_translation") << " family=" << family
             << " h=" << format_real(h) << " dt=" << format_real(flow.dt) << " defect=" << format_real(defect)
             << " C=" << format_real(defect / (flow.dt + h * h)) << " pass=" << flag(pass) << '\n';

  if (p.integer("sphere", 0) != 0) {
    SphereFlow sphere{Vector::Unit(3, 2) * p.real("sphere_height", 3.0), p.real("sphere_radius", 1.0), 2};
    const DistanceTrack track = comparison_distance_track(sphere, flow, p.real("C", 1.0));
    CsvTable dist{{"time", "distance"}, {}};
    for (std::size_t k = 0; k < track.times.size(); ++k) {
      dist.add({format_real(track.times[k]), format_real(track.distances[k])});
    }
    write_csv(ctx.file("distance.csv"), dist);
    ok = ok && track.monotone;
    ctx.report << "check=comparison_distance max_decrease=" << format_real(track.max_decrease)
               << " tolerance=" << format_real(track.tolerance) << " pass=" << flag(track.monotone) << '\n';
  }
  return ok ? kExitOk : kExitCheckFailed;
}

int run_probe(Context& ctx) {
  const Params& p = ctx.params;
  const double R = p.real("R", 1.0);
  const double xi = p.real("xi", 0.6);
  if (!(R > 0.0) || !(xi > 0.0 && xi < 1.0)) throw UsageError("probe needs R > 0 and xi in (0, 1)");
  const WedgeNormalForm nf{xi, std::sqrt(1.0 - xi * xi)};
  const double c = p.real("c", 0.3);
  const double a = R / xi - c;
  if (!(c > 0.0 && a > R)) throw UsageError("plane offset c must lie in (0, R / xi - R)");
  const double clip = p.real("clip", 0.05) * a;
  const double h = p.real("h", clip / 10.0);
  const double height = p.real("height", 0.5);
  Vector lo(2), hi(2);
  lo << -height, -clip;
  hi << height, clip;
  const SurfaceSample s = graph_geometry(vertical_plane_patch(c, GridSpec::box(lo, hi, h)));
  std::optional<Cutoff> cutoff;
  if (p.has("ell")) cutoff.emplace(p.real("ell", 0.0), 0.0, R / xi);
  const OYProbeResult r = oy_probe(s, nf, R, cutoff);

  CsvTable table{{"row", "x0", "x1", "x2", "f", "grad_norm", "laplacian", "region"}, {}};
  bool bounded = true;
  for (const auto& row : r.rows) {
    const double bound = R / xi + (cutoff ? cutoff->sup_f : 0.0);
    bounded = bounded && row.f <= bound * (1.0 + 1e-12);
    table.add({std::to_string(row.row), format_real(row.point(0)), format_real(row.point(1)), format_real(row.point(2)),
               format_real(row.f), format_real(row.grad_norm), format_real(row.laplacian),
               row.region == ProbeRegion::InV ? "in_V" : "outside"});
  }
  write_csv(ctx.file("probe.csv"), table);
  ctx.report << "check=distance_bound sup_f=" << format_real(r.sup_f) << " bound=" << format_real(R / xi)
             << " pass=" << flag(bounded) << '\n';
  ctx.report << "check=omori_yau_probe contradiction=" << flag(r.contradiction) << " threshold=" << format_real(r.threshold)
             << " evidence=numerical\n";
  return bounded ? kExitOk : kExitCheckFailed;
}

}  // namespace

std::string_view command_name(Command c) {
  switch (c) {
    case Command::Generate: return "generate";
    case Command::Verify: return "verify";
    case Command::Wedge: return "wedge";
    case Command::Classify: return "classify";
    case Command::Dirichlet: return "dirichlet";
    case Command::Flow: return "flow";
    case Command::Probe: return "probe";
  }
  return "unknown";
}

const std::vector<Command>& all_commands() {
  static const std::vector<Command> v = {Command::Generate, Command::Verify, Command::Wedge, Command::Classify,
                                         Command::Dirichlet, Command::Flow, Command::Probe};
  return v;
}

std::optional<Command> parse_command(std::string_view name) {
  for (Command c : all_commands()) {
    if (command_name(c) == name) return c;
  }
  return std::nullopt;
}

const std::vector<std::string>& allowed_keys(Command c) {
  static const std::map<Command, std::vector<std::string>> keys = {
      {Command::Generate, with_family({})},
      {Command::Verify, with_family({"levels", "factor"})},
      {Command::Wedge, {"w1", "w2"}},
      {Command::Classify, {"family", "n", "levels", "directions", "rho0", "theta", "R", "smax", "h", "cap_height", "angle", "offset"}},
      {Command::Dirichlet, {"problem", "theta", "c", "h", "n", "radius", "halvings"}},
      {Command::Flow, {"family", "h", "T", "dt", "scheme", "extent", "width", "snapshots", "tol", "sphere",
                       "sphere_height", "sphere_radius", "C"}},
      {Command::Probe, {"R", "xi", "c", "clip", "h", "height", "ell"}},
  };
  return keys.at(c);
}

std::map<std::string, std::string> parse_key_values(std::istream& in) {
  std::map<std::string, std::string> out;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw UsageError("config line " + std::to_string(number) + " has no '='");
    const std::string key = trim(std::string_view(t).substr(0, eq));
    if (key.empty()) throw UsageError("config line " + std::to_string(number) + " has an empty key");
    out[key] = trim(std::string_view(t).substr(eq + 1));
  }
  return out;
}

ExperimentConfig make_config(Command command, const std::map<std::string, std::string>& file,
                             const std::map<std::string, std::string>& flags) {
  ExperimentConfig cfg;
  cfg.command = command;
  std::map<std::string, std::string> merged = file;
  for (const auto& [k, v] : flags) merged[k] = v;
  const auto& keys = allowed_keys(command);
  for (const auto& [k, v] : merged) {
    if (k == "seed") {
      std::uint64_t seed = 0;
      const auto r = std::from_chars(v.data(), v.data() + v.size(), seed);
      if (r.ec != std::errc() || r.ptr != v.data() + v.size()) throw UsageError("seed must be a nonnegative integer");
      cfg.seed = seed;
    } else if (k == "out") {
      cfg.output_dir = v;
    } else if (std::find(keys.begin(), keys.end(), k) == keys.end()) {
      throw UsageError("unknown key '" + k + "' for " + std::string(command_name(command)));
    } else {
      cfg.params[k] = v;
    }
  }
  return cfg;
}

int run(const ExperimentConfig& config, std::ostream& report, std::ostream& errors) {
  try {
    Context ctx{config, Params(config.params), report};
    switch (config.command) {
      case Command::Generate: return run_generate(ctx);
      case Command::Verify: return run_verify(ctx);
      case Command::Wedge: return run_wedge(ctx);
      case Command::Classify: return run_classify(ctx);
      case Command::Dirichlet: return run_dirichlet(ctx);
      case Command::Flow: return run_flow(ctx);
      case Command::Probe: return run_probe(ctx);
    }
    return kExitUsage;
  } catch (const IoError& e) {
    errors << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    errors << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    errors << "check failed: " << e.what() << '\n';
    return kExitCheckFailed;
  }
}

}  // namespace tsol
