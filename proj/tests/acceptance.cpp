#include "tsol/catalog.hpp"
#include "tsol/cli.hpp"
#include "tsol/flow.hpp"
#include "tsol/hull.hpp"
#include "tsol/io.hpp"
#include "tsol/pde.hpp"
#include "tsol/verify.hpp"
#include "tsol/wedge.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

using namespace tsol;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

GridSpec square(double half, double h) {
  return GridSpec::box(Vector::Constant(2, -half), Vector::Constant(2, half), h);
}

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Index>(v.size()));
  Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

Vector tilted(double up, double angle) {
  const double s = std::sqrt(1.0 - up * up);
  return vec({s * std::cos(angle), s * std::sin(angle), up});
}

Outcome residual_suite() {
  const auto start = std::chrono::steady_clock::now();
  bool ok = true;
  std::string detail;
  for (Family f : {Family::Plane, Family::GrimReaper, Family::TiltedGrimReaper, Family::Bowl, Family::Winglike,
                   Family::MinimalCylinder}) {
    std::vector<ResidualReport> reports;
    bool bounded = true;
    for (double h : {0.04, 0.02, 0.01}) {
      CatalogSpec spec{f, 2, {{"h", h}}};
      if (f == Family::Bowl) spec.params["rmax"] = 2.0;
      reports.push_back(translator_residual(generate_sample(spec)));
      bounded = bounded && reports.back().passes();
    }
    const auto order = convergence_order(reports);
    const bool pass = bounded && (!order || *order >= 1.8);
    ok = ok && pass;
    detail += std::string(family_name(f)) + ":" + (order ? num(*order) : std::string("exact")) + " ";
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  ok = ok && secs <= 30.0;
  return {ok, detail + "time=" + num(secs) + "s"};
}

Outcome identity_checks() {
  const double R = 1.0, xi = 0.6, c = 0.3, a = R / xi - c;
  const DistanceField df(R, xi);
  const GraphPatch plane = vertical_plane_patch(c, square(0.4, 0.01));
  const SurfaceSample s = graph_geometry(plane);
  double closed = 0.0;
  for (Index i = 0; i < s.size(); ++i) {
    const auto t = identity_terms(df, s.points.row(i).transpose(), s.normals.row(i).transpose(), s.mean_curvature(i));
    const double d = t.distance;
    closed = std::max({closed, std::abs(t.ambient_laplacian - t.identity_rhs), std::abs(t.identity_rhs - a * a / (d * d * d))});
  }
  std::vector<ResidualReport> r;
  for (double h : {0.04, 0.02, 0.01}) r.push_back(main_identity_check(grim_reaper(2, square(0.8, h)), df));
  const auto order = convergence_order(r);
  const bool ok = closed <= 1e-10 && order && *order >= 1.8;
  return {ok, "plane_gap=" + num(closed) + " grim_reaper_order=" + (order ? num(*order) : std::string("none"))};
}

Outcome neck_bounds() {
  bool ok = true;
  std::string detail;
  for (int n : {2, 3}) {
    for (double R : {0.5, 1.0, 2.0, 5.0}) {
      const Winglike w = winglike(n, R, 12.0, 0.01);
      const bool pass = w.r_star && *w.r_star - R <= std::numbers::pi / 2;
      ok = ok && pass;
      detail += "n" + std::to_string(n) + "R" + num(R) + "=" + (w.r_star ? num(*w.r_star - R) : std::string("none")) + " ";
    }
  }
  return {ok, detail};
}

Outcome wedge_table() {
  struct Case {
    Vector w1, w2;
    bool exists;
    WedgeRule rule;
  };
  const double ups[] = {-0.4, 0.0, 0.4};
  const auto expected = [](double u1, double u2, bool parallel) -> std::pair<bool, WedgeRule> {
    if (u1 < 0.0 || u2 < 0.0) return {false, WedgeRule::Descending};
    if (u1 > 0.0 && u2 > 0.0) return {true, WedgeRule::BothRising};
    if (u1 > 0.0 || u2 > 0.0) return {true, WedgeRule::OneVertical};
    return parallel ? std::pair{true, WedgeRule::ParallelPlanes} : std::pair{false, WedgeRule::BiHalfspace};
  };
  std::vector<Case> cases;
  for (double u1 : ups) {
    for (double u2 : ups) {
      const auto [e, r] = expected(u1, u2, false);
      cases.push_back({tilted(u1, 0.3), tilted(u2, 2.1), e, r});
    }
  }
  for (double u : ups) {
    const auto [e, r] = expected(u, u, true);
    cases.push_back({tilted(u, 0.3), tilted(u, 0.3), e, r});
  }
  for (double u : ups) {
    const auto [e, r] = expected(u, -u, true);
    cases.push_back({tilted(u, 0.3), -tilted(u, 0.3), e, r});
  }
  for (const auto& [u1, u2] : {std::pair{0.4, 0.4}, std::pair{0.0, -0.4}}) {
    const auto [e, r] = expected(u1, u2, true);
    cases.push_back({tilted(u1, 0.3), tilted(u2, 0.3 + std::numbers::pi), e, r});
  }
  Index agree = 0;
  for (const auto& c : cases) {
    const WedgeVerdict v = wedge_existence(c.w1, c.w2);
    if (v.exists == c.exists && v.rule == c.rule) ++agree;
  }
  return {agree == static_cast<Index>(cases.size()) && cases.size() == 17,
          std::to_string(agree) + "/" + std::to_string(cases.size()) + " cases agree"};
}

Outcome hull_cases() {
  const Bowl b(2, 150.0);
  Vector w = Vector::Zero(3);
  w(0) = 0.6;
  w(1) = 0.8;
  bool ok = true;
  std::string detail;
  for (int K : {6, 7}) {
    SamplingProtocol p;
    p.levels = K;
    const HullCase bowl = classify_hull(bowl_sampler(b), 2, p);
    const HullCase slab = classify_hull(grim_reaper_sampler(2), 2, p);
    const HullCase plane = classify_hull(vertical_plane_sampler(w, 0.5), 2, p);
    const HullCase cap = classify_hull(bowl_cap_sampler(b, 2.0), 2, p);
    ok = ok && bowl.variant == HullVariant::FullSpace && slab.variant == HullVariant::Slab &&
         std::abs(slab.width - std::numbers::pi) <= 1e-3 && plane.variant == HullVariant::Hyperplane &&
         cap.variant == HullVariant::Compact;
    detail += "K" + std::to_string(K) + ":" + std::string(variant_name(bowl.variant)) + "," +
              std::string(variant_name(slab.variant)) + "(" + num(slab.width) + ")," +
              std::string(variant_name(plane.variant)) + "," + std::string(variant_name(cap.variant)) + " ";
  }
  return {ok, detail};
}

SurfaceSample disk_piece(GraphPatch p, double radius) {
  p.mask.assign(static_cast<std::size_t>(p.grid.size()), 0);
  for (Index node = 0; node < p.grid.size(); ++node) {
    if (p.grid.coordinate(node).norm() > radius) p.mask[static_cast<std::size_t>(node)] = 1;
  }
  return graph_geometry(p);
}

Outcome compact_pieces() {
  const double h = 0.05;
  const Bowl b(2, 4.0);
  const std::vector<std::pair<std::string, SurfaceSample>> pieces = {
      {"bowl_cap", disk_piece(bowl_patch(b, square(2.0, h)), 1.5)},
      {"grim_reaper_window", graph_geometry(grim_reaper(2, square(1.0, h)))},
      {"tilted_grim_reaper_disk", disk_piece(tilted_grim_reaper(2, 0.3, square(1.0, h)), 0.9)},
      {"vertical_plane_disk", disk_piece(vertical_plane_patch(0.2, square(2.0, h)), 1.5)},
  };
  bool ok = true;
  std::string detail;
  for (const auto& [name, s] : pieces) {
    const auto r = boundary_hull_bound_check(s);
    ok = ok && r.holds && r.height_gap <= h && r.max_outside <= h;
    detail += name + ":gap=" + num(r.height_gap) + ",out=" + num(r.max_outside) + " ";
  }
  return {ok, detail};
}

Outcome dirichlet_caps() {
  bool ok = true;
  std::string detail;
  for (double h : {0.1, 0.05, 0.025}) {
    const CapData graphical = construct_cap_data(0.6, -0.2, h);
    const auto [g, gr] = solve_side(graphical.problem);
    const CapData high = construct_cap_data(std::numbers::pi / 4, 1.0, h);
    const auto [x, xr] = solve_side(high.problem);
    const bool pass = !graphical.nongraphical && gr.converged && gr.final_residual <= 1e-10 && !gr.nonexistence_flag &&
                      high.nongraphical && xr.nonexistence_flag;
    ok = ok && pass;
    detail += "h" + num(h) + ":res=" + num(gr.final_residual) + ",flag=" + (xr.nonexistence_flag ? "1" : "0") + " ";
  }
  return {ok, detail};
}

Outcome flow_checks() {
  const double h = 0.01;
  Vector lo(2), hi(2);
  lo << -1.0, -0.2;
  hi << 1.0, 0.2;
  const GraphPatch reaper = grim_reaper(2, GridSpec::box(lo, hi, h));
  FlowOptions ro;
  ro.boundary = [](const Vector& y, double t) { return -std::log(std::cos(y(0))) + t; };
  const double d1 = translation_defect(flow_graph_mcf(reaper, 1.0, cfl_limit(reaper.grid), ro));

  const Bowl b(2, 2.0);
  const GraphPatch bowl = bowl_patch(b, square(0.4, h));
  FlowOptions bo;
  bo.boundary = [&b](const Vector& y, double t) { return b.height(y.norm()) + t; };
  const double d2 = translation_defect(flow_graph_mcf(bowl, 1.0, cfl_limit(bowl.grid), bo));

  const GraphPatch coarse = grim_reaper(2, GridSpec::box(lo, hi, 0.04));
  const auto traj = flow_graph_mcf(coarse, 0.2, cfl_limit(coarse.grid), ro);
  const DistanceTrack track = comparison_distance_track(SphereFlow{vec({0, 0, 3}), 1.0, 2}, traj);
  const bool ok = d1 <= 1e-2 && d2 <= 1e-2 && track.monotone;
  return {ok, "grim_reaper_defect=" + num(d1) + " bowl_defect=" + num(d2) + " distance " +
                  num(track.distances.front()) + "->" + num(track.distances.back()) +
                  " max_drop=" + num(track.max_decrease)};
}

Outcome probe_check() {
  const double R = 1.0, xi = 0.6, c = 0.3, a = R / xi - c;
  const WedgeNormalForm nf{xi, std::sqrt(1.0 - xi * xi)};
  Vector lo(2), hi(2);
  lo << -0.5, -0.05 * a;
  hi << 0.5, 0.05 * a;
  const SurfaceSample s = graph_geometry(vertical_plane_patch(c, GridSpec::box(lo, hi, 0.005 * a)));
  const OYProbeResult r = oy_probe(s, nf, R, std::nullopt);
  bool bounded = !r.rows.empty();
  for (const auto& row : r.rows) bounded = bounded && row.f <= R / xi;
  return {r.contradiction && bounded, "sup_f=" + num(r.sup_f) + " bound=" + num(R / xi) +
                                          " threshold=" + num(r.threshold)};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void full_suite(const std::filesystem::path& dir) {
  const std::vector<std::pair<Command, std::map<std::string, std::string>>> runs = {
      {Command::Generate, {{"family", "bowl"}, {"h", "0.05"}, {"rmax", "3"}}},
      {Command::Generate, {{"family", "winglike"}, {"h", "0.05"}}},
      {Command::Generate, {{"family", "tilted_grim_reaper"}, {"h", "0.05"}}},
      {Command::Verify, {{"family", "grim_reaper"}, {"h", "0.04"}}},
      {Command::Wedge, {{"w1", "1,0,0"}, {"w2", "0,1,0"}}},
      {Command::Classify, {{"family", "grim_reaper"}, {"n", "3"}, {"levels", "5"}}},
      {Command::Dirichlet, {{"problem", "cap"}, {"h", "0.1"}}},
      {Command::Flow, {{"h", "0.05"}, {"T", "0.2"}, {"sphere", "1"}}},
      {Command::Probe, {}},
  };
  for (const auto& [command, params] : runs) {
    auto flags = params;
    flags["seed"] = "20240601";
    flags["out"] = (dir / std::string(command_name(command))).string();
    std::ostringstream report, errors;
    run(make_config(command, {}, flags), report, errors);
  }
}

Outcome determinism() {
  const auto base = std::filesystem::temp_directory_path() / "tsol_acceptance";
  std::filesystem::remove_all(base);
  full_suite(base / "a");
  full_suite(base / "b");
  std::size_t files = 0, same = 0;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(base / "a")) {
    if (!entry.is_regular_file() || entry.path().extension() != ".csv") continue;
    ++files;
    const auto other = base / "b" / std::filesystem::relative(entry.path(), base / "a");
    if (std::filesystem::exists(other) && slurp(entry.path()) == slurp(other)) ++same;
  }
  return {files > 0 && same == files, std::to_string(same) + "/" + std::to_string(files) + " csv files identical"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"residual_suite", residual_suite},   {"identity", identity_checks},   {"neck_bound", neck_bounds},
      {"wedge_truth_table", wedge_table},   {"hull_classifier", hull_cases}, {"boundary_hull", compact_pieces},
      {"dirichlet_caps", dirichlet_caps},   {"flow", flow_checks},           {"omori_yau_probe", probe_check},
      {"determinism", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    std::printf("%s %zu %s %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
