#include "commands.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>

#include "lorentz/comparison.hpp"
#include "lorentz/conjugate.hpp"
#include "lorentz/curve.hpp"
#include "lorentz/factory.hpp"
#include "lorentz/frechet.hpp"
#include "lorentz/geodesic.hpp"
#include "lorentz/model_space.hpp"
#include "lorentz/parallel.hpp"

namespace lorentz::cli {
namespace {

// ---- JSON conversion ----

Json num(double x) {
  if (std::isnan(x)) return nullptr;
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

Json vec_json(const Vec& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(num(v[i]));
  return a;
}

Json nums(const std::vector<double>& xs) {
  Json a = Json::array();
  for (double x : xs) a.push_back(num(x));
  return a;
}

Vec to_vec(const Json& j) {
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  return v;
}

std::vector<double> to_doubles(const Json& j) { return j.get<std::vector<double>>(); }

// ---- fields ----

Field req(std::string key, FieldType type, std::string help) {
  Field f;
  f.key = std::move(key);
  f.type = type;
  f.required = true;
  f.help = std::move(help);
  return f;
}

Field opt(std::string key, FieldType type, Json fallback, std::string help) {
  Field f;
  f.key = std::move(key);
  f.type = type;
  f.fallback = std::move(fallback);
  f.help = std::move(help);
  return f;
}

Field positional(std::string key, std::string help) {
  Field f = req(std::move(key), FieldType::path, std::move(help));
  f.positional = true;
  return f;
}

Field choice(std::string key, std::vector<std::string> choices, std::string help) {
  Field f = opt(std::move(key), FieldType::string, choices.front(), std::move(help));
  f.choices = std::move(choices);
  return f;
}

Field space_field() { return req("space", FieldType::space, "space descriptor (inline JSON or file)"); }
Field out_field() { return opt("out", FieldType::string, nullptr, "write the JSON report to this file"); }
Field csv_field() { return opt("csv", FieldType::string, nullptr, "write tabular data to this CSV file"); }
Field workers_field(int workers) { return opt("workers", FieldType::integer, workers, "worker threads"); }

std::vector<Field> detector_fields(int workers) {
  return {opt("rings", FieldType::integer, 6, "number of shrinking rings"),
          opt("eps0", FieldType::positive, 0.1, "initial endpoint ring radius"),
          opt("delta0", FieldType::positive, 0.2, "initial d_Gamma closeness"), workers_field(workers)};
}

std::vector<Field> join(std::vector<Field> a, const std::vector<Field>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

// ---- space and geodesic construction ----

SpaceHandle open_space(const Json& s) {
  SpaceDescriptor d;
  d.space = s["space"].get<std::string>();
  if (s.contains("K")) d.K = s["K"].get<double>();
  d.dim = s["dim"].get<int>();
  if (s.contains("fiber")) d.fiber = s["fiber"].get<std::string>();
  if (s.contains("radius")) d.radius = s["radius"].get<double>();
  if (s.contains("axes")) d.axes = to_doubles(s["axes"]);
  d.tol_chron = s["tol_chron"].get<double>();
  try {
    return make_space(d);
  } catch (const DomainError& e) {
    throw UsageError(std::string("schema violation at /space: ") + e.what());
  }
}

const SmoothSpacetime& smooth(const SpaceHandle& h) {
  if (!h.spacetime) throw UsageError("schema violation at /space: expected a smooth spacetime");
  return *h.spacetime;
}

SpaceHandle open_model(const Json& c) {
  const Json desc = validate_space(Json{{"space", "model_k"}, {"K", c["K"]}, {"dim", c["dim"]}}, "");
  return make_model_space(desc["K"].get<double>(), desc["dim"].get<int>());
}

GeodesicSolution geodesic_from(const SmoothSpacetime& st, const Json& g, int nodes) {
  const Event p = to_vec(g["p"]);
  if (!st.in_domain(p)) throw DomainError("geodesic start point lies outside the chart");
  return trace_geodesic(st, p, to_vec(g["v"]), g["t_max"].get<double>(), nodes);
}

void write_csv(const Json& c, const std::function<void(std::ostream&)>& fill) {
  if (!c.contains("csv") || c["csv"].is_null()) return;
  const std::string path = c["csv"];
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  out.precision(std::numeric_limits<double>::max_digits10);
  fill(out);
  if (!out) throw Error("failed writing '" + path + "'");
}

int csv_columns(const std::string& path) {
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  int cols = header.empty() ? 0 : 1;
  for (char ch : header) cols += ch == ',';
  return cols;
}

DetectorConfig detector_from(const Json& c) {
  DetectorConfig d;
  d.rings = c["rings"].get<int>();
  d.eps0 = c["eps0"].get<double>();
  d.delta0 = c["delta0"].get<double>();
  d.workers = c["workers"].get<int>();
  return d;
}

EmbeddingScheme scheme_from(const Json& c) {
  const std::string s = c["scheme"];
  if (s == "rings") return EmbeddingScheme::rings;
  if (s == "neighbor") return EmbeddingScheme::neighbor;
  return EmbeddingScheme::automatic;
}

Json detector_json(const DetectorResult& r) {
  return {{"flag", r.flag},
          {"eps", nums(r.eps)},
          {"delta", nums(r.delta)},
          {"deviation", nums(r.deviation)},
          {"witnesses", r.witnesses.size()}};
}

Json report_json(const SmoothSpacetime& st, const ConjugateReport& r) {
  Json emb{{"unreachable", r.embeddability.unreachable},
           {"scheme", r.embeddability.scheme},
           {"eps", nums(r.embeddability.eps)},
           {"deviation", nums(r.embeddability.deviation)},
           {"neighbor", nullptr}};
  if (r.embeddability.neighbor)
    emb["neighbor"] = {{"initial_velocity", vec_json(r.embeddability.neighbor->initial_velocity)},
                       {"length", num(lg_length(st, *r.embeddability.neighbor))}};
  return {{"jacobi", r.jacobi},
          {"one_sided", r.one_sided},
          {"symmetric", r.symmetric},
          {"unreachable", r.unreachable},
          {"ultimate", r.ultimate},
          {"consistent", r.consistent},
          {"jacobi_parameters", nums(r.jacobi_parameters)},
          {"one_sided_search", detector_json(r.one_sided_result)},
          {"symmetric_search", detector_json(r.symmetric_result)},
          {"embeddability", emb},
          {"notes", r.notes}};
}

// ---- operations ----

Json model_tau(const Json& c) {
  const auto h = open_model(c);
  const Event x = to_vec(c["x"]), y = to_vec(c["y"]);
  const double tau = tau_model(*h.model, x, y);
  return {{"tau", num(tau)}, {"timelike", tau > h.model->chronology_tolerance()},
          {"causal", h.model->causal(x, y)}, {"diameter", num(timelike_diameter(*h.model))}};
}

Json model_diameter(const Json& c) { return {{"diameter", num(timelike_diameter(c["K"].get<double>()))}}; }

Json model_exp(const Json& c) {
  const auto h = open_model(c);
  const Event x = model_geodesic(*h.model, to_vec(c["p"]), to_vec(c["v"]), c["t"].get<double>());
  return {{"point", vec_json(x)}};
}

Json curve_tau_length(const Json& c) {
  const auto h = open_space(c["space"]);
  const auto curve = read_curve_csv(c["curve"].get<std::string>(), h.prelength);
  const auto len = tau_length(curve);
  const bool causal = is_causal(curve);
  Json out{{"tau_length", num(len.value)},
           {"refinement_gap", num(len.refinement_gap)},
           {"causal", causal},
           {"character", to_string(classify_character(curve))},
           {"samples", curve.size()}};
  if (h.spacetime && causal) out["l_g_length"] = num(l_g_length(curve, *h.spacetime));
  return out;
}

Json frechet(const Json& c) {
  const std::string a_path = c["a"], b_path = c["b"];
  SpaceHandle h;
  if (c.contains("space")) {
    h = open_space(c["space"]);
  } else {
    const int dim = csv_columns(a_path) - 1;
    if (dim < 1 || dim > kMaxDim) throw UsageError("schema violation at /a: expected columns t, x1..x_dim");
    h.prelength = std::make_shared<const EuclideanSpace>(dim);
  }
  const auto a = canonicalize(read_curve_csv(a_path, h.prelength));
  const auto b = canonicalize(read_curve_csv(b_path, h.prelength));
  const auto r = frechet_refine(a, b, c["gap"].get<double>(), c["max_refinements"].get<int>());
  Json out{{"frechet", num(r.value)},
           {"certified_gap", num(r.certified_gap)},
           {"refinements", r.refinements},
           {"converged", r.converged}};
  double value = r.value;
  if (c["dgamma"].get<bool>()) {
    const double la = tau_length(a.canonical).value, lb = tau_length(b.canonical).value;
    if (std::isinf(la) || std::isinf(lb))
      value = la == lb ? value : kInf;
    else
      value += std::abs(la - lb);
    out["tau_lengths"] = {num(la), num(lb)};
  }
  out["value"] = num(value);
  return out;
}

Json geodesic_shoot(const Json& c) {
  const auto h = open_space(c["space"]);
  const auto& st = smooth(h);
  const auto sol = geodesic_from(st, Json{{"p", c["p"]}, {"v", c["v"]}, {"t_max", c["t_max"]}}, c["nodes"].get<int>());
  write_csv(c, [&](std::ostream& out) { write_curve_csv(out, sol.grid, sol.positions); });
  return {{"endpoint", vec_json(sol.endpoint())},
          {"speed_squared", num(speed_squared(st, sol))},
          {"lg_length", num(lg_length(st, sol))},
          {"truncated", sol.truncated()},
          {"exit_param", num(sol.meta.exit_param)},
          {"closed_form", sol.meta.closed_form},
          {"steps", sol.meta.steps},
          {"norm_drift", num(sol.meta.norm_drift)}};
}

Json geodesic_bvp(const Json& c) {
  const auto h = open_space(c["space"]);
  const auto& st = smooth(h);
  ShootingOptions opts;
  opts.seeds = c["seeds"].get<int>();
  opts.residual_tol = c["residual_tol"].get<double>();
  opts.nodes = c["nodes"].get<int>();
  const Event p = to_vec(c["p"]), q = to_vec(c["q"]);
  const auto sols = solve_bvp(st, p, q, opts);
  Json list = Json::array();
  for (const auto& s : sols)
    list.push_back({{"initial_velocity", vec_json(s.initial_velocity)},
                    {"lg_length", num(lg_length(st, s))},
                    {"endpoint_error", num((s.endpoint() - q).norm())}});
  if (!sols.empty())
    write_csv(c, [&](std::ostream& out) { write_curve_csv(out, sols.front().grid, sols.front().positions); });
  return {{"count", sols.size()}, {"solutions", list}};
}

Json conjugate_jacobi(const Json& c) {
  const auto h = open_space(c["space"]);
  const auto& st = smooth(h);
  const auto sol = geodesic_from(st, c["geodesic"], c["nodes"].get<int>());
  JacobiScanOptions opts;
  opts.samples = c["samples"].get<int>();
  opts.tol = c["tol"].get<double>();
  if (c.contains("t_end")) opts.t_end = c["t_end"].get<double>();
  return {{"parameters", nums(jacobi_scan(st, sol, opts))}};
}

Json conjugate_classify(const Json& c) {
  const auto h = open_space(c["space"]);
  const auto& st = smooth(h);
  const auto sol = geodesic_from(st, c["geodesic"], c["nodes"].get<int>());
  ClassifyConfig cfg;
  cfg.detector = detector_from(c);
  cfg.scheme = scheme_from(c);
  cfg.endpoint_tol = c["endpoint_tol"].get<double>();
  return report_json(st, classify(st, sol, cfg));
}

Json cutlocus(const Json& c) {
  const auto h = open_space(c["space"]);
  const auto& st = smooth(h);
  const Event p = to_vec(c["point"]);
  const auto params = to_doubles(c["params"]);
  CutScanOptions opts;
  opts.rapidities = to_doubles(c["rapidities"]);
  opts.maximizer_tol = c["maximizer_tol"].get<double>();
  opts.workers = c["workers"].get<int>();

  Json out;
  CutScan scan;
  if (c.contains("radii")) {
    const auto inj = injectivity_radii(st, {p}, params, to_doubles(c["radii"]), opts);
    scan = inj.scans.front();
    out["injectivity"] = {{"ini_inj", num(inj.ini_inj_space)},
                          {"unique_inj", num(inj.unique_inj_space)},
                          {"resolution", num(inj.resolution)},
                          {"gap", num(inj.gap)},
                          {"consistent", inj.consistent}};
  } else {
    scan = cut_scan(st, p, params, opts);
  }
  Json dirs = Json::array();
  for (const auto& d : scan.directions)
    dirs.push_back({{"rapidity", num(d.rapidity)},
                    {"initial_cut_param", d.initial_cut_param ? num(*d.initial_cut_param) : Json(nullptr)},
                    {"initial_cut_point", d.initial_cut_point ? vec_json(*d.initial_cut_point) : Json(nullptr)},
                    {"bisected", d.bisected}});
  std::size_t cuts = 0;
  for (const auto& t : scan.targets) cuts += t.cut;
  out["directions"] = dirs;
  out["targets"] = scan.targets.size();
  out["cut_points"] = cuts;
  out["initial_cut_distance"] = num(scan.initial_cut_distance);
  write_csv(c, [&](std::ostream& o) {
    o << "rapidity,param";
    for (int i = 1; i <= st.dim(); ++i) o << ",x" << i;
    o << ",tau,maximizers,cut\n";
    for (const auto& t : scan.targets) {
      o << t.rapidity << ',' << t.param;
      for (Eigen::Index i = 0; i < t.q.size(); ++i) o << ',' << t.q[i];
      o << ',' << t.tau << ',' << t.maximizers << ',' << (t.cut ? 1 : 0) << '\n';
    }
  });
  return out;
}

Json compare_triangle(const Json& c) {
  const double K = c["K"].get<double>();
  const auto sides = to_doubles(c["sides"]);
  if (sides.size() != 3) throw UsageError("schema violation at /sides: expected three side lengths");
  SpaceHandle h = c.contains("space") ? open_space(c["space"]) : make_model_space(K, 2);
  if (!h.model || h.model->dim() != 2)
    throw UsageError("schema violation at /space: triangles are placed in a two-dimensional model space");
  const int samples = c["samples"].get<int>();
  const auto placed = realize_triangle(sides[0], sides[1], sides[2], h.model->curvature());
  const auto tri = make_triangle(h.prelength, placed.x, placed.y, placed.z, samples);
  const auto bar = realize_triangle(tri.side_lengths[0], tri.side_lengths[1], tri.side_lengths[2], K);
  const BoundSense sense = c["sense"] == "below" ? BoundSense::below : BoundSense::above;
  const auto rep = curvature_bound_test(*h.prelength, tri, K, samples, sense, c["tol"].get<double>());

  write_csv(c, [&](std::ostream& o) {
    static const char* names[] = {"xy", "yz", "xz"};
    static const Side ids[] = {Side::xy, Side::yz, Side::xz};
    o << "side,s,x1,x2,bar_x1,bar_x2\n";
    for (int k = 0; k < 3; ++k) {
      const auto& side = tri.sides[k];
      for (int j = 0; j <= samples; ++j) {
        const Event pt = side.at(static_cast<double>(j) / samples);
        const double s = j == samples ? tri.side_lengths[k] : (j == 0 ? 0.0 : h.prelength->time_separation(side.front(), pt));
        const Event pb = comparison_point(bar, ids[k], s);
        o << names[k] << ',' << s << ',' << pt[0] << ',' << pt[1] << ',' << pb[0] << ',' << pb[1] << '\n';
      }
    }
  });
  return {{"side_lengths", nums({tri.side_lengths.begin(), tri.side_lengths.end()})},
          {"triangle", {vec_json(tri.x), vec_json(tri.y), vec_json(tri.z)}},
          {"comparison", {vec_json(bar.x), vec_json(bar.y), vec_json(bar.z)}},
          {"pairs", rep.pairs},
          {"violations", rep.violations},
          {"worst_margin", num(rep.worst_margin)},
          {"passed", rep.passed}};
}

Json compare_rauch(const Json& c) {
  const double K = c["K"].get<double>();
  const auto h = open_model(c);
  RauchOptions opts;
  opts.margin_fraction = c["margin_fraction"].get<double>();
  opts.detector = detector_from(c);
  const auto table = rauch_experiment(*h.spacetime, K, to_doubles(c["lengths"]), opts);
  Json rows = Json::array();
  for (const auto& r : table.rows)
    rows.push_back({{"length", num(r.length)}, {"symmetric", r.symmetric}, {"violation", r.violation}});
  write_csv(c, [&](std::ostream& o) {
    o << "length,symmetric,violation\n";
    for (const auto& r : table.rows) o << r.length << ',' << (r.symmetric ? 1 : 0) << ',' << (r.violation ? 1 : 0) << '\n';
  });
  return {{"diameter", num(table.diameter)}, {"margin", num(table.margin)}, {"rows", rows}, {"ok", table.ok}};
}

Json experiment_cartan_hadamard(const Json& c) {
  const auto h = open_space(c["space"]);
  const auto& st = smooth(h);
  const auto sol = geodesic_from(st, c["geodesic"], c["nodes"].get<int>());
  FamilyGrid grid;
  grid.radius = c["radius"].get<double>();
  grid.per_axis = c["per_axis"].get<int>();
  grid.rings = c["family_rings"].get<int>();
  grid.workers = c["workers"].get<int>();
  ClassifyConfig cfg;
  cfg.detector = detector_from(c);
  cfg.scheme = scheme_from(c);
  const auto r = cartan_hadamard_experiment(st, sol, grid, cfg);
  return {{"family_exists", r.family_exists},
          {"complete", r.complete},
          {"continuous", r.continuous},
          {"unique", r.unique},
          {"reachable", r.reachable},
          {"ultimate", r.ultimate},
          {"max_uniqueness_deviation", num(r.max_uniqueness_deviation)},
          {"missing", r.family.missing},
          {"ring_radius", nums(r.family.ring_radius)},
          {"continuity", nums(r.family.continuity)}};
}

Json experiment_convergence(const Json& c) {
  const auto h = open_space(c["space"]);
  const auto& st = smooth(h);
  const int nodes = c["nodes"].get<int>();
  const auto limit = geodesic_from(st, c["geodesic"], nodes);
  Tangent w = Tangent::Zero(st.dim());
  if (c.contains("direction"))
    w = to_vec(c["direction"]);
  else
    w[1] = 1.0;
  const int members = c["members"].get<int>();
  const double scale = c["scale"].get<double>();
  std::vector<GeodesicSolution> family;
  for (int n = 0; n < members; ++n)
    family.push_back(trace_geodesic(st, limit.initial_point, Tangent(limit.initial_velocity + std::ldexp(scale, -n) * w),
                                    limit.t_max, nodes));
  const auto r = convergence_experiment(st, family, limit, c["threshold"].get<double>(), c["extension"].get<double>());
  return {{"c0", nums(r.c0)},
          {"velocity", nums(r.velocity)},
          {"dgamma", nums(r.dgamma)},
          {"c0_converges", r.c0_converges},
          {"velocity_converges", r.velocity_converges},
          {"dgamma_converges", r.dgamma_converges},
          {"consistent", r.consistent},
          {"limit_is_geodesic", r.limit_is_geodesic}};
}

}  // namespace

int workers_from_env() {
  const char* env = std::getenv("LORENTZ_WORKERS");
  if (env == nullptr || *env == '\0') return default_workers();
  char* end = nullptr;
  const long n = std::strtol(env, &end, 10);
  if (*end != '\0' || n < 1 || n > 4096) throw UsageError("LORENTZ_WORKERS: expected a positive integer");
  return static_cast<int>(n);
}

std::vector<Operation> operations(int workers) {
  const Field geodesic = req("geodesic", FieldType::geodesic, "geodesic {p, v, t_max} (inline JSON or file)");
  const Field nodes = opt("nodes", FieldType::integer, 65, "samples along the geodesic");
  const Field scheme = choice("scheme", {"automatic", "rings", "neighbor"}, "embeddability perturbation scheme");
  std::vector<Operation> ops;

  ops.push_back({"model-tau", {"model", "tau"}, "time separation in the model plane of curvature K",
                 {opt("K", FieldType::number, 0.0, "curvature"), opt("dim", FieldType::integer, 2, "dimension"),
                  req("x", FieldType::event, "first event"), req("y", FieldType::event, "second event"), out_field()},
                 model_tau});
  ops.push_back({"model-diameter", {"model", "diameter"}, "timelike diameter of the model plane",
                 {req("K", FieldType::number, "curvature"), out_field()}, model_diameter});
  ops.push_back({"model-exp", {"model", "exp"}, "closed-form geodesic flow in the model plane",
                 {opt("K", FieldType::number, 0.0, "curvature"), opt("dim", FieldType::integer, 2, "dimension"),
                  req("p", FieldType::event, "start event"), req("v", FieldType::event, "initial velocity"),
                  opt("t", FieldType::number, 1.0, "parameter"), out_field()},
                 model_exp});
  ops.push_back({"curve-tau-length", {"curve", "tau-length"}, "tau-length of a sampled causal curve",
                 {positional("curve", "curve CSV (t, x1..x_dim)"), space_field(), out_field()}, curve_tau_length});
  {
    Field space = space_field();
    space.required = false;
    ops.push_back({"frechet", {"frechet"}, "Frechet distance (or d_Gamma) of two sampled curves",
                   {positional("a", "first curve CSV"), positional("b", "second curve CSV"), space,
                    opt("dgamma", FieldType::boolean, false, "add the tau-length discrepancy"),
                    opt("gap", FieldType::positive, 1e-4, "target certified gap"),
                    opt("max_refinements", FieldType::integer, 10, "grid refinements"), out_field()},
                   frechet});
  }
  ops.push_back({"geodesic-shoot", {"geodesic", "shoot"}, "integrate a geodesic from initial data",
                 {space_field(), req("p", FieldType::event, "start event"),
                  req("v", FieldType::event, "initial velocity"),
                  opt("t_max", FieldType::positive, 1.0, "parameter range"), nodes, csv_field(), out_field()},
                 geodesic_shoot});
  ops.push_back({"geodesic-bvp", {"geodesic", "bvp"}, "connecting geodesics by shooting",
                 {space_field(), req("p", FieldType::event, "start event"), req("q", FieldType::event, "end event"),
                  opt("seeds", FieldType::integer, 8, "perturbed seeds"),
                  opt("residual_tol", FieldType::positive, 1e-8, "endpoint residual tolerance"), nodes, csv_field(),
                  out_field()},
                 geodesic_bvp});
  ops.push_back({"conjugate-jacobi", {"conjugate", "jacobi"}, "conjugate parameters from Jacobi fields",
                 {space_field(), geodesic, nodes, opt("samples", FieldType::integer, 256, "scan samples"),
                  opt("tol", FieldType::positive, 1e-6, "bisection tolerance"),
                  opt("t_end", FieldType::positive, nullptr, "scan end (default: t_max)"), out_field()},
                 conjugate_jacobi});
  ops.push_back({"conjugate-classify", {"conjugate", "classify"}, "classify conjugacy at the endpoint",
                 join({space_field(), geodesic, nodes, scheme,
                       opt("endpoint_tol", FieldType::positive, 1e-4, "relative endpoint tolerance"), out_field()},
                      detector_fields(workers)),
                 conjugate_classify});
  ops.push_back({"cutlocus", {"cutlocus"}, "cut points and initial cut locus from a base point",
                 {space_field(), req("point", FieldType::event, "base point"),
                  req("params", FieldType::numbers, "proper-time grid along each direction"),
                  opt("rapidities", FieldType::numbers, Json::array({-0.5, 0.0, 0.5}), "initial directions"),
                  opt("radii", FieldType::numbers, nullptr, "radius grid for injectivity radii"),
                  opt("maximizer_tol", FieldType::positive, 1e-6, "maximizer tolerance"), workers_field(workers),
                  csv_field(), out_field()},
                 cutlocus});
  ops.push_back({"compare-triangle", {"compare", "triangle"}, "timelike triangle comparison against the model plane",
                 {req("K", FieldType::number, "comparison curvature"),
                  req("sides", FieldType::numbers, "side lengths a,b,c"),
                  opt("space", FieldType::space, nullptr, "model space holding the triangle (default: the K plane)"),
                  choice("sense", {"above", "below"}, "curvature bound direction"),
                  opt("samples", FieldType::integer, 8, "samples per side"),
                  opt("tol", FieldType::positive, 1e-9, "comparison tolerance"), csv_field(), out_field()},
                 compare_triangle});
  ops.push_back({"compare-rauch", {"compare", "rauch"}, "symmetric conjugacy along model geodesics of given lengths",
                 join({req("K", FieldType::number, "curvature"), opt("dim", FieldType::integer, 2, "dimension"),
                       req("lengths", FieldType::numbers, "geodesic lengths"),
                       opt("margin_fraction", FieldType::positive, 0.05, "margin as a fraction of the diameter"),
                       csv_field(), out_field()},
                      detector_fields(workers)),
                 compare_rauch});
  ops.push_back({"experiment-cartan-hadamard", {"experiment", "cartan-hadamard"},
                 "family existence, uniqueness and conjugacy about a geodesic",
                 join({space_field(), geodesic, nodes, scheme,
                       opt("radius", FieldType::positive, 0.1, "family grid radius"),
                       opt("per_axis", FieldType::integer, 5, "family grid points per axis"),
                       opt("family_rings", FieldType::integer, 4, "family continuity rings"), out_field()},
                      detector_fields(workers)),
                 experiment_cartan_hadamard});
  ops.push_back({"experiment-convergence", {"experiment", "convergence"},
                 "C0, initial-velocity and d_Gamma convergence of a geodesic family",
                 {space_field(), geodesic, nodes, opt("members", FieldType::integer, 8, "family size"),
                  opt("scale", FieldType::positive, 0.1, "initial velocity perturbation, halved per member"),
                  opt("direction", FieldType::event, nullptr, "perturbation direction (default: first spatial axis)"),
                  opt("threshold", FieldType::positive, 1e-3, "convergence threshold"),
                  opt("extension", FieldType::nonnegative, 0.1, "relative extension of the parameter domain"),
                  out_field()},
                 experiment_convergence});
  return ops;
}

}  // namespace lorentz::cli
