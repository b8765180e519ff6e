#pragma once

// Command-line front end.  run_cli() is the whole program; main() only
// forwards argv.  Exit codes: 0 ok, 1 usage, 2 I/O or malformed input file,
// 3 internal invariant violation.

#include "coherent/coherent.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace coherent::cli {

using nlohmann::json;

enum ExitCode { kOk = 0, kUsage = 1, kIo = 2, kInternal = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string config;
  std::string out;
  std::string mode = "exact";
  unsigned threads = 1;

  // check
  std::string law_path;
  bool float_basis = false;

  // grids
  std::vector<std::string> grid{"uniform", "11"};
  std::vector<std::string> x_values, y_values;
  bool augment = false;

  // optimize
  std::string target = "gap";
  std::string delta, p, r;

  // sweep
  std::vector<std::string> deltas;
  std::string csv, json_out;

  // daisy
  long n = 2;
  bool attaining = false;

  // polygon
  std::vector<std::string> rect;
  std::size_t sweep = 0;
  std::uint64_t seed = 1;
  long resolution = 20;
  bool central = false;

  // conjecture
  std::vector<std::size_t> budget{2, 2};
  std::size_t restarts = 100;
  std::vector<std::size_t> probe;
  std::size_t trials = 50;
  std::string artifacts;

  // bound
  std::string bound_id;
  std::vector<std::string> bound_args;
  bool list = false;
};

namespace detail {

inline std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline Rational rational_arg(const std::string& text, const char* what) {
  try {
    return parse_rational(text);
  } catch (const std::exception& e) {
    throw UsageError(std::string(what) + ": " + e.what());
  }
}

inline std::vector<std::string> split_list(const std::vector<std::string>& tokens) {
  std::vector<std::string> out;
  for (const auto& t : tokens) {
    std::stringstream ss(t);
    std::string item;
    while (std::getline(ss, item, ',')) {
      std::stringstream ws(item);
      std::string w;
      while (ws >> w) out.push_back(w);
    }
  }
  return out;
}

/// "a..b step s" (inclusive) or a comma/space separated list.
inline std::vector<Rational> parse_deltas(const std::vector<std::string>& tokens) {
  auto words = split_list(tokens);
  if (words.empty()) throw UsageError("--deltas: empty list");
  if (words[0].find("..") != std::string::npos) {
    const auto dots = words[0].find("..");
    const Rational lo = rational_arg(words[0].substr(0, dots), "--deltas");
    const Rational hi = rational_arg(words[0].substr(dots + 2), "--deltas");
    if (words.size() != 3 || words[1] != "step") throw UsageError("--deltas: expected 'a..b step s'");
    const Rational step = rational_arg(words[2], "--deltas step");
    if (step.sign() <= 0) throw UsageError("--deltas: step must be positive");
    std::vector<Rational> out;
    for (Rational d = lo; d <= hi; d += step) out.push_back(d);
    return out;
  }
  std::vector<Rational> out;
  for (const auto& w : words) out.push_back(rational_arg(w, "--deltas"));
  return out;
}

inline std::vector<Rational> axis_values(const std::vector<std::string>& spec, const char* what) {
  if (spec.empty()) throw UsageError(std::string(what) + ": empty grid spec");
  if (spec[0] == "uniform") {
    if (spec.size() != 2) throw UsageError(std::string(what) + ": expected 'uniform N'");
    long count = 0;
    try {
      count = std::stol(spec[1]);
    } catch (const std::exception&) {
      throw UsageError(std::string(what) + ": bad point count '" + spec[1] + "'");
    }
    if (count < 2 || count > 200) throw UsageError(std::string(what) + ": point count must lie in [2,200]");
    return uniform_values(count);
  }
  std::vector<std::string> rest(spec.begin() + (spec[0] == "list" ? 1 : 0), spec.end());
  std::vector<Rational> out;
  for (const auto& w : split_list(rest)) out.push_back(rational_arg(w, what));
  if (out.empty()) throw UsageError(std::string(what) + ": empty value list");
  return out;
}

inline Grid build_grid(const Options& o, const std::optional<Rational>& augment_delta) {
  auto xs = o.x_values.empty() ? axis_values(o.grid, "--grid") : axis_values(o.x_values, "--x-values");
  auto ys = o.y_values.empty() ? axis_values(o.grid, "--grid") : axis_values(o.y_values, "--y-values");
  Grid g;
  try {
    g = Grid::make(std::move(xs), std::move(ys));
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return augment_delta ? augment_attaining(g, *augment_delta) : g;
}

inline SolveMode solve_mode(const Options& o) {
  return o.mode == "float" ? SolveMode::FloatCertified : SolveMode::Exact;
}

inline void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw IoError("write to '" + path + "' failed");
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

inline DiscreteJointLaw load_law(const std::string& path, std::istream& in) {
  std::string text;
  if (path == "-") {
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  } else {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot read '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    text = ss.str();
  }
  try {
    return law_from_json(json::parse(text));
  } catch (const std::exception& e) {
    throw IoError("malformed law file '" + path + "': " + e.what());
  }
}

inline json grid_json(const Grid& g) {
  return {{"x_values", rationals_to_json(g.x_values)}, {"y_values", rationals_to_json(g.y_values)}};
}

inline json result_json(const ExtremalResult& r) {
  json j;
  j["exact"] = r.exact;
  j["value"] = r.exact ? json(r.value.to_string()) : json(nullptr);
  j["value_float"] = r.exact ? r.value.to_double() : r.value_float;
  j["law"] = law_to_json(r.law);
  j["witness"] = witness_to_json(r.law, r.witness);
  return j;
}

inline json marginal_json(const MarginalLaw& m) {
  json atoms = json::array();
  for (const auto& [v, w] : m.atoms) atoms.push_back({{"value", v.to_string()}, {"weight", w.to_string()}});
  return atoms;
}

// ---------------------------------------------------------------------------
// Subcommands.

inline int cmd_check(const Options& o, std::istream& in, std::ostream& out) {
  const auto law = load_law(o.law_path, in);
  const auto v = check_coherence(law, o.float_basis);
  const auto rep = verify_verdict(law, v);
  if (!rep.ok) throw InvariantViolation("verdict failed verification: " + rep.reason);
  json j;
  j["verdict"] = to_string(v.status);
  j["law"] = law_to_json(law);
  j["means"] = rationals_to_json(means(law));
  if (v.coherent()) {
    j["witness"] = witness_to_json(law, v.witness);
  } else {
    j["farkas"] = rationals_to_json(v.farkas);
    if (v.quick)
      j["quick_certificate"] = {{"a", v.quick->a.to_string()}, {"b", v.quick->b.to_string()}, {"swapped", v.quick->swapped}};
    else
      j["quick_certificate"] = nullptr;
  }
  j["verified"] = true;
  emit(dump(j), o.out, out);
  return kOk;
}

inline TargetFunction build_target(const Options& o) {
  if (o.target == "gap") {
    if (o.delta.empty()) throw UsageError("--target gap needs --delta");
    return TargetFunction::gap_indicator(rational_arg(o.delta, "--delta"));
  }
  if (o.target == "max") return TargetFunction::max_xy();
  if (o.target == "product") return TargetFunction::product_xy();
  if (o.target == "abs") {
    if (o.r.empty()) return TargetFunction::abs_diff_pow(1);
    const Rational r = rational_arg(o.r, "--r");
    if (r.sign() <= 0) throw UsageError("--r must be positive");
    if (r.is_integer()) return TargetFunction::abs_diff_pow(r.numerator().get_si());
    return TargetFunction::abs_diff_pow_real(r.to_double());
  }
  throw UsageError("unknown target '" + o.target + "'");
}

inline int cmd_optimize(const Options& o, std::ostream& out) {
  const auto t = build_target(o);
  std::optional<Rational> delta;
  if (!o.delta.empty()) delta = rational_arg(o.delta, "--delta");
  if (o.augment && !delta) throw UsageError("--augment-attaining needs --delta");
  std::optional<Rational> p;
  if (!o.p.empty()) p = rational_arg(o.p, "--p");
  if (p && (p->sign() < 0 || *p > Rational(1))) throw UsageError("--p must lie in [0,1]");
  const Grid g = build_grid(o, o.augment ? delta : std::nullopt);
  std::optional<ExtremalResult> r;
  try {
    r = optimize_target(g, t, p, solve_mode(o));
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  json j;
  j["command"] = "optimize";
  j["target"] = t.name();
  j["mode"] = o.mode;
  j["mean_constraint"] = p ? json(p->to_string()) : json(nullptr);
  j["grid"] = grid_json(g);
  if (!r) {
    j["status"] = "Infeasible";
  } else {
    j["status"] = "Optimal";
    j["result"] = result_json(*r);
    if (t.kind == TargetKind::GapIndicator && p) j["interpretation"] = "grid lower bound on eps(delta,p)";
  }
  emit(dump(j), o.out, out);
  return kOk;
}

inline int cmd_sweep(const Options& o, std::ostream& out) {
  if (o.deltas.empty()) throw UsageError("sweep needs --deltas");
  const auto deltas = parse_deltas(o.deltas);
  for (const auto& d : deltas)
    if (d.sign() < 0 || d > Rational(1)) throw UsageError("--deltas: values must lie in [0,1]");
  // Validate the grid spec once before dispatching work.
  build_grid(o, std::nullopt);
  auto grid_for = [&](const Rational& d) { return build_grid(o, o.augment ? std::optional<Rational>(d) : std::nullopt); };
  const auto rows = eps_sweep(deltas, grid_for, solve_mode(o), std::max(1U, o.threads));

  std::ostringstream csv;
  csv << "delta,value,value_float,lower,upper,lower_applicable,within_bounds,exceeds_lower\n";
  json jrows = json::array();
  bool sandwich_ok = true;
  for (const auto& r : rows) {
    const bool exceeds = r.result && r.lower_applicable && r.delta < Rational(1, 2) && r.result->value > r.lower;
    if (r.lower_applicable && !r.within_bounds()) sandwich_ok = false;
    if (r.result && r.result->value > r.upper) sandwich_ok = false;
    const std::string value = r.result ? r.result->value.to_string() : "infeasible";
    const std::string vf = r.result ? fmt_double(r.result->value_float) : "";
    csv << r.delta.to_string() << ',' << value << ',' << vf << ',' << r.lower.to_string() << ','
        << r.upper.to_string() << ',' << (r.lower_applicable ? 1 : 0) << ',' << (r.within_bounds() ? 1 : 0) << ','
        << (exceeds ? 1 : 0) << '\n';
    json row{{"delta", r.delta.to_string()},
             {"value", r.result ? json(value) : json(nullptr)},
             {"value_float", r.result ? json(r.result->value_float) : json(nullptr)},
             {"lower", r.lower.to_string()},
             {"upper", r.upper.to_string()},
             {"lower_applicable", r.lower_applicable},
             {"within_bounds", r.within_bounds()},
             {"exceeds_lower", exceeds}};
    if (r.result) row["law"] = law_to_json(r.result->law);
    jrows.push_back(std::move(row));
  }
  json j;
  j["command"] = "sweep";
  j["config"] = {{"deltas", o.deltas}, {"grid", o.grid}, {"x_values", o.x_values}, {"y_values", o.y_values},
                 {"augment_attaining", o.augment}, {"mode", o.mode}};
  j["bounds"] = {{"lower", name_of(bounds::BoundId::Eps2x2)}, {"upper", name_of(bounds::BoundId::Upper2Delta)}};
  j["rows"] = std::move(jrows);
  if (!o.json_out.empty()) emit(dump(j), o.json_out, out);
  if (!o.csv.empty()) emit(csv.str(), o.csv, out);
  if (o.json_out.empty() && o.csv.empty()) out << csv.str();
  if (!sandwich_ok) throw InvariantViolation("sweep: a row falls outside the proven bounds");
  return kOk;
}

inline int cmd_daisy(const Options& o, std::ostream& out) {
  if (o.n < 1 || o.n > 12) throw UsageError("--n must lie in [1,12]");
  if (o.p.empty()) throw UsageError("daisy needs --p");
  const Rational p = rational_arg(o.p, "--p");
  if (p.sign() < 0 || p > Rational(1)) throw UsageError("--p must lie in [0,1]");
  if (o.attaining && o.n < 2) throw UsageError("--attaining needs --n >= 2");
  const auto law = o.attaining ? dp80_attaining(o.n, p) : daisy(o.n, p);
  const auto v = check_coherence(law);
  if (!verify_verdict(law, v).ok) throw InvariantViolation("daisy: verdict failed verification");
  const Rational emax = expectation(law, [](const Point& x) { return *std::max_element(x.begin(), x.end()); });
  json j;
  j["command"] = "daisy";
  j["n"] = o.n;
  j["p"] = p.to_string();
  j["construction"] = o.attaining ? "daisy_plus_center_indicator" : "daisy";
  j["law"] = law_to_json(law);
  j["coherent"] = v.coherent();
  j["means"] = rationals_to_json(means(law));
  j["level"] = daisy_level(o.attaining ? o.n - 1 : o.n, p).to_string();
  j["expected_max"] = emax.to_string();
  j["dp80_max"] = bounds::dp80_max(o.n, p).to_string();
  emit(dump(j), o.out, out);
  return kOk;
}

inline json polygon_json(const Rect& r, const PolygonResult& poly) {
  json j;
  j["rect"] = rationals_to_json({r.x1, r.x2, r.y1, r.y2});
  j["status"] = to_string(poly.status);
  if (poly.degenerate_law) j["degenerate_law"] = law_to_json(*poly.degenerate_law);
  j["affine_coordinates"] = "(P(x2,y1), P(x2,y2))";
  json verts = json::array();
  for (std::size_t i = 0; i < poly.vertices.size(); ++i)
    verts.push_back({{"coords", rationals_to_json({poly.coords[i].first, poly.coords[i].second})},
                     {"law", law_to_json(poly.vertices[i])}});
  j["vertices"] = std::move(verts);
  j["vertex_count"] = poly.vertex_count();
  return j;
}

inline int cmd_polygon(const Options& o, std::ostream& out) {
  if (!o.rect.empty()) {
    if (o.rect.size() != 4) throw UsageError("--rect needs x1 x2 y1 y2");
    Rect r;
    try {
      r = Rect::make(rational_arg(o.rect[0], "--rect"), rational_arg(o.rect[1], "--rect"),
                     rational_arg(o.rect[2], "--rect"), rational_arg(o.rect[3], "--rect"));
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    if (rect_feasibility(r).status == RectStatus::Nonempty && !r.non_degenerate())
      throw UsageError("--rect: a nonempty rectangle needs x1 < x2 and y1 < y2");
    const auto poly = enumerate_vertices(r);
    if (!vertices_are_extreme(r, poly)) throw InvariantViolation("polygon: a vertex is not extreme");
    emit(dump(polygon_json(r, poly)), o.out, out);
    return kOk;
  }
  if (o.sweep == 0 && !o.central) throw UsageError("polygon needs --rect, --sweep N or --central");
  if (o.resolution < 2 || o.resolution > 1000) throw UsageError("--resolution must lie in [2,1000]");
  auto rects = random_rectangles(o.sweep, o.seed, o.resolution);
  if (o.central) {
    const auto c = central_rectangles();
    rects.insert(rects.end(), c.begin(), c.end());
  }
  std::vector<std::size_t> counts(rects.size());
  parallel_for(rects.size(), std::max(1U, o.threads), [&](std::size_t i) {
    counts[i] = enumerate_vertices(rects[i]).vertex_count();
  });
  std::map<std::size_t, std::size_t> hist;
  json list = json::array();
  for (std::size_t i = 0; i < rects.size(); ++i) {
    ++hist[counts[i]];
    list.push_back({{"rect", rationals_to_json({rects[i].x1, rects[i].x2, rects[i].y1, rects[i].y2})},
                    {"vertex_count", counts[i]}});
  }
  json h = json::object();
  for (const auto& [k, v] : hist) h[std::to_string(k)] = v;
  const std::size_t max_count = hist.empty() ? 0 : hist.rbegin()->first;
  const bool in_range = hist.empty() || (hist.begin()->first >= 2 && max_count <= 8);
  json j;
  j["command"] = "polygon";
  j["config"] = {{"sweep", o.sweep}, {"seed", o.seed}, {"resolution", o.resolution}, {"central", o.central}};
  j["histogram"] = std::move(h);
  j["max_vertex_count"] = max_count;
  j["all_counts_in_range"] = in_range;
  j["rectangles"] = std::move(list);
  emit(dump(j), o.out, out);
  if (!in_range) throw InvariantViolation("polygon: vertex count outside [2,8]");
  return kOk;
}

inline int cmd_conjecture(const Options& o, std::ostream& out) {
  json j;
  j["command"] = "conjecture";
  if (!o.probe.empty()) {
    if (o.probe.size() != 2 || o.probe[0] < 1 || o.probe[1] < 1) throw UsageError("--probe needs M N >= 1");
    const auto rep = conjecture_probe(o.probe[0], o.probe[1], o.trials, o.seed, 12, std::max(1U, o.threads));
    j["mode"] = "extreme_law_probe";
    j["config"] = {{"probe", o.probe}, {"trials", o.trials}, {"seed", o.seed}};
    j["feasible"] = rep.rows.size();
    j["infeasible"] = rep.infeasible;
    j["not_attained_by_2x2"] = rep.not_attained;
    json rows = json::array();
    for (const auto& r : rep.rows)
      if (!r.attained_by_2x2())
        rows.push_back({{"grid", grid_json(r.grid)}, {"full_value", r.full_value.to_string()},
                        {"best_2x2_value", r.best_2x2_value.to_string()}, {"law", law_to_json(r.full_law)}});
    j["unattained_instances"] = std::move(rows);
    emit(dump(j), o.out, out);
    return kOk;
  }
  if (o.delta.empty()) throw UsageError("conjecture needs --delta (or --probe M N)");
  const Rational d = rational_arg(o.delta, "--delta");
  if (d.sign() <= 0 || d >= Rational(1, 2)) throw UsageError("--delta must lie in (0,1/2)");
  if (o.budget.size() != 2 || o.budget[0] < 1 || o.budget[1] < 1) throw UsageError("--budget needs M N >= 1");
  if (o.restarts < 1) throw UsageError("--restarts must be >= 1");
  const auto r = independent_search(d, {o.budget[0], o.budget[1]}, o.restarts, o.seed, o.resolution);
  j["mode"] = "independent_search";
  j["config"] = {{"delta", d.to_string()}, {"budget", o.budget}, {"restarts", o.restarts}, {"seed", o.seed},
                 {"resolution", o.resolution}};
  j["best_value"] = r.best_value.to_string();
  j["best_value_float"] = r.best_value.to_double();
  j["seeded_value"] = r.seeded_value.to_string();
  j["bound"] = r.conjecture_bound.to_string();
  j["bound_id"] = name_of(bounds::BoundId::ConjIndependent);
  j["margin"] = r.margin.to_string();
  j["exceeds_bound"] = r.exceeds_bound();
  j["best_x"] = marginal_json(r.best_x);
  j["best_y"] = marginal_json(r.best_y);
  j["restarts_run"] = r.restarts_run;
  j["restarts_feasible"] = r.restarts_feasible;
  if (r.exceeds_bound() && !o.artifacts.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(o.artifacts, ec);
    const auto path = (std::filesystem::path(o.artifacts) /
                       ("counterexample_delta_" + std::to_string(d.numerator().get_si()) + "_" +
                        std::to_string(d.denominator().get_si()) + ".json"))
                          .string();
    json cx{{"delta", d.to_string()}, {"value", r.best_value.to_string()}, {"bound", r.conjecture_bound.to_string()},
            {"law", law_to_json(product_law(r.best_x, r.best_y))}};
    emit(dump(cx), path, out);
    j["counterexample_artifact"] = path;
  }
  emit(dump(j), o.out, out);
  return kOk;
}

inline int cmd_bound(const Options& o, std::ostream& out) {
  if (o.list) {
    for (const auto& b : bounds::kBounds) out << b.name << ' ' << b.args << '\n';
    return kOk;
  }
  if (o.bound_id.empty()) throw UsageError("bound needs an id (see 'bound --list')");
  const auto id = bounds::parse_bound_id(o.bound_id);
  if (!id) throw UsageError("unknown bound '" + o.bound_id + "'");
  std::vector<Rational> args;
  for (const auto& a : o.bound_args) args.push_back(rational_arg(a, "bound argument"));
  Rational v;
  try {
    v = bounds::evaluate(*id, args);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  } catch (const std::domain_error& e) {
    throw UsageError(e.what());
  }
  std::string joined;
  for (std::size_t i = 0; i < args.size(); ++i) joined += (i ? ", " : "") + args[i].to_short_string();
  out << o.bound_id << '(' << joined << ") = " << v.to_short_string() << " ~ " << fmt_double(v.to_double()) << '\n';
  return kOk;
}

// ---------------------------------------------------------------------------
// Parser.

inline void add_grid_options(CLI::App* sub, Options& o) {
  sub->add_option("--grid", o.grid, "grid for both axes: 'uniform N' or 'list v1 v2 ...'")->expected(1, -1);
  sub->add_option("--x-values", o.x_values, "X grid override, same syntax as --grid")->expected(1, -1);
  sub->add_option("--y-values", o.y_values, "Y grid override, same syntax as --grid")->expected(1, -1);
  sub->add_flag("--augment-attaining", o.augment, "add {0, delta, 1-delta, 1} to both axes");
  sub->add_option("--mode", o.mode, "exact | float (float-located basis, exact certificate)")
      ->check(CLI::IsMember({"exact", "float"}));
}

inline std::unique_ptr<CLI::App> build_app(Options& o) {
  auto app = std::make_unique<CLI::App>("Exact computations with coherent opinion laws", "coherent_cli");
  app->require_subcommand(1);

  auto* check = app->add_subcommand("check", "decide coherence of a law given in JSON");
  check->add_option("law", o.law_path, "law JSON file, or - for stdin")->required();
  check->add_flag("--float-basis", o.float_basis, "locate the LP basis in floating point first");

  auto* opt = app->add_subcommand("optimize", "sup E t(X,Y) over coherent laws on a grid");
  opt->add_option("--target", o.target, "gap | max | abs | product")->check(CLI::IsMember({"gap", "max", "abs", "product"}));
  opt->add_option("--delta", o.delta, "delta for the gap target");
  opt->add_option("--p", o.p, "mean constraint E X = E Y = p");
  opt->add_option("--r", o.r, "exponent for the abs target (non-integer runs in float)");
  add_grid_options(opt, o);

  auto* sweep = app->add_subcommand("sweep", "grid suprema of P(|X-Y| >= 1-delta) over a delta list");
  sweep->add_option("--deltas", o.deltas, "'a..b step s' or a list")->expected(1, -1);
  sweep->add_option("--csv", o.csv, "CSV output path");
  sweep->add_option("--json", o.json_out, "JSON output path");
  sweep->add_option("--threads", o.threads, "worker threads")->check(CLI::Range(1U, 256U));
  add_grid_options(sweep, o);

  auto* daisy_cmd = app->add_subcommand("daisy", "daisy law and its properties");
  daisy_cmd->add_option("--n", o.n, "number of petals (coordinates)");
  daisy_cmd->add_option("--p", o.p, "center mass p")->required();
  daisy_cmd->add_flag("--attaining", o.attaining, "n-1 petal coordinates plus the center indicator");

  auto* poly = app->add_subcommand("polygon", "extreme coherent laws on rectangle corners");
  poly->add_option("--rect", o.rect, "x1 x2 y1 y2")->expected(4);
  poly->add_option("--sweep", o.sweep, "number of seeded random rectangles");
  poly->add_option("--seed", o.seed, "random seed");
  poly->add_option("--resolution", o.resolution, "lattice denominator for random rectangles");
  poly->add_flag("--central", o.central, "include the central rectangle family");
  poly->add_option("--threads", o.threads, "worker threads")->check(CLI::Range(1U, 256U));

  auto* conj = app->add_subcommand("conjecture", "search independent coherent pairs, or probe extreme laws");
  conj->add_option("--delta", o.delta, "delta in (0,1/2)");
  conj->add_option("--budget", o.budget, "support sizes M N")->expected(2);
  conj->add_option("--restarts", o.restarts, "number of restarts");
  conj->add_option("--seed", o.seed, "random seed");
  conj->add_option("--resolution", o.resolution, "support lattice denominator");
  conj->add_option("--probe", o.probe, "grid size M N for the extreme-law probe")->expected(2);
  conj->add_option("--trials", o.trials, "probe trials");
  conj->add_option("--artifacts", o.artifacts, "directory for counterexample files");
  conj->add_option("--threads", o.threads, "worker threads")->check(CLI::Range(1U, 256U));

  auto* bound = app->add_subcommand("bound", "evaluate a closed-form bound");
  bound->add_option("id", o.bound_id, "bound id");
  bound->add_option("args", o.bound_args, "arguments");
  bound->add_flag("--list", o.list, "list bound ids and their arguments");

  for (auto* sub : {check, opt, sweep, daisy_cmd, poly, conj, bound}) {
    sub->add_option("--config", o.config, "JSON file with option values (flags win)");
    if (sub != sweep) sub->add_option("--out", o.out, "output path (default stdout)");
  }
  return app;
}

/// Tokens for config keys whose options were not given on the command line.
inline std::vector<std::string> config_tokens(CLI::App* sub, const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot read config '" + path + "'");
  json cfg;
  try {
    cfg = json::parse(f);
  } catch (const std::exception& e) {
    throw IoError("malformed config '" + path + "': " + e.what());
  }
  if (!cfg.is_object()) throw IoError("config '" + path + "' must be a JSON object");
  std::vector<std::string> tokens;
  for (const auto& [key, value] : cfg.items()) {
    if (key == "config") throw UsageError("config may not name another config");
    auto* opt = sub->get_option_no_throw("--" + key);
    if (!opt) throw UsageError("config key '" + key + "' is not an option of '" + sub->get_name() + "'");
    if (opt->count() > 0) continue;
    auto scalar = [&](const json& v) -> std::string {
      if (v.is_string()) return v.get<std::string>();
      if (v.is_number_integer()) return std::to_string(v.get<long long>());
      if (v.is_number_unsigned()) return std::to_string(v.get<unsigned long long>());
      throw UsageError("config key '" + key + "': use strings or integers for values");
    };
    if (value.is_boolean()) {
      if (value.get<bool>()) tokens.push_back("--" + key);
      continue;
    }
    tokens.push_back("--" + key);
    if (value.is_array()) {
      for (const auto& v : value) tokens.push_back(scalar(v));
    } else {
      tokens.push_back(scalar(value));
    }
  }
  return tokens;
}

inline int dispatch(const std::string& name, const Options& o, std::istream& in, std::ostream& out) {
  if (name == "check") return cmd_check(o, in, out);
  if (name == "optimize") return cmd_optimize(o, out);
  if (name == "sweep") return cmd_sweep(o, out);
  if (name == "daisy") return cmd_daisy(o, out);
  if (name == "polygon") return cmd_polygon(o, out);
  if (name == "conjecture") return cmd_conjecture(o, out);
  if (name == "bound") return cmd_bound(o, out);
  throw UsageError("unknown command '" + name + "'");
}

inline void parse_into(CLI::App& app, std::vector<std::string> args) {
  std::reverse(args.begin(), args.end());
  app.parse(args);
}

}  // namespace detail

/// args excludes the program name.
inline int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  Options o;
  auto app = detail::build_app(o);
  try {
    detail::parse_into(*app, args);
    CLI::App* sub = app->get_subcommands().front();
    if (!o.config.empty()) {
      auto extended = args;
      const auto extra = detail::config_tokens(sub, o.config);
      extended.insert(extended.end(), extra.begin(), extra.end());
      o = Options{};
      app = detail::build_app(o);
      detail::parse_into(*app, extended);
      sub = app->get_subcommands().front();
    }
    return detail::dispatch(sub->get_name(), o, in, out);
  } catch (const CLI::ParseError& e) {
    const int code = app->exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return kIo;
  } catch (const InvariantViolation& e) {
    err << "internal invariant violation: " << e.what() << '\n';
    return kInternal;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternal;
  }
}

}  // namespace coherent::cli
