#include "CLI11.hpp"

#include "pwc/billiard.hpp"
#include "pwc/census.hpp"
#include "pwc/chains.hpp"
#include "pwc/conjugacy.hpp"
#include "pwc/fuzz.hpp"
#include "pwc/gapflow.hpp"
#include "pwc/json_io.hpp"
#include "pwc/svg.hpp"

#include <cstdlib>
#include <iostream>

namespace {

using namespace pwc;

int exit_code_for(const PwcError& e) {
  switch (e.code()) {
    case Errc::resolution_exceeded:
    case Errc::arithmetic_budget_exceeded:
    case Errc::budget_exceeded:
    case Errc::beta_hit_not_found:
    case Errc::layer_hit_breakpoint:
      return 4;  // inconclusive at the chosen depth/budget
    default:
      return 2;
  }
}

Rational parse_flag_rational(const std::string& text, const std::string& flag) {
  auto parsed = parse_rational(text);
  if (!parsed)
    throw PwcError(Errc::precondition_failed, flag + ": malformed rational '" + text + "'");
  return *parsed;
}

Json json_classification(const Classification& c) {
  Json node;
  node["kind"] = c.kind == OrbitKind::regular ? "regular" : "degenerate";
  node["shortcut"] = c.shortcut;
  if (c.witness_seed) node["witness_seed"] = side_name(*c.witness_seed);
  if (c.blocking_step) node["blocking_step"] = *c.blocking_step;
  return node;
}

Json json_orbit(const PeriodicOrbitRecord& o) {
  Json node;
  node["period"] = o.period;
  node["kind"] = o.kind == OrbitKind::regular ? "regular" : "degenerate";
  node["externality"] = o.externality == Externality::external ? "external" : "internal";
  Json points = Json::array();
  for (const auto& p : o.points) points.push_back(to_fraction_string(p));
  node["points"] = std::move(points);
  node["word"] = o.word;
  node["classification"] = json_classification(o.classification);
  return node;
}

Json json_enclosure(const Enclosure& e) {
  Json node;
  node["lo"] = to_fraction_string(e.lo);
  node["hi"] = to_fraction_string(e.hi);
  return node;
}

struct Pipeline {
  std::vector<PeriodicOrbitRecord> orbits;
  std::vector<PeriodicOrbitRecord> degenerates;
  std::vector<TrappingRegion> regions;
  GapAtlas atlas;
  std::vector<CaptureRecord> captures;
  Decomposition dec;
};

Pipeline run_pipeline(const PiecewiseAffineContraction& map, std::size_t max_period,
                      std::size_t depth) {
  Pipeline out;
  out.orbits = enumerate_periodic_orbits(map, max_period);
  for (const auto& orbit : out.orbits) {
    if (orbit.kind == OrbitKind::regular)
      out.regions.push_back(trapping_region(map, orbit));
    else
      out.degenerates.push_back(orbit);
  }
  out.atlas = propagate(map, compute_F(map), depth);
  out.captures = target_times(map, out.atlas, out.regions);
  std::vector<StableManifoldRecord> ws;
  for (std::size_t i = 0; i < out.regions.size(); ++i)
    ws.push_back(stable_manifold_interior(map, out.atlas, out.regions[i], out.captures, i));
  out.dec = decompose_and_beta(map, std::move(ws), out.degenerates);
  return out;
}

struct Options {
  std::string spec_path;
  std::string out_dir = ".";
  std::size_t max_period = 24;
  std::size_t depth = 60;
  std::uint64_t seed = 7;
  std::string tol = "1/100000";
  // subcommand-specific
  std::size_t fuzz_n = 3;
  std::size_t fuzz_count = 500;
  std::size_t s_max = 5;
  std::size_t alphabet_max = 7;
  std::string kind = "graph";
  std::string x0 = "9/10";
  std::size_t steps = 40;
  std::size_t samples = 8;
};

std::string out_path(const Options& opt, const std::string& file) {
  return opt.out_dir + "/" + file;
}

std::pair<MapSpec, PiecewiseAffineContraction> load_validated_map(const Options& opt) {
  MapSpec spec = parse_map_spec(read_file(opt.spec_path));
  PiecewiseAffineContraction map = spec.build();
  auto report = map.validate();
  if (!report.ok())
    throw PwcError(Errc::precondition_failed,
                   opt.spec_path + ": " + violation_name(report.violations.front().first) + ": " +
                       report.violations.front().second);
  return {std::move(spec), std::move(map)};
}

int cmd_validate(const Options& opt) {
  MapSpec spec = parse_map_spec(read_file(opt.spec_path));
  auto report = spec.build().validate();
  Json doc;
  doc["name"] = spec.name;
  doc["ok"] = report.ok();
  doc["kappa"] = to_fraction_string(report.kappa);
  Json violations = Json::array();
  for (const auto& [kind, detail] : report.violations) {
    Json v;
    v["kind"] = violation_name(kind);
    v["detail"] = detail;
    violations.push_back(std::move(v));
  }
  doc["violations"] = std::move(violations);
  write_file(out_path(opt, "validate.json"), doc.dump(2) + "\n");
  if (!report.ok()) {
    std::cerr << violation_name(report.violations.front().first) << ": "
              << report.violations.front().second << "\n";
    return 2;
  }
  return 0;
}

int cmd_census(const Options& opt) {
  auto [spec, map] = load_validated_map(opt);
  auto verdict = census_verdict(map, {.max_period = opt.max_period});
  Json doc;
  doc["name"] = spec.name;
  doc["pieces"] = verdict.piece_count;
  doc["regular"] = verdict.regular_count;
  doc["degenerate"] = verdict.degenerate_count;
  doc["bound_ok"] = verdict.bound_ok;
  doc["tight"] = verdict.tight;
  if (verdict.evidence) {
    doc["evidence"]["seeds"] = verdict.evidence->seeds;
    doc["evidence"]["converged"] = verdict.evidence->converged;
  }
  Json orbits = Json::array();
  for (const auto& o : verdict.orbits) orbits.push_back(json_orbit(o));
  doc["orbits"] = std::move(orbits);
  Json trapping = Json::array();
  for (const auto& o : verdict.orbits) {
    if (o.kind != OrbitKind::regular) continue;
    auto region = trapping_region(map, o);
    Json node;
    node["orbit"] = to_fraction_string(o.least_point());
    Json comps = Json::array();
    for (const auto& c : region.components) {
      Json comp;
      comp["point"] = to_fraction_string(c.owner);
      comp["interval"] = json_interval(c.interval);
      comp["used_merged_cell"] = c.used_merged_cell;
      comps.push_back(std::move(comp));
    }
    node["components"] = std::move(comps);
    trapping.push_back(std::move(node));
  }
  doc["trapping_regions"] = std::move(trapping);
  write_file(out_path(opt, "census.json"), doc.dump(2) + "\n");
  return 0;
}

int cmd_gaps(const Options& opt) {
  auto [spec, map] = load_validated_map(opt);
  auto atlas = propagate(map, compute_F(map), opt.depth);
  Json doc;
  doc["name"] = spec.name;
  doc["E"] = json_interval_list(atlas.E);
  Json b = Json::array();
  for (const auto& x : atlas.B) b.push_back(to_fraction_string(x));
  doc["B"] = std::move(b);
  doc["F"] = json_interval_list(atlas.F);
  doc["depth"] = atlas.depth;
  doc["coverage"] = to_fraction_string(atlas.layer_coverage());
  Json layers = Json::array();
  for (const auto& per_gap : atlas.layers) {
    Json gap = Json::array();
    for (const auto& layer : per_gap) {
      Json node;
      node["interval"] = json_interval(layer.interval);
      node["slope"] = to_fraction_string(layer.slope);
      node["intercept"] = to_fraction_string(layer.intercept);
      gap.push_back(std::move(node));
    }
    layers.push_back(std::move(gap));
  }
  doc["layers"] = std::move(layers);
  write_file(out_path(opt, "gaps.json"), doc.dump(2) + "\n");
  return 0;
}

int cmd_manifolds(const Options& opt) {
  auto [spec, map] = load_validated_map(opt);
  auto pipe = run_pipeline(map, opt.max_period, opt.depth);
  Json doc;
  doc["name"] = spec.name;
  Json captures = Json::array();
  for (const auto& c : pipe.captures) {
    Json node;
    node["gap"] = c.gap_index;
    node["orbit"] = c.orbit_index;
    if (c.target_time) node["target_time"] = *c.target_time;
    captures.push_back(std::move(node));
  }
  doc["captures"] = std::move(captures);
  Json manifolds = Json::array();
  for (const auto& m : pipe.dec.manifolds) {
    Json node;
    node["orbit"] = to_fraction_string(m.orbit.least_point());
    node["period"] = m.orbit.period;
    node["open_intervals"] = json_interval_list(m.open_intervals);
    node["uncovered_bound"] = to_fraction_string(m.uncovered_bound);
    manifolds.push_back(std::move(node));
  }
  doc["manifolds"] = std::move(manifolds);
  doc["residual"] = json_interval_list(pipe.dec.residual);
  doc["residual_below_resolution"] = pipe.dec.residual_below_resolution;
  Json beta = Json::array();
  for (const auto& a : pipe.dec.beta) {
    Json node;
    node["source"] = a.source;
    node["inf_point"] = to_fraction_string(a.inf_point);
    node["first_hit_index"] = a.first_hit_index;
    node["breakpoint"] = to_fraction_string(a.breakpoint);
    beta.push_back(std::move(node));
  }
  doc["beta"] = std::move(beta);
  Json chains = Json::array();
  for (const auto& orbit : pipe.degenerates) {
    auto harvested = harvest_chain(map, pipe.dec, orbit);
    Json node;
    node["orbit"] = to_fraction_string(orbit.least_point());
    Json pairs = Json::array();
    for (const auto& [a, b] : harvested.chain.pairs) pairs.push_back(Json::array({a, b}));
    node["pairs"] = std::move(pairs);
    node["hit_iterates"] = harvested.hit_iterates;
    node["contains_zero"] = harvested.contains_zero;
    node["coordinates"] = harvested.coordinate_count;
    chains.push_back(std::move(node));
  }
  doc["harvested_chains"] = std::move(chains);
  write_file(out_path(opt, "manifolds.json"), doc.dump(2) + "\n");
  return 0;
}

int cmd_normalize(const Options& opt) {
  auto [spec, map] = load_validated_map(opt);
  auto table = build_conjugacy_table(map, opt.depth);
  auto slopes = verify_half_slopes(map, table, opt.samples, parse_flag_rational(opt.tol, "--tol"));
  auto snapped = snap_normal_form(map, table);
  Json doc;
  doc["name"] = spec.name;
  doc["depth"] = table.depth;
  Json images = Json::array();
  for (const auto& e : table.breakpoint_images) images.push_back(json_enclosure(e));
  doc["breakpoint_images"] = std::move(images);
  Json pieces = Json::array();
  for (const auto& pr : slopes.pieces) {
    Json node;
    node["piece"] = pr.piece;
    node["expected"] = to_fraction_string(pr.expected);
    node["max_deviation"] = to_fraction_string(pr.max_deviation);
    node["ok"] = pr.ok;
    Json samples = Json::array();
    for (const auto& s : pr.samples) {
      Json sample;
      sample["x_lo"] = to_fraction_string(s.x_lo);
      sample["x_hi"] = to_fraction_string(s.x_hi);
      sample["quotient"] = json_enclosure(s.quotient);
      samples.push_back(std::move(sample));
    }
    node["samples"] = std::move(samples);
    pieces.push_back(std::move(node));
  }
  doc["slope_report"] = std::move(pieces);
  doc["all_ok"] = slopes.all_ok;
  Json snap = Json::array();
  for (const auto& p : snapped.pieces) {
    Json node;
    node["slope"] = to_fraction_string(p.slope);
    node["intercept"] = to_fraction_string(p.intercept);
    node["domain"] = json_interval(p.domain);
    snap.push_back(std::move(node));
  }
  doc["snapped"]["approximate"] = snapped.approximate;
  doc["snapped"]["pieces"] = std::move(snap);
  write_file(out_path(opt, "normalize.json"), doc.dump(2) + "\n");
  if (!slopes.all_ok) {
    std::cerr << "slope verification did not meet the tolerance at depth " << opt.depth << "\n";
    return 4;
  }
  return 0;
}

int cmd_chains(const Options& opt) {
  auto report = verify_lemma(opt.s_max, opt.alphabet_max);
  Json doc;
  doc["s_max"] = report.s_max;
  doc["alphabet_max"] = report.alphabet_max;
  doc["chains_checked"] = report.chains_checked;
  doc["equality_cases"] = report.equality_cases;
  doc["max_coordinates"] = report.max_coordinates;
  doc["bound_ok"] = report.bound_ok;
  doc["equality_matches"] = report.equality_matches;
  write_file(out_path(opt, "chains.json"), doc.dump(2) + "\n");
  if (!report.bound_ok || !report.equality_matches) {
    std::cerr << "combinatorial bound violated in exhaustive enumeration\n";
    return 3;
  }
  return 0;
}

int cmd_billiard(const Options& opt) {
  SceneSpec spec = parse_scene_spec(read_file(opt.spec_path));
  auto ex = extract_return_map(spec.scene, /*require_commensurable=*/false);
  Json doc;
  doc["name"] = spec.name;
  doc["field_discontinuities"] = ex.field_discontinuities;
  doc["vertex_splits"] = ex.vertex_splits;
  Json chart = Json::array();
  for (const auto& cp : ex.chart_pieces) {
    Json node;
    node["source_edge"] = cp.source_edge;
    node["arc"] = json_interval(cp.arc);
    node["target_edge"] = cp.target_edge;
    node["slope"] = to_fraction_string(cp.slope);
    node["intercept"] = to_fraction_string(cp.intercept);
    chart.push_back(std::move(node));
  }
  doc["chart_pieces"] = std::move(chart);
  doc["commensurable"] = ex.commensurable;
  if (ex.commensurable) {
    Json weights = Json::array();
    for (const auto& w : ex.edge_weights) weights.push_back(to_fraction_string(w));
    doc["edge_weights"] = std::move(weights);
    Json normalized = Json::array();
    for (std::size_t i = 0; i < ex.normalized_pieces.size(); ++i) {
      const auto& p = ex.normalized_pieces[i];
      Json node;
      node["slope"] = to_fraction_string(p.slope);
      node["intercept"] = to_fraction_string(p.intercept);
      node["domain"] = json_interval(p.domain);
      node["source_edge"] = ex.piece_provenance[i].first;
      node["target_edge"] = ex.piece_provenance[i].second;
      normalized.push_back(std::move(node));
    }
    doc["normalized_pieces"] = std::move(normalized);
  }
  doc["contractive"] = ex.contractive;
  doc["map_emitted"] = ex.map.has_value();
  if (!ex.map) doc["map_omitted_reason"] = ex.map_omitted_reason;
  if (ex.map) {
    MapSpec extracted;
    extracted.name = spec.name + " return map";
    extracted.notes = "extracted boundary return map in the arclength coordinate";
    extracted.pieces = ex.map->pieces();
    write_file(out_path(opt, "extracted-map.json"), serialize_map_spec(extracted));
    auto verdict = census_verdict(*ex.map, {.max_period = opt.max_period});
    doc["census"]["regular"] = verdict.regular_count;
    doc["census"]["degenerate"] = verdict.degenerate_count;
    doc["census"]["bound_ok"] = verdict.bound_ok;
  }
  write_file(out_path(opt, "billiard.json"), doc.dump(2) + "\n");
  return 0;
}

int cmd_fuzz(const Options& opt) {
  std::size_t violations = 0;
  std::size_t inconclusive = 0;
  Json cases = Json::array();
  for (std::size_t i = 0; i < opt.fuzz_count; ++i) {
    auto map = fuzz_generate(opt.fuzz_n, opt.seed + i);
    auto verdict = census_verdict(map, {.max_period = opt.max_period, .grid_seeds = 0});
    std::size_t total = verdict.regular_count + verdict.degenerate_count;
    std::string failure;
    if (!verdict.bound_ok) failure = "orbit count exceeds the piece count";
    if (failure.empty()) {
      try {
        auto pipe = run_pipeline(map, opt.max_period, opt.depth);
        if (pipe.dec.residual_nonempty() && total > map.piece_count() - 1)
          failure = "nonempty residual with a full orbit count";
        for (const auto& orbit : pipe.degenerates) harvest_chain(map, pipe.dec, orbit);
      } catch (const PwcError& e) {
        ++inconclusive;
        Json node;
        node["seed"] = opt.seed + i;
        node["status"] = "inconclusive";
        node["detail"] = e.what();
        cases.push_back(std::move(node));
        continue;
      }
    }
    if (!failure.empty()) {
      ++violations;
      MapSpec counterexample;
      counterexample.name = "fuzz counterexample";
      counterexample.notes = failure;
      counterexample.pieces = map.pieces();
      write_file(out_path(opt, "fuzz-counterexample-" + std::to_string(opt.seed + i) + ".json"),
                 serialize_map_spec(counterexample));
      Json node;
      node["seed"] = opt.seed + i;
      node["status"] = "violation";
      node["detail"] = failure;
      cases.push_back(std::move(node));
    }
  }
  Json doc;
  doc["n"] = opt.fuzz_n;
  doc["count"] = opt.fuzz_count;
  doc["seed"] = opt.seed;
  doc["violations"] = violations;
  doc["inconclusive"] = inconclusive;
  doc["cases"] = std::move(cases);
  write_file(out_path(opt, "fuzz.json"), doc.dump(2) + "\n");
  std::cout << "violations: " << violations << "\n";
  return violations == 0 ? 0 : 3;
}

int cmd_plot(const Options& opt) {
  auto [spec, map] = load_validated_map(opt);
  std::string svg;
  if (opt.kind == "graph") {
    svg = svg_graph(map);
  } else if (opt.kind == "cobweb") {
    svg = svg_cobweb(map, parse_flag_rational(opt.x0, "--x0"), opt.steps);
  } else if (opt.kind == "basins") {
    svg = svg_basins(run_pipeline(map, opt.max_period, opt.depth).dec);
  } else if (opt.kind == "gaps") {
    svg = svg_gaps(propagate(map, compute_F(map), opt.depth));
  } else {
    throw PwcError(Errc::unknown_kind, "no plot kind '" + opt.kind + "'");
  }
  write_file(out_path(opt, opt.kind + ".svg"), svg);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact analysis of injective piecewise affine contractions of [0,1)"};
  app.require_subcommand(1);
  Options opt;
  if (const char* env = std::getenv("PWC_OUT_DIR")) opt.out_dir = env;

  auto add_common = [&](CLI::App* sub, bool needs_spec) {
    if (needs_spec)
      sub->add_option("--spec", opt.spec_path, "map or scene spec file")->required();
    sub->add_option("--out", opt.out_dir, "output directory");
    sub->add_option("--max-period", opt.max_period, "orbit search depth K");
    sub->add_option("--depth", opt.depth, "gap propagation depth L");
    sub->add_option("--seed", opt.seed, "random seed");
    sub->add_option("--tol", opt.tol, "tolerance as p/q");
  };

  add_common(app.add_subcommand("validate", "check a map spec"), true);
  add_common(app.add_subcommand("census", "periodic orbits and trapping regions"), true);
  add_common(app.add_subcommand("gaps", "gap set and layer propagation"), true);
  add_common(app.add_subcommand("manifolds", "stable manifolds, residual and beta"), true);
  auto* normalize = app.add_subcommand("normalize", "half-slope conjugacy verification");
  add_common(normalize, true);
  normalize->add_option("--samples", opt.samples, "sample pairs per piece");
  auto* chains = app.add_subcommand("chains", "exhaustive chain-lemma verification");
  add_common(chains, false);
  chains->add_option("--s-max", opt.s_max, "maximal chain length");
  chains->add_option("--alphabet-max", opt.alphabet_max, "alphabet size");
  add_common(app.add_subcommand("billiard", "extract a polygon return map"), true);
  auto* fuzz = app.add_subcommand("fuzz", "randomized theorem-bound testing");
  add_common(fuzz, false);
  fuzz->add_option("--n", opt.fuzz_n, "pieces per generated map");
  fuzz->add_option("--count", opt.fuzz_count, "number of maps");
  auto* plot = app.add_subcommand("plot", "deterministic SVG figures");
  add_common(plot, true);
  plot->add_option("--kind", opt.kind, "graph | cobweb | basins | gaps");
  plot->add_option("--x0", opt.x0, "cobweb start point as p/q");
  plot->add_option("--steps", opt.steps, "cobweb steps");

  CLI11_PARSE(app, argc, argv);

  try {
    const std::string sub = app.get_subcommands().front()->get_name();
    if (sub == "validate") return cmd_validate(opt);
    if (sub == "census") return cmd_census(opt);
    if (sub == "gaps") return cmd_gaps(opt);
    if (sub == "manifolds") return cmd_manifolds(opt);
    if (sub == "normalize") return cmd_normalize(opt);
    if (sub == "chains") return cmd_chains(opt);
    if (sub == "billiard") return cmd_billiard(opt);
    if (sub == "fuzz") return cmd_fuzz(opt);
    if (sub == "plot") return cmd_plot(opt);
    std::cerr << "unknown subcommand\n";
    return 2;
  } catch (const PwcError& e) {
    std::cerr << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
}
