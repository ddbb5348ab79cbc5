#pragma once

// Batch experiment runner: one JSON config in, a JSON report plus CSV files
// out. Identical config and seed produce byte-identical reports except for
// the wall-time field. Steps execute in order and later steps consume
// earlier outputs (the dual feeds the expansion check, bounds feed the CSV).

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "framekit/serialize.hpp"

namespace framekit {

// Central tolerance table; every entry can be overridden from the config.
struct ToleranceTable {
  double expansion_pass = 1e-8;     // full-sum residuals per level
  double monotonicity = 1e-9;       // ladder axiom violation
  double condition_floor = 1.0 - 1e-9;  // certified lower-bound floor for A3
  double dominance = 1e-9;          // solid-norm dominance / solidity margins

  static ToleranceTable from_json(const json& j) {
    ToleranceTable t;
    if (j.contains("expansion_pass")) t.expansion_pass = j.at("expansion_pass").get<double>();
    if (j.contains("monotonicity")) t.monotonicity = j.at("monotonicity").get<double>();
    if (j.contains("condition_floor")) t.condition_floor = j.at("condition_floor").get<double>();
    if (j.contains("dominance")) t.dominance = j.at("dominance").get<double>();
    return t;
  }

  json to_json() const {
    json j;
    j["expansion_pass"] = expansion_pass;
    j["monotonicity"] = monotonicity;
    j["condition_floor"] = condition_floor;
    j["dominance"] = dominance;
    return j;
  }
};

struct PipelineStep {
  std::string op;
  json params;  // op-specific; empty object when omitted
};

struct ExperimentConfig {
  std::string label;
  std::uint64_t seed = 0;
  std::optional<ModelSpec> model;
  std::optional<json> explicit_ladders;  // array of ladder documents
  std::optional<json> explicit_frame;    // frame document referencing ladder labels
  std::vector<PipelineStep> pipeline;
  ToleranceTable tolerances;
  json echo;  // original document, echoed into the report
};

// Errors carry the pipeline position (config-level problems use step -1).
struct ExperimentError : std::runtime_error {
  int step;
  ExperimentError(int step_index, const std::string& message)
      : std::runtime_error("step " + std::to_string(step_index) + ": " + message),
        step(step_index) {}
};

inline ExperimentConfig parse_config(const json& doc) {
  ExperimentConfig cfg;
  cfg.echo = doc;
  if (!doc.contains("label")) throw ExperimentError(-1, "config: missing 'label'");
  cfg.label = doc.at("label").get<std::string>();
  if (!doc.contains("seed")) throw ExperimentError(-1, "config: missing 'seed'");
  cfg.seed = doc.at("seed").get<std::uint64_t>();

  const bool has_model = doc.contains("model");
  const bool has_explicit = doc.contains("frame") || doc.contains("ladders");
  if (has_model == has_explicit)
    throw ExperimentError(-1, "config: exactly one of 'model' or 'ladders'+'frame' required");
  if (has_model) {
    cfg.model = model_spec_from_json(doc.at("model"));
  } else {
    if (!doc.contains("ladders") || !doc.contains("frame"))
      throw ExperimentError(-1, "config: explicit route needs both 'ladders' and 'frame'");
    cfg.explicit_ladders = doc.at("ladders");
    cfg.explicit_frame = doc.at("frame");
  }

  if (doc.contains("pipeline")) {
    for (const auto& s : doc.at("pipeline")) {
      PipelineStep step;
      step.op = s.at("op").get<std::string>();
      step.params = s;
      cfg.pipeline.push_back(std::move(step));
    }
  }
  if (doc.contains("tolerances")) cfg.tolerances = ToleranceTable::from_json(doc.at("tolerances"));
  return cfg;
}

struct StepResult {
  std::size_t index = 0;
  std::string op;
  std::string status;  // "pass" | "fail"
  json output;
};

struct RunReport {
  std::string label;
  std::uint64_t seed = 0;
  json config_echo;
  std::vector<StepResult> steps;
  bool pass = true;
  double wall_time_ms = 0.0;
  // structured outputs for the CSV emitters
  std::optional<FrameBounds> bounds;
  std::optional<ExpansionReport> expansions;

  json to_json() const {
    json j;
    j["artifact"] = "framekit";
    j["schema_version"] = "1";
    j["label"] = label;
    j["seed"] = seed;
    j["config"] = config_echo;
    json steps_j = json::array();
    json failed = json::array();
    for (const auto& s : steps) {
      json e;
      e["index"] = s.index;
      e["op"] = s.op;
      e["status"] = s.status;
      e["output"] = s.output;
      steps_j.push_back(e);
      if (s.status != "pass") failed.push_back(s.index);
    }
    j["steps"] = steps_j;
    json summary;
    summary["pass"] = pass;
    summary["failed_steps"] = failed;
    j["summary"] = summary;
    j["wall_time_ms"] = wall_time_ms;
    return j;
  }
};

namespace detail {

inline ModelBundle bundle_from_config(const ExperimentConfig& cfg) {
  if (cfg.model) return build_model(*cfg.model);

  std::optional<SpaceLadder> x_store;
  std::optional<ThetaLadder> th_store;
  const json& frame_doc = *cfg.explicit_frame;
  const std::string x_label = frame_doc.at("x_ladder").get<std::string>();
  const std::string th_label = frame_doc.at("theta_ladder").get<std::string>();
  for (const auto& lad : *cfg.explicit_ladders) {
    const std::string label = lad.at("label").get<std::string>();
    if (label == x_label) x_store = space_ladder_from_json(lad);
    if (label == th_label) th_store = theta_ladder_from_json(lad);
  }
  if (!x_store) throw ExperimentError(-1, "config: frame references undefined ladder '" + x_label + "'");
  if (!th_store)
    throw ExperimentError(-1, "config: frame references undefined ladder '" + th_label + "'");

  FrameSystem frame(frame_doc.at("label").get<std::string>(),
                    matrix_from_json(frame_doc.at("rows")), *x_store, *th_store);
  ModelSpec spec;
  spec.name = "explicit";
  spec.truncation = frame.truncation();
  spec.level_count = frame.level_count();
  return ModelBundle{std::move(spec), *x_store, *th_store, std::move(frame), std::nullopt, {}};
}

inline std::uint64_t step_seed(std::uint64_t base, std::size_t index) {
  return base ^ (0x9e3779b97f4a7c15ull * (index + 1));
}

inline std::vector<std::size_t> levels_param(const json& params, std::size_t level_count) {
  std::vector<std::size_t> levels;
  if (params.contains("levels")) {
    for (const auto& l : params.at("levels")) levels.push_back(l.get<std::size_t>());
  } else if (params.contains("level")) {
    levels.push_back(params.at("level").get<std::size_t>());
  } else {
    for (std::size_t s = 0; s < level_count; ++s) levels.push_back(s);
  }
  for (std::size_t s : levels)
    if (s >= level_count) throw std::invalid_argument("level out of range");
  return levels;
}

}  // namespace detail

inline const std::vector<std::string>& known_ops() {
  static const std::vector<std::string> ops = {
      "axioms", "lambda", "bounds", "range", "dual", "expansions", "cb",
      "a1", "a2", "a3", "dominance", "solidity", "tilde",
      "construct_x", "construct_theta"};
  return ops;
}

inline RunReport run(const ExperimentConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();

  // validate operations before running anything
  for (std::size_t i = 0; i < cfg.pipeline.size(); ++i) {
    const auto& ops = known_ops();
    bool known = false;
    for (const auto& o : ops)
      if (o == cfg.pipeline[i].op) known = true;
    if (!known)
      throw ExperimentError(static_cast<int>(i),
                            "unknown operation '" + cfg.pipeline[i].op + "'");
  }

  RunReport report;
  report.label = cfg.label;
  report.seed = cfg.seed;
  report.config_echo = cfg.echo;

  ModelBundle bundle = detail::bundle_from_config(cfg);
  std::optional<DualSequence> dual = bundle.dual;

  for (std::size_t i = 0; i < cfg.pipeline.size(); ++i) {
    const PipelineStep& step = cfg.pipeline[i];
    const json& p = step.params;
    const std::uint64_t seed = p.contains("seed") ? p.at("seed").get<std::uint64_t>()
                                                  : detail::step_seed(cfg.seed, i);
    StepResult res;
    res.index = i;
    res.op = step.op;
    res.status = "pass";

    try {
      if (step.op == "axioms") {
        const std::size_t samples = p.value("samples", std::size_t{500});
        AxiomReport rx = check_ladder_axioms(bundle.x_ladder, samples, seed);
        AxiomReport rt = check_ladder_axioms(bundle.theta_ladder, samples, seed + 1);
        res.output["x"] = to_json(rx);
        res.output["theta"] = to_json(rt);
        if (!rx.pass || !rt.pass) res.status = "fail";
      } else if (step.op == "lambda") {
        const std::size_t samples = p.value("samples", std::size_t{500});
        json lam = json::array();
        for (std::size_t s = 0; s < bundle.theta_ladder.level_count(); ++s)
          lam.push_back(measure_lambda(bundle.theta_ladder, s, samples, seed));
        res.output["lambda"] = lam;
      } else if (step.op == "bounds") {
        SampledOptOptions opt;
        opt.seed = seed;
        opt.starts = p.value("starts", std::size_t{200});
        FrameBounds b = estimate_frame_bounds(bundle.frame, opt);
        report.bounds = b;
        res.output["levels"] = to_json(b);
        for (const auto& e : b.levels)
          if (e.lower_frame_fails) res.status = "fail";
      } else if (step.op == "range") {
        SampledOptOptions opt;
        opt.seed = seed;
        RangeReport r = check_range_closed(bundle.frame, opt);
        res.output = to_json(r);
        if (!r.full_rank) res.status = "fail";
      } else if (step.op == "dual") {
        SampledOptOptions opt;
        opt.seed = seed;
        const std::size_t level = p.value("level", std::size_t{0});
        dual = dual_sequence(bundle.frame, level, opt);
        res.output = to_json(*dual);
      } else if (step.op == "expansions") {
        if (!dual) throw std::invalid_argument("expansions: no dual sequence available");
        ExpansionReport r = verify_expansions(bundle.frame, *dual, seed,
                                              cfg.tolerances.expansion_pass);
        report.expansions = r;
        res.output = to_json(r);
        if (!r.pass) res.status = "fail";
      } else if (step.op == "cb") {
        if (!dual) throw std::invalid_argument("cb: no dual sequence available");
        const std::size_t samples = p.value("samples", std::size_t{100});
        CbReport r = cb_test_via_biorthogonal(bundle.frame, dual->vectors, bundle.x_ladder,
                                              samples, seed);
        res.output = to_json(r);
        if (!r.pass) res.status = "fail";
      } else if (step.op == "a1" || step.op == "a2" || step.op == "a3") {
        const std::size_t default_trials = step.op == "a2" ? 5 : (step.op == "a1" ? 200 : 50);
        const std::size_t trials = p.value("trials", default_trials);
        json reports = json::array();
        for (std::size_t s : detail::levels_param(p, bundle.frame.level_count())) {
          ConditionReport r;
          if (step.op == "a1") r = check_A1(bundle.frame, s, trials, seed);
          if (step.op == "a2") r = check_A2(bundle.frame, s, trials, seed);
          if (step.op == "a3")
            r = check_A3(bundle.frame, s, trials, seed, cfg.tolerances.condition_floor);
          reports.push_back(to_json(r));
          if (r.verdict == "fail") res.status = "fail";
        }
        res.output["reports"] = reports;
      } else if (step.op == "dominance") {
        const std::size_t trials = p.value("trials", std::size_t{100});
        const std::size_t level = p.value("level", std::size_t{0});
        DominanceReport r = check_norm_dominance(bundle.frame, NormSpec::l2(), level, trials, seed);
        res.output = to_json(r);
        if (!r.pass) res.status = "fail";
      } else if (step.op == "solidity") {
        const std::size_t trials = p.value("trials", std::size_t{100});
        const std::size_t level = p.value("level", std::size_t{0});
        SolidityReport r = check_solidity(bundle.frame, level, trials, seed);
        res.output = to_json(r);
        if (!r.pass) res.status = "fail";
      } else if (step.op == "tilde") {
        if (!p.contains("c")) throw std::invalid_argument("tilde: missing constraint vector 'c'");
        ConstraintSet cs{vector_from_json(p.at("c")), p.value("level", std::size_t{0})};
        res.output = to_json(tilde_norm(bundle.frame, cs));
      } else if (step.op == "construct_x") {
        XConstruction cx = construct_x_ladder(bundle.theta_ladder, bundle.frame);
        bundle.x_ladder = cx.x_ladder;
        bundle.theta_ladder = cx.theta_ladder;
        bundle.frame = cx.framed;
        res.output["x_ladder"] = to_json(cx.x_ladder);
        res.output["theta_scale"] = cx.theta_scale;
        res.output["base_bounds"] = to_json(cx.base_bounds);
      } else if (step.op == "construct_theta") {
        ThetaConstruction tc = construct_theta_ladder(bundle.x_ladder, bundle.frame);
        bundle.theta_ladder = tc.ladder;
        bundle.frame = tc.framed;
        res.output["theta_ladder"] = to_json(tc.ladder);
        res.output["canonical_in_range"] = tc.canonical_in_range;
        res.output["max_canonical_off_range"] = tc.max_canonical_off_range;
        res.output["off_range_policy"] = tc.off_range_policy;
      }
    } catch (const std::invalid_argument& e) {
      throw ExperimentError(static_cast<int>(i), e.what());
    }

    report.steps.push_back(std::move(res));
  }

  report.pass = true;
  for (const auto& s : report.steps)
    if (s.status != "pass") report.pass = false;
  report.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

// ---------------------------------------------------------------------------
// File emission.

inline std::vector<std::string> emit_decay_curves(const RunReport& report,
                                                  const std::string& path) {
  if (!report.expansions)
    throw ExperimentError(-1, "emit_decay_curves: nothing to emit (no expansion report)");
  write_text_file(path, decay_csv(*report.expansions));
  return {path};
}

inline std::vector<std::string> write_report(const RunReport& report, const std::string& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::string> written;
  const std::string report_path = dir + "/report.json";
  write_text_file(report_path, report.to_json().dump(2) + "\n");
  written.push_back(report_path);
  if (report.bounds) {
    const std::string p = dir + "/bounds.csv";
    write_text_file(p, bounds_csv(*report.bounds,
                                  report.expansions ? &*report.expansions : nullptr));
    written.push_back(p);
  }
  if (report.expansions) {
    const std::string p = dir + "/decay.csv";
    emit_decay_curves(report, p);
    written.push_back(p);
  }
  return written;
}

// ---------------------------------------------------------------------------
// Presets: ready-made configs for the shipped models.

inline json preset_config(const std::string& name) {
  json pipeline = json::array();
  auto op = [](const char* o) { return json{{"op", o}}; };
  json doc;
  doc["label"] = name;
  doc["seed"] = 20240801;

  if (name == "weighted_shift") {
    doc["model"] = {{"name", "weighted_shift"}, {"truncation", 8}, {"levels", 4}};
    pipeline.push_back(op("axioms"));
    pipeline.push_back(op("bounds"));
    pipeline.push_back(op("range"));
    pipeline.push_back(json{{"op", "dual"}, {"level", 0}});
    pipeline.push_back(op("expansions"));
    pipeline.push_back(json{{"op", "a1"}, {"trials", 200}});
    pipeline.push_back(json{{"op", "a2"}, {"trials", 3}, {"levels", {0, 1}}});
    pipeline.push_back(json{{"op", "a3"}, {"trials", 30}});
    pipeline.push_back(json{{"op", "dominance"}, {"trials", 50}});
    pipeline.push_back(json{{"op", "solidity"}, {"trials", 50}});
  } else if (name == "hermite") {
    doc["model"] = {{"name", "hermite"}, {"truncation", 8}, {"levels", 4}};
    pipeline.push_back(op("axioms"));
    pipeline.push_back(op("bounds"));
    pipeline.push_back(op("range"));
    pipeline.push_back(op("expansions"));
    pipeline.push_back(op("cb"));
    pipeline.push_back(op("construct_theta"));
    pipeline.push_back(op("bounds"));
  } else if (name == "lp_shift") {
    doc["model"] = {{"name", "lp_shift_invariant"}, {"truncation", 8}, {"levels", 3},
                    {"params", {{"taps", {1.0, 0.5}}}}};
    pipeline.push_back(op("axioms"));
    pipeline.push_back(op("bounds"));
    pipeline.push_back(op("range"));
    pipeline.push_back(op("expansions"));
    pipeline.push_back(json{{"op", "dominance"}, {"trials", 50}});
  } else if (name == "coordinate") {
    doc["model"] = {{"name", "coordinate"}, {"truncation", 8}, {"levels", 4}};
    pipeline.push_back(op("axioms"));
    pipeline.push_back(op("bounds"));
    pipeline.push_back(json{{"op", "dual"}, {"level", 0}});
    pipeline.push_back(op("expansions"));
    // the solid-norm machinery needs the quadratic base level here
    pipeline.push_back(json{{"op", "a3"}, {"trials", 30}, {"levels", {0}}});
    pipeline.push_back(json{{"op", "dominance"}, {"trials", 50}});
    pipeline.push_back(json{{"op", "solidity"}, {"trials", 50}});
  } else {
    throw std::invalid_argument("unknown preset '" + name + "'");
  }
  doc["pipeline"] = pipeline;
  return doc;
}

inline const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"weighted_shift", "hermite", "lp_shift",
                                                 "coordinate"};
  return names;
}

}  // namespace framekit
