#include <doctest.h>

#include <filesystem>
#include <fstream>

#include <framekit/experiment.hpp>

using namespace framekit;

namespace {

json strip_wall_time(json report) {
  report.erase("wall_time_ms");
  return report;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Minimal structural validator for the subset of JSON Schema used in
// docs/report_schema.json: type, properties, required, items, enum.
bool validate_schema(const json& schema, const json& value, std::string& why,
                     const std::string& path = "$") {
  if (schema.contains("enum")) {
    for (const auto& e : schema.at("enum"))
      if (e == value) return true;
    why = path + ": value not in enum";
    return false;
  }
  if (schema.contains("type")) {
    const std::string t = schema.at("type").get<std::string>();
    const bool ok =
        (t == "object" && value.is_object()) || (t == "array" && value.is_array()) ||
        (t == "string" && value.is_string()) || (t == "boolean" && value.is_boolean()) ||
        (t == "number" && value.is_number()) || (t == "integer" && value.is_number_integer());
    if (!ok) {
      why = path + ": expected " + t;
      return false;
    }
  }
  if (schema.contains("required")) {
    for (const auto& r : schema.at("required"))
      if (!value.contains(r.get<std::string>())) {
        why = path + ": missing required '" + r.get<std::string>() + "'";
        return false;
      }
  }
  if (schema.contains("properties") && value.is_object()) {
    for (const auto& [key, sub] : schema.at("properties").items())
      if (value.contains(key))
        if (!validate_schema(sub, value.at(key), why, path + "." + key)) return false;
  }
  if (schema.contains("items") && value.is_array()) {
    std::size_t i = 0;
    for (const auto& e : value)
      if (!validate_schema(schema.at("items"), e, why, path + "[" + std::to_string(i++) + "]"))
        return false;
  }
  return true;
}

}  // namespace

TEST_CASE("run: preset configs execute and pass") {
  for (const std::string name : {"coordinate", "hermite"}) {
    ExperimentConfig cfg = parse_config(preset_config(name));
    RunReport rep = run(cfg);
    CHECK(rep.pass);
    CHECK(rep.steps.size() == cfg.pipeline.size());
    for (const auto& s : rep.steps) CHECK(s.status == "pass");
  }
}

TEST_CASE("run: empty pipeline reports zero steps and passes") {
  json doc;
  doc["label"] = "empty";
  doc["seed"] = 5;
  doc["model"] = {{"name", "hermite"}, {"truncation", 4}, {"levels", 2}};
  RunReport rep = run(parse_config(doc));
  CHECK(rep.pass);
  CHECK(rep.steps.empty());
}

TEST_CASE("run: unknown operation errors at its step index") {
  json doc;
  doc["label"] = "bad-op";
  doc["seed"] = 5;
  doc["model"] = {{"name", "hermite"}, {"truncation", 4}, {"levels", 2}};
  doc["pipeline"] = json::array({json{{"op", "frobnicate"}}});
  try {
    run(parse_config(doc));
    FAIL("expected ExperimentError");
  } catch (const ExperimentError& e) {
    CHECK(e.step == 0);
  }
}

TEST_CASE("config validation") {
  json doc;
  doc["label"] = "x";
  CHECK_THROWS_AS(parse_config(doc), ExperimentError);  // missing seed
  doc["seed"] = 1;
  CHECK_THROWS_AS(parse_config(doc), ExperimentError);  // neither model nor explicit
  doc["model"] = {{"name", "hermite"}, {"truncation", 4}, {"levels", 2}};
  doc["ladders"] = json::array();
  CHECK_THROWS_AS(parse_config(doc), ExperimentError);  // both routes at once
}

TEST_CASE("config: explicit ladders and frame") {
  json lx;
  lx["label"] = "x";
  lx["truncation"] = 3;
  lx["levels"] = json::array({json{{"kind", "lp"}, {"p", 2.0}}, json{{"kind", "lp"}, {"p", 2.0}}});
  json lt = lx;
  lt["label"] = "t";

  json doc;
  doc["label"] = "explicit";
  doc["seed"] = 9;
  doc["ladders"] = json::array({lx, lt});
  doc["frame"] = {{"label", "id"},
                  {"rows", {{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}}},
                  {"x_ladder", "x"},
                  {"theta_ladder", "t"}};
  doc["pipeline"] = json::array({json{{"op", "bounds"}}, json{{"op", "dual"}},
                                 json{{"op", "expansions"}}});
  RunReport rep = run(parse_config(doc));
  CHECK(rep.pass);

  doc["frame"]["x_ladder"] = "missing";
  CHECK_THROWS_AS(run(parse_config(doc)), ExperimentError);
}

TEST_CASE("run: precondition failures carry the step index") {
  json doc;
  doc["label"] = "needs-dual";
  doc["seed"] = 4;
  doc["model"] = {{"name", "weighted_shift"}, {"truncation", 4}, {"levels", 2}};
  doc["pipeline"] = json::array({json{{"op", "axioms"}}, json{{"op", "expansions"}}});
  try {
    run(parse_config(doc));
    FAIL("expected ExperimentError");
  } catch (const ExperimentError& e) {
    CHECK(e.step == 1);
  }
}

TEST_CASE("run: tolerance overrides change step outcomes") {
  // the circular model reconstructs through a genuine inverse, so its
  // residuals are tiny but nonzero
  json doc;
  doc["label"] = "tight-tolerance";
  doc["seed"] = 6;
  doc["model"] = {{"name", "lp_shift_invariant"}, {"truncation", 6}, {"levels", 2},
                  {"params", {{"taps", {1.0, 0.5}}}}};
  doc["pipeline"] = json::array({json{{"op", "expansions"}}});
  CHECK(run(parse_config(doc)).pass);
  doc["tolerances"] = {{"expansion_pass", 1e-300}};
  RunReport rep = run(parse_config(doc));
  CHECK_FALSE(rep.pass);
  CHECK(rep.steps[0].status == "fail");
}

TEST_CASE("run: determinism up to wall time") {
  ExperimentConfig cfg = parse_config(preset_config("coordinate"));
  RunReport a = run(cfg);
  RunReport b = run(cfg);
  CHECK(strip_wall_time(a.to_json()).dump(2) == strip_wall_time(b.to_json()).dump(2));

  const std::string dir_a = "det_a", dir_b = "det_b";
  write_report(a, dir_a);
  write_report(b, dir_b);
  CHECK(slurp(dir_a + "/bounds.csv") == slurp(dir_b + "/bounds.csv"));
  CHECK(slurp(dir_a + "/decay.csv") == slurp(dir_b + "/decay.csv"));
  std::filesystem::remove_all(dir_a);
  std::filesystem::remove_all(dir_b);
}

TEST_CASE("emit_decay_curves") {
  json doc;
  doc["label"] = "decay";
  doc["seed"] = 8;
  doc["model"] = {{"name", "hermite"}, {"truncation", 6}, {"levels", 3}};
  doc["pipeline"] = json::array({json{{"op", "expansions"}}});
  RunReport rep = run(parse_config(doc));
  REQUIRE(rep.expansions.has_value());

  const std::string path = "decay_test.csv";
  emit_decay_curves(rep, path);
  const std::string body = slurp(path);
  CHECK(body.rfind("n,level,residual\r\n", 0) == 0);
  std::filesystem::remove(path);

  // coordinate functionals reconstruct exactly once every term arrived
  for (const auto& lev : rep.expansions->levels)
    CHECK(lev.partial_sum_decay.back() <= 1e-12);

  RunReport empty;
  CHECK_THROWS_AS(emit_decay_curves(empty, path), ExperimentError);
}

TEST_CASE("reports validate against the shipped schema") {
  const std::string schema_path = std::string(FRAMEKIT_SOURCE_DIR) + "/docs/report_schema.json";
  json schema = json::parse(slurp(schema_path));

  for (const std::string name : {"coordinate", "hermite", "lp_shift"}) {
    RunReport rep = run(parse_config(preset_config(name)));
    std::string why;
    const bool ok = validate_schema(schema, rep.to_json(), why);
    INFO(name, ": ", why);
    CHECK(ok);
  }
}

TEST_CASE("seed is echoed and drives sampled outputs") {
  json doc = preset_config("coordinate");
  doc["seed"] = 12345;
  RunReport rep = run(parse_config(doc));
  CHECK(rep.seed == 12345);
  CHECK(rep.to_json().at("seed").get<std::uint64_t>() == 12345);
}
