#pragma once

// JSON and CSV encodings. Field names here are the wire contract of the
// runner; docs/report_schema.json documents the same shapes.

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "framekit/constructions.hpp"
#include "framekit/frames.hpp"
#include "framekit/ladder.hpp"
#include "framekit/models.hpp"
#include "framekit/numeric.hpp"

namespace framekit {

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Vectors / matrices

inline json to_json(const CoeffVector& v) {
  json a = json::array();
  for (double x : v) a.push_back(x);
  return a;
}

inline CoeffVector vector_from_json(const json& j) {
  if (!j.is_array()) throw std::invalid_argument("json: expected an array of numbers");
  CoeffVector v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v[i] = j[i].get<double>();
  return v;
}

inline json to_json(const CoeffMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) rows.push_back(to_json(m.row(i)));
  return rows;
}

inline CoeffMatrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw std::invalid_argument("json: expected a matrix");
  std::vector<CoeffVector> rows;
  for (const auto& r : j) rows.push_back(vector_from_json(r));
  return CoeffMatrix::from_rows(rows);
}

// ---------------------------------------------------------------------------
// NormSpec

inline json to_json(const NormSpec& s) {
  json j;
  switch (s.kind()) {
    case NormKind::Lp:
      j["kind"] = "lp";
      j["p"] = s.p();
      break;
    case NormKind::WeightedL2:
      j["kind"] = "weighted_l2";
      j["weights"] = to_json(s.weights());
      break;
    case NormKind::Sup:
      j["kind"] = "sup";
      break;
    case NormKind::MatrixInduced:
      j["kind"] = "matrix_induced";
      j["matrix"] = to_json(s.matrix());
      j["inner"] = to_json(s.inner());
      break;
    case NormKind::ShiftTilde:
      j["kind"] = "shift_tilde";
      j["weights"] = to_json(s.weights());
      break;
    case NormKind::SynthesisSup:
      j["kind"] = "synthesis_sup";
      j["columns"] = to_json(s.matrix());
      j["inner"] = to_json(s.inner());
      break;
  }
  if (s.scale() != 1.0) j["scale"] = s.scale();
  return j;
}

inline NormSpec norm_spec_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  NormSpec out = NormSpec::l2();
  if (kind == "lp") {
    out = NormSpec::lp(j.at("p").get<double>());
  } else if (kind == "weighted_l2") {
    out = NormSpec::weighted_l2(vector_from_json(j.at("weights")));
  } else if (kind == "sup") {
    out = NormSpec::sup();
  } else if (kind == "matrix_induced") {
    out = NormSpec::matrix_induced(matrix_from_json(j.at("matrix")),
                                   norm_spec_from_json(j.at("inner")));
  } else if (kind == "shift_tilde") {
    out = NormSpec::shift_tilde(vector_from_json(j.at("weights")));
  } else if (kind == "synthesis_sup") {
    out = NormSpec::synthesis_sup(matrix_from_json(j.at("columns")),
                                  norm_spec_from_json(j.at("inner")));
  } else {
    throw std::invalid_argument("json: unknown norm kind '" + kind + "'");
  }
  if (j.contains("scale")) out = out.scaled(j.at("scale").get<double>());
  return out;
}

// ---------------------------------------------------------------------------
// Ladders and frames

inline json to_json(const SpaceLadder& l) {
  json j;
  j["label"] = l.label();
  j["truncation"] = l.truncation();
  json levels = json::array();
  for (const auto& s : l.levels()) levels.push_back(to_json(s));
  j["levels"] = levels;
  return j;
}

inline json to_json(const ThetaLadder& l) {
  json j;
  j["label"] = l.label();
  j["truncation"] = l.truncation();
  json levels = json::array();
  for (const auto& s : l.levels()) levels.push_back(to_json(s));
  j["levels"] = levels;
  j["bk_constants"] = l.bk_constants();
  return j;
}

inline SpaceLadder space_ladder_from_json(const json& j) {
  std::vector<NormSpec> levels;
  for (const auto& s : j.at("levels")) levels.push_back(norm_spec_from_json(s));
  return SpaceLadder(j.at("label").get<std::string>(), j.at("truncation").get<std::size_t>(),
                     std::move(levels));
}

inline ThetaLadder theta_ladder_from_json(const json& j) {
  std::vector<NormSpec> levels;
  for (const auto& s : j.at("levels")) levels.push_back(norm_spec_from_json(s));
  std::vector<double> bk;
  if (j.contains("bk_constants")) bk = j.at("bk_constants").get<std::vector<double>>();
  return ThetaLadder(j.at("label").get<std::string>(), j.at("truncation").get<std::size_t>(),
                     std::move(levels), std::move(bk));
}

inline json to_json(const FrameSystem& f) {
  json j;
  j["label"] = f.label();
  j["rows"] = to_json(f.functionals());
  j["x_ladder"] = f.x_ladder().label();
  j["theta_ladder"] = f.theta_ladder().label();
  return j;
}

// ---------------------------------------------------------------------------
// Model specs

inline json to_json(const ModelSpec& m) {
  json j;
  j["name"] = m.name;
  j["truncation"] = m.truncation;
  j["levels"] = m.level_count;
  json params;
  if (!m.weights.empty()) params["weights"] = m.weights;
  if (!m.taps.empty()) params["taps"] = m.taps;
  j["params"] = params;
  return j;
}

inline ModelSpec model_spec_from_json(const json& j) {
  ModelSpec m;
  m.name = j.at("name").get<std::string>();
  m.truncation = j.at("truncation").get<std::size_t>();
  m.level_count = j.at("levels").get<std::size_t>();
  if (j.contains("params")) {
    const json& p = j.at("params");
    if (p.contains("weights")) m.weights = p.at("weights").get<std::vector<std::vector<double>>>();
    if (p.contains("taps")) m.taps = p.at("taps").get<std::vector<double>>();
  }
  return m;
}

// ---------------------------------------------------------------------------
// Reports

inline json to_json(const AxiomReport& r) {
  json j;
  j["label"] = r.label;
  j["samples"] = r.samples;
  j["seed"] = r.seed;
  j["monotonicity_violation"] = r.monotonicity_violation;
  j["density_guard_residual"] = r.density_guard_residual;
  j["canonical_vectors_ok"] = r.canonical_vectors_ok;
  if (!r.lambda_measured.empty()) j["lambda"] = r.lambda_measured;
  if (!r.coordinate_bounds.empty()) j["coordinate_bounds"] = r.coordinate_bounds;
  j["pass"] = r.pass;
  return j;
}

inline json to_json(const FrameBoundsEntry& e) {
  json j;
  j["level"] = e.level;
  j["A"] = e.lower;
  j["B"] = e.upper;
  j["tight"] = e.tight;
  j["method"] = e.method;
  if (e.samples > 0) j["samples"] = e.samples;
  // sampled bounds are inner estimates: A is never under- nor B over-stated
  if (e.method == "sampled-optimization") j["estimate_side"] = "inner";
  j["lower_frame_fails"] = e.lower_frame_fails;
  return j;
}

inline json to_json(const FrameBounds& b) {
  json j = json::array();
  for (const auto& e : b.levels) j.push_back(to_json(e));
  return j;
}

inline json to_json(const DualSequence& d) {
  json j;
  j["provenance"] = d.provenance;
  j["built_at_level"] = d.built_at_level;
  j["reconstruction_norms"] = d.reconstruction_norms;
  j["reconstruction_norm_methods"] = d.reconstruction_norm_methods;
  // coefficient-level stand-in; the infinite-dimensional dual is not modeled
  j["dual_frame_role"] = "DF-surrogate";
  j["vectors"] = to_json(d.vectors);
  return j;
}

inline json to_json(const ExpansionReport& r) {
  json j;
  j["tolerance"] = r.tolerance;
  json levels = json::array();
  for (const auto& lev : r.levels) {
    json l;
    l["level"] = lev.level;
    l["residual_primal"] = lev.residual_primal;
    l["residual_dual"] = lev.residual_dual;
    l["partial_sum_decay"] = lev.partial_sum_decay;
    levels.push_back(l);
  }
  j["levels"] = levels;
  j["pass"] = r.pass;
  return j;
}

inline json to_json(const RangeReport& r) {
  json j;
  j["rank"] = r.rank;
  j["full_rank"] = r.full_rank;
  j["closed"] = r.closed;
  j["closedness"] = "structural at finite rank";
  json inv = json::array();
  for (std::size_t s = 0; s < r.inverse_bounds.size(); ++s) {
    json e;
    e["level"] = s;
    e["lower_frame_fails"] = r.lower_frame_fails[s];
    if (std::isfinite(r.inverse_bounds[s])) e["inverse_bound"] = r.inverse_bounds[s];
    inv.push_back(e);
  }
  j["inverse_bounds"] = inv;
  return j;
}

inline json to_json(const ConditionWitness& w) {
  json j;
  j["note"] = w.note;
  if (!w.c.empty()) j["c"] = to_json(w.c);
  if (!w.d.empty()) j["d"] = to_json(w.d);
  if (!w.f.empty()) j["f"] = to_json(w.f);
  if (!w.h.empty()) j["h"] = to_json(w.h);
  if (!w.r.empty()) j["r"] = to_json(w.r);
  return j;
}

inline json to_json(const ConditionReport& r) {
  json j;
  j["condition"] = r.condition;
  j["level"] = r.level;
  j["verdict"] = r.verdict;
  j["trials"] = r.trials;
  j["seed"] = r.seed;
  if (std::isfinite(r.margin)) j["margin"] = r.margin;
  if (r.condition == "A3") j["estimate"] = r.estimate;
  if (r.row_scale != 1.0) j["row_scale"] = r.row_scale;
  if (r.witness) j["witness"] = to_json(*r.witness);
  if (!r.curves.empty()) j["curves"] = r.curves;
  if (!r.least_k.empty()) j["least_k"] = r.least_k;
  return j;
}

inline json to_json(const CbReport& r) {
  json j;
  j["biorthogonality_defect"] = r.biorthogonality_defect;
  json levels = json::array();
  for (const auto& lev : r.levels) {
    json l;
    l["level"] = lev.level;
    l["terminal_residual"] = lev.terminal_residual;
    l["prefix_operator_bound"] = lev.prefix_operator_bound;
    l["pass"] = lev.pass;
    levels.push_back(l);
  }
  j["levels"] = levels;
  j["pass"] = r.pass;
  return j;
}

inline json to_json(const DominanceReport& r) {
  json j;
  j["row_scale"] = r.row_scale;
  j["min_margin"] = r.min_margin;
  j["trials"] = r.trials;
  j["pass"] = r.pass;
  return j;
}

inline json to_json(const SolidityReport& r) {
  json j;
  j["min_margin"] = r.min_margin;
  j["trials"] = r.trials;
  j["pass"] = r.pass;
  return j;
}

inline json to_json(const TildeNormResult& r) {
  json j;
  switch (r.status) {
    case TildeStatus::Optimal: j["status"] = "optimal"; break;
    case TildeStatus::BestFound: j["status"] = "best-found"; break;
    case TildeStatus::Infeasible: j["status"] = "infeasible"; break;
  }
  if (r.status != TildeStatus::Infeasible) {
    j["value"] = r.value;
    j["minimizer"] = to_json(r.minimizer);
    j["sign_pattern"] = r.sign_pattern;
  }
  j["support"] = r.support;
  j["branches_explored"] = r.branches_explored;
  return j;
}

// ---------------------------------------------------------------------------
// CSV (RFC 4180: CRLF separators, plain ASCII fields here)

inline std::string csv_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

inline void write_text_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << body;
  if (!out) throw std::runtime_error("write failed: " + path);
}

// level,A,B,tight,residual_primal,residual_dual
inline std::string bounds_csv(const FrameBounds& bounds, const ExpansionReport* expansions) {
  std::string s = "level,A,B,tight,residual_primal,residual_dual\r\n";
  for (const auto& e : bounds.levels) {
    s += std::to_string(e.level) + "," + csv_number(e.lower) + "," + csv_number(e.upper) + "," +
         (e.tight ? "true" : "false") + ",";
    const ExpansionLevelReport* lev = nullptr;
    if (expansions)
      for (const auto& l : expansions->levels)
        if (l.level == e.level) lev = &l;
    if (lev) {
      s += csv_number(lev->residual_primal) + "," + csv_number(lev->residual_dual);
    } else {
      s += ",";
    }
    s += "\r\n";
  }
  return s;
}

// n,level,residual
inline std::string decay_csv(const ExpansionReport& expansions) {
  std::string s = "n,level,residual\r\n";
  for (const auto& lev : expansions.levels)
    for (std::size_t n = 0; n < lev.partial_sum_decay.size(); ++n)
      s += std::to_string(n + 1) + "," + std::to_string(lev.level) + "," +
           csv_number(lev.partial_sum_decay[n]) + "\r\n";
  return s;
}

}  // namespace framekit
