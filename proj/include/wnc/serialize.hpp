#pragma once

#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>

#include "wnc/dentability.hpp"
#include "wnc/operators.hpp"
#include "wnc/pointset.hpp"
#include "wnc/profiles.hpp"
#include "wnc/sets.hpp"

namespace wnc {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Canonical number/text formatting: every float in emitted files goes
// through the same 12-significant-digit formatter so that identical data
// produces byte-identical files.
// ---------------------------------------------------------------------------

inline std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

/// Canonical JSON emission: keys sorted (nlohmann object order), doubles via
/// format_double. Values emitted by nlohmann's own dump would depend on its
/// shortest-round-trip formatter, so this writer is used for all files.
inline void canonical_json(const json& j, std::string& out) {
  switch (j.type()) {
    case json::value_t::object: {
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        out += json(it.key()).dump();
        out += ':';
        canonical_json(it.value(), out);
      }
      out += '}';
      break;
    }
    case json::value_t::array: {
      out += '[';
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ',';
        canonical_json(j[i], out);
      }
      out += ']';
      break;
    }
    case json::value_t::number_float: {
      const double v = j.get<double>();
      if (std::isfinite(v))
        out += format_double(v);
      else
        out += json(format_double(v)).dump();  // inf/nan as strings
      break;
    }
    default:
      out += j.dump();
  }
}

inline std::string canonical_json(const json& j) {
  std::string out;
  canonical_json(j, out);
  return out;
}

// ---------------------------------------------------------------------------
// Space / vector / point-set schema
// ---------------------------------------------------------------------------

inline json to_json(const Vector& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

inline Vector vector_from_json(const json& a, const char* what = "vector") {
  if (!a.is_array()) throw SpecError(std::string(what) + ": expected a JSON array");
  Vector v(static_cast<int>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i].is_number()) throw SpecError(std::string(what) + ": entries must be numbers");
    v[static_cast<int>(i)] = a[i].get<double>();
  }
  return v;
}

inline json to_json(const SpaceSpec& s) {
  json j;
  j["dim"] = s.dim();
  switch (s.kind()) {
    case SpaceKind::Lp:
      j["kind"] = "lp";
      if (s.p() == kInf)
        j["p"] = "inf";
      else
        j["p"] = s.p();
      break;
    case SpaceKind::Gauge: {
      j["kind"] = "gauge";
      j["symmetric"] = s.symmetric_closed();
      json gens = json::array();
      for (int c = 0; c < s.generators().cols(); ++c) gens.push_back(to_json(Vector(s.generators().col(c))));
      j["generators"] = gens;
      break;
    }
    case SpaceKind::Symmetric: {
      j["kind"] = "symmetric";
      json w = json::array();
      for (int i = 0; i < s.weights().size(); ++i) w.push_back(s.weights()[i]);
      j["weights"] = w;
      if (s.dual_role()) j["dual"] = true;
      break;
    }
  }
  return j;
}

inline SpaceSpec space_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind")) throw SpecError("space: missing kind");
  const std::string kind = j.at("kind").get<std::string>();
  const int dim = j.at("dim").get<int>();
  if (kind == "lp") {
    double p;
    if (j.at("p").is_string()) {
      if (j.at("p").get<std::string>() != "inf") throw SpecError("space: p must be a number or \"inf\"");
      p = kInf;
    } else {
      p = j.at("p").get<double>();
    }
    return SpaceSpec::lp(p, dim);
  }
  if (kind == "gauge") {
    std::vector<Vector> gens;
    for (const auto& g : j.at("generators")) gens.push_back(vector_from_json(g, "generator"));
    return SpaceSpec::gauge(gens, j.value("symmetric", false));
  }
  if (kind == "symmetric") {
    std::vector<double> w;
    for (const auto& x : j.at("weights")) w.push_back(x.get<double>());
    SpaceSpec s = SpaceSpec::symmetric_gauge(w, dim);
    if (j.value("dual", false)) s = s.dual_space();
    return s;
  }
  throw SpecError("space: unknown kind '" + kind + "'");
}

inline json to_json(const PointSet& A) {
  json j;
  j["space"] = to_json(A.space);
  json pts = json::array();
  for (const auto& x : A.points) pts.push_back(to_json(x));
  j["points"] = pts;
  j["labels"] = A.labels;
  return j;
}

inline PointSet point_set_from_json(const json& j) {
  SpaceSpec sp = space_from_json(j.at("space"));
  std::vector<Vector> pts;
  for (const auto& p : j.at("points")) pts.push_back(vector_from_json(p, "point"));
  std::vector<std::string> labels;
  if (j.contains("labels")) labels = j.at("labels").get<std::vector<std::string>>();
  return make_point_set(sp, std::move(pts), std::move(labels));
}

inline json to_json(const SetFamily& F) {
  json j;
  j["universe"] = F.universe;
  j["members"] = F.members;
  j["labels"] = F.labels;
  return j;
}

inline SetFamily set_family_from_json(const json& j) {
  std::vector<std::string> labels;
  if (j.contains("labels")) labels = j.at("labels").get<std::vector<std::string>>();
  return make_set_family(j.at("universe").get<int>(),
                         j.at("members").get<std::vector<std::vector<int>>>(), std::move(labels));
}

inline json to_json(const MatrixOperator& T) {
  json j;
  json rows = json::array();
  for (int r = 0; r < T.matrix.rows(); ++r) rows.push_back(to_json(Vector(T.matrix.row(r).transpose())));
  j["matrix"] = rows;
  j["domain"] = to_json(T.domain);
  j["codomain"] = to_json(T.codomain);
  return j;
}

inline MatrixOperator operator_from_json(const json& j) {
  SpaceSpec dom = space_from_json(j.at("domain"));
  SpaceSpec cod = space_from_json(j.at("codomain"));
  const auto& rows = j.at("matrix");
  Matrix M(static_cast<int>(rows.size()), dom.dim());
  for (std::size_t r = 0; r < rows.size(); ++r)
    M.row(static_cast<int>(r)) = vector_from_json(rows[r], "matrix row").transpose();
  return make_operator(std::move(M), std::move(dom), std::move(cod));
}

// ---------------------------------------------------------------------------
// Profiles, certificates, witnesses, traces, trees
// ---------------------------------------------------------------------------

inline json to_json(const Profile& P) {
  json j;
  j["quantity"] = P.quantity;
  json es = json::array();
  for (const auto& e : P.entries) {
    json je;
    je["arg"] = e.arg;
    je["value"] = e.value;
    je["gap"] = e.gap;
    je["mode"] = to_string(e.mode);
    es.push_back(je);
  }
  j["entries"] = es;
  return j;
}

inline json to_json(const SolveCertificate& c) {
  json j;
  j["value"] = c.value;
  j["gap"] = c.gap;
  if (c.weights) j["weights"] = to_json(c.weights->weights);
  if (c.weights_q) j["weights_q"] = to_json(c.weights_q->weights);
  if (c.functional) {
    j["functional"] = to_json(c.functional->coefficients);
    j["functional_dual_norm"] = c.functional->certified_dual_norm;
  }
  return j;
}

inline json to_json(const ChainWitness& w, const SpaceSpec& space) {
  json j;
  j["level"] = w.level;
  json tup = json::array(), fns = json::array(), residuals = json::array();
  for (const auto& x : w.tuple) tup.push_back(to_json(x));
  for (const auto& f : w.functionals) {
    json jf;
    jf["coefficients"] = to_json(f.coefficients);
    jf["dual_norm"] = space.dual_norm(f.coefficients);
    fns.push_back(jf);
  }
  for (const auto& f : w.functionals) {
    json row = json::array();
    for (const auto& x : w.tuple) row.push_back(f.coefficients.dot(x));
    residuals.push_back(row);
  }
  j["tuple"] = tup;
  j["functionals"] = fns;
  j["residuals"] = residuals;
  return j;
}

inline json to_json(const OperatorChainWitness& w, const MatrixOperator& T) {
  json j;
  j["level"] = w.level;
  json pts = json::array(), fns = json::array(), residuals = json::array();
  for (const auto& x : w.points) pts.push_back(to_json(x));
  for (const auto& f : w.functionals) {
    json jf;
    jf["coefficients"] = to_json(f.coefficients);
    jf["dual_norm"] = T.codomain.dual_norm(f.coefficients);
    fns.push_back(jf);
  }
  for (const auto& f : w.functionals) {
    json row = json::array();
    for (const auto& x : w.points) row.push_back(f.coefficients.dot(T.matrix * x));
    residuals.push_back(row);
  }
  j["points"] = pts;
  j["functionals"] = fns;
  j["residuals"] = residuals;
  return j;
}

inline json to_json(const DerivationTrace& t) {
  json j;
  j["epsilon"] = t.epsilon;
  j["levels"] = t.levels;
  json rs = json::array();
  for (const auto& r : t.removals) {
    json jr;
    jr["level"] = r.level;
    jr["point"] = r.point;
    jr["slice"] = r.slice;
    jr["diameter"] = r.slice_diameter;
    jr["complement_empty"] = r.complement_empty;
    jr["separation"] = r.separation;
    jr["functional"] = to_json(r.functional.coefficients.size() ? r.functional.coefficients
                                                                : Vector());
    rs.push_back(jr);
  }
  j["removals"] = rs;
  return j;
}

inline json to_json(const DyadicTree& t) {
  json j;
  j["height"] = t.height;
  j["dimension"] = t.dimension;
  j["separation"] = t.separation.to_string();
  json nodes = json::array();
  for (const auto& node : t.nodes) {
    json coords = json::array();
    for (const auto& c : node) coords.push_back(c.to_string());
    nodes.push_back(coords);
  }
  j["nodes"] = nodes;
  return j;
}

inline DyadicTree tree_from_json(const json& j) {
  DyadicTree t;
  t.height = j.at("height").get<int>();
  t.dimension = j.at("dimension").get<int>();
  t.separation = Rational::parse(j.at("separation").get<std::string>());
  for (const auto& node : j.at("nodes")) {
    std::vector<Rational> coords;
    for (const auto& c : node) coords.push_back(Rational::parse(c.get<std::string>()));
    if (static_cast<int>(coords.size()) != t.dimension)
      throw SpecError("tree: node coordinate count differs from the dimension");
    t.nodes.push_back(std::move(coords));
  }
  return t;
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

/// Profile CSV rows with the fixed (quantity, argument, value, gap, mode)
/// column order.
inline std::string profile_csv(const Profile& P) {
  std::string out = "quantity,argument,value,gap,mode\n";
  for (const auto& e : P.entries) {
    out += csv_escape(P.quantity) + "," + std::to_string(e.arg) + "," + format_double(e.value) +
           "," + format_double(e.gap) + "," + to_string(e.mode) + "\n";
  }
  return out;
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open for writing: " + path);
  f << content;
  if (!f) throw Error("write failed: " + path);
}

inline std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace wnc
