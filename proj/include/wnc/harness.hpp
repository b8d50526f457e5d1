#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "wnc/serialize.hpp"

namespace wnc {

// ---------------------------------------------------------------------------
// Experiment specification ("wnc-spec/1"): a generator family, a dimension
// sweep, and a list of quantities to evaluate on every instance.
// ---------------------------------------------------------------------------

struct QuantitySpec {
  std::string name;
  json args;  // quantity-specific arguments (k_max, n, eps, ...)
  std::string mode = "exact";
};

struct ExperimentSpec {
  std::string version = "wnc-spec/1";
  std::uint64_t seed = 1;
  long long budget = 10'000'000;
  std::string generator;
  json generator_params;
  std::vector<int> sweep;  // dimensions (tree generator: heights)
  std::vector<QuantitySpec> quantities;
  std::string out;  // output stem; may be overridden on the command line
  json raw;         // original document, hashed into every report
};

inline const std::vector<std::string>& known_generators() {
  static const std::vector<std::string> g = {"lp_basis", "random_points",
                                             "characteristic_family_random", "dyadic_tree",
                                             "random_operator"};
  return g;
}

inline const std::vector<std::string>& known_quantities() {
  static const std::vector<std::string> q = {
      "uwn_profile",       "cesaro_subset_profile", "cesaro_prefix_profile",
      "chain_value",       "separation_value",      "prop13_audit",
      "dz_index",          "type_ratio",            "krein_probe",
      "overlap_profile",   "hilbert_audit",         "troyanski",
      "operator_norm",     "operator_chain_value",  "image_chain_audit"};
  return q;
}

/// Which instance payload a quantity consumes.
inline std::string quantity_payload(const std::string& q) {
  if (q == "overlap_profile" || q == "hilbert_audit") return "family";
  if (q == "operator_norm" || q == "operator_chain_value" || q == "image_chain_audit")
    return "operator";
  return "points";
}

inline std::string generator_payload(const std::string& g) {
  if (g == "characteristic_family_random") return "family";
  if (g == "random_operator") return "operator";
  return "points";
}

inline SearchMode mode_from_string(const std::string& s) {
  if (s == "exact") return SearchMode::Exact;
  if (s == "greedy") return SearchMode::Greedy;
  if (s == "beam") return SearchMode::Beam;
  throw SpecError("spec: unknown mode '" + s + "' (expected exact|greedy|beam)");
}

inline ExperimentSpec parse_experiment_spec(const json& j) {
  ExperimentSpec spec;
  spec.raw = j;
  if (!j.is_object()) throw SpecError("spec: expected a JSON object");
  if (j.value("version", "") != std::string("wnc-spec/1"))
    throw SpecError("spec: field 'version' must be \"wnc-spec/1\"");
  spec.version = "wnc-spec/1";
  if (j.contains("seed")) spec.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("budget")) {
    spec.budget = j.at("budget").get<long long>();
    if (spec.budget <= 0) throw SpecError("spec: field 'budget' must be positive");
  }
  if (!j.contains("generator") || !j.at("generator").is_object() ||
      !j.at("generator").contains("name"))
    throw SpecError("spec: field 'generator' must be an object with a 'name'");
  spec.generator = j.at("generator").at("name").get<std::string>();
  if (std::find(known_generators().begin(), known_generators().end(), spec.generator) ==
      known_generators().end())
    throw SpecError("spec: field 'generator.name': unknown generator '" + spec.generator + "'");
  spec.generator_params = j.at("generator");
  spec.generator_params.erase("name");

  if (!j.contains("sweep") || !j.at("sweep").is_object() || !j.at("sweep").contains("dims"))
    throw SpecError("spec: field 'sweep' must be an object with a 'dims' array");
  spec.sweep = j.at("sweep").at("dims").get<std::vector<int>>();
  if (spec.sweep.empty()) throw SpecError("spec: field 'sweep.dims' must be nonempty");
  for (int d : spec.sweep)
    if (d < 0 || d > 64) throw SpecError("spec: field 'sweep.dims': dimension out of range");

  if (!j.contains("quantities") || !j.at("quantities").is_array())
    throw SpecError("spec: field 'quantities' must be an array");
  for (const auto& q : j.at("quantities")) {
    QuantitySpec qs;
    qs.name = q.at("name").get<std::string>();
    if (std::find(known_quantities().begin(), known_quantities().end(), qs.name) ==
        known_quantities().end())
      throw SpecError("spec: field 'quantities': unknown quantity '" + qs.name + "'");
    if (quantity_payload(qs.name) != generator_payload(spec.generator))
      throw SpecError("spec: quantity '" + qs.name + "' does not apply to generator '" +
                      spec.generator + "'");
    qs.args = q;
    qs.args.erase("name");
    qs.args.erase("mode");
    if (q.contains("mode")) qs.mode = q.at("mode").get<std::string>();
    mode_from_string(qs.mode);
    spec.quantities.push_back(std::move(qs));
  }
  spec.out = j.value("out", "");
  return spec;
}

inline std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// ---------------------------------------------------------------------------
// Instances and records
// ---------------------------------------------------------------------------

struct Instance {
  std::string generator;
  std::string params;  // canonical parameter string for traceability
  int dim = 0;
  std::uint64_t seed = 0;
  std::optional<PointSet> points;
  std::optional<SetFamily> family;
  std::optional<MatrixOperator> op;
};

struct ReportRecord {
  std::string generator;
  std::string params;
  int dim = 0;
  std::string quantity;
  std::string argument;
  double value = 0.0;
  double gap = 0.0;
  std::string mode;
  std::string error;
  double wall_ms = 0.0;  // volatile; never part of canonical output
};

struct Report {
  std::string version = "wnc-spec/1";
  std::string spec_hash;
  std::uint64_t seed = 0;
  std::string environment;
  std::vector<ReportRecord> records;

  bool any_errors() const {
    for (const auto& r : records)
      if (!r.error.empty()) return true;
    return false;
  }
};

inline std::string environment_stamp() {
  return std::string("gcc ") + __VERSION__ + "; eigen " + std::to_string(EIGEN_WORLD_VERSION) +
         "." + std::to_string(EIGEN_MAJOR_VERSION) + "." + std::to_string(EIGEN_MINOR_VERSION);
}

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

namespace detail {

inline SpaceSpec space_template(const json& t, int dim, Rng& rng) {
  const std::string kind = t.value("kind", "lp");
  if (kind == "lp") {
    double p = 2.0;
    if (t.contains("p")) {
      if (t.at("p").is_string())
        p = kInf;
      else
        p = t.at("p").get<double>();
    }
    return SpaceSpec::lp(p, dim);
  }
  if (kind == "symmetric") {
    std::vector<double> w = t.value("weights", std::vector<double>{1.0});
    return SpaceSpec::symmetric_gauge(w, dim);
  }
  if (kind == "gauge") {
    const int pairs = t.value("generators", dim + 1);
    std::vector<Vector> gens;
    for (int i = 0; i < pairs; ++i) {
      Vector v = rng.uniform_vector(dim, -1.0, 1.0);
      gens.push_back(v);
      gens.push_back(-v);
    }
    // coordinate spikes keep the hull solid in every direction
    for (int i = 0; i < dim; ++i) {
      Vector e = Vector::Zero(dim);
      e[i] = 0.5;
      gens.push_back(e);
      gens.push_back(-e);
    }
    return SpaceSpec::gauge(gens, true);
  }
  throw SpecError("spec: unknown space template kind '" + kind + "'");
}

inline std::string params_string(const json& p) {
  if (p.empty()) return "";
  std::string out;
  for (auto it = p.begin(); it != p.end(); ++it) {
    if (!out.empty()) out += ";";
    out += it.key() + "=" + (it.value().is_string() ? it.value().get<std::string>()
                                                    : canonical_json(it.value()));
  }
  return out;
}

}  // namespace detail

inline Instance build_instance(const ExperimentSpec& spec, int dim, std::uint64_t inst_seed) {
  Instance inst;
  inst.generator = spec.generator;
  inst.params = detail::params_string(spec.generator_params);
  inst.dim = dim;
  inst.seed = inst_seed;
  Rng rng(inst_seed);
  const json& p = spec.generator_params;

  if (spec.generator == "lp_basis") {
    double pval = 2.0;
    if (p.contains("p")) pval = p.at("p").is_string() ? kInf : p.at("p").get<double>();
    inst.points = lp_basis(pval, dim).second;
  } else if (spec.generator == "random_points") {
    const int count = p.value("count", dim + 2);
    const double mag = p.value("magnitude", 1.0);
    SpaceSpec sp = detail::space_template(p.value("space", json::object()), dim, rng);
    std::vector<Vector> pts;
    for (int i = 0; i < count; ++i) pts.push_back(rng.uniform_vector(dim, -mag, mag));
    inst.points = make_point_set(sp, std::move(pts));
  } else if (spec.generator == "characteristic_family_random") {
    const int members = p.value("members", 5);
    const int max_size = std::max(1, p.value("max_size", 3));
    std::vector<std::vector<int>> mem;
    for (int jm = 0; jm < members; ++jm) {
      const int sz = rng.uniform_int(1, std::min(max_size, dim));
      std::vector<int> f;
      while (static_cast<int>(f.size()) < sz) {
        const int i = rng.uniform_int(0, dim - 1);
        if (std::find(f.begin(), f.end(), i) == f.end()) f.push_back(i);
      }
      mem.push_back(std::move(f));
    }
    inst.family = make_set_family(dim, std::move(mem));
    inst.points = characteristic_family(*inst.family).second;
  } else if (spec.generator == "dyadic_tree") {
    const double eps = p.value("eps", 1.0);
    auto [sp, tree] = build_dyadic_tree(dim, eps);  // sweep value is the height
    inst.points = tree_point_set(sp, tree);
  } else if (spec.generator == "random_operator") {
    Rng srng(Rng::derive(inst_seed, 0xa5a5));
    SpaceSpec dom = detail::space_template(p.value("domain", json::object()), dim, srng);
    SpaceSpec cod = detail::space_template(p.value("codomain", json::object()), dim, srng);
    Matrix M(dim, dim);
    for (int r = 0; r < dim; ++r)
      for (int c = 0; c < dim; ++c) M(r, c) = rng.uniform(-1.0, 1.0);
    inst.op = make_operator(std::move(M), std::move(dom), std::move(cod));
  } else {
    throw SpecError("spec: unknown generator '" + spec.generator + "'");
  }
  return inst;
}

// ---------------------------------------------------------------------------
// Quantity evaluation
// ---------------------------------------------------------------------------

namespace detail {

inline ReportRecord base_record(const Instance& inst, const std::string& quantity) {
  ReportRecord r;
  r.generator = inst.generator;
  r.params = inst.params;
  r.dim = inst.dim;
  r.quantity = quantity;
  return r;
}

inline void append_profile(const Instance& inst, const std::string& quantity, const Profile& P,
                           const char* arg_name, std::vector<ReportRecord>* out) {
  for (const auto& e : P.entries) {
    ReportRecord r = base_record(inst, quantity);
    r.argument = std::string(arg_name) + "=" + std::to_string(e.arg);
    r.value = e.value;
    r.gap = e.gap;
    r.mode = to_string(e.mode);
    out->push_back(std::move(r));
  }
}

}  // namespace detail

inline std::vector<ReportRecord> evaluate_quantity(const Instance& inst, const QuantitySpec& q,
                                                   const SolverOptions& opts,
                                                   std::uint64_t task_seed) {
  std::vector<ReportRecord> out;
  const SearchMode mode = mode_from_string(q.mode);

  if (q.name == "uwn_profile") {
    const int k_max = q.args.value("k_max", static_cast<int>(inst.points->size()) - 1);
    detail::append_profile(inst, q.name, uwn_profile(*inst.points, k_max, mode, opts), "k", &out);
  } else if (q.name == "cesaro_subset_profile") {
    const int k_max = q.args.value("k_max", static_cast<int>(inst.points->size()));
    detail::append_profile(inst, q.name, cesaro_subset_profile(*inst.points, k_max, mode, opts),
                           "k", &out);
  } else if (q.name == "cesaro_prefix_profile") {
    detail::append_profile(inst, q.name, cesaro_prefix_profile(*inst.points), "k", &out);
  } else if (q.name == "chain_value") {
    const int n = q.args.value("n", 2);
    auto r = chain_value(*inst.points, n, mode == SearchMode::Greedy ? SearchMode::Beam : mode,
                         opts);
    ReportRecord rec = detail::base_record(inst, q.name);
    rec.argument = "n=" + std::to_string(n);
    rec.value = r.value;
    rec.gap = r.gap;
    rec.mode = to_string(r.mode);
    out.push_back(std::move(rec));
  } else if (q.name == "separation_value") {
    const int n = q.args.value("n", 2);
    auto r = separation_value(*inst.points, n,
                              mode == SearchMode::Greedy ? SearchMode::Beam : mode, opts);
    ReportRecord rec = detail::base_record(inst, q.name);
    rec.argument = "n=" + std::to_string(n);
    rec.value = r.value;
    rec.gap = r.gap;
    rec.mode = to_string(r.mode);
    out.push_back(std::move(rec));
  } else if (q.name == "prop13_audit") {
    auto rep = prop13_audit(*inst.points, q.args.value("tol", 1e-6), opts);
    ReportRecord rec = detail::base_record(inst, q.name);
    rec.value = rep.pass ? 1.0 : 0.0;
    rec.gap = 0.0;
    rec.mode = "exact";
    out.push_back(std::move(rec));
  } else if (q.name == "dz_index") {
    const double eps = q.args.value("eps", 0.5);
    auto [n, trace] = dz_index(inst.points->space, *inst.points, eps, opts);
    ReportRecord rec = detail::base_record(inst, q.name);
    rec.argument = "eps=" + format_double(eps);
    rec.value = n;
    rec.mode = "exact";
    out.push_back(std::move(rec));
  } else if (q.name == "type_ratio") {
    const double p = q.args.value("p", 2.0);
    auto est = type_constant_estimate(*inst.points, p, task_seed, opts);
    ReportRecord rec = detail::base_record(inst, q.name);
    rec.argument = "p=" + format_double(p);
    rec.value = est.ratio;
    rec.mode = est.exact ? "exact" : "greedy";
    out.push_back(std::move(rec));
  } else if (q.name == "krein_probe") {
    const int n = q.args.value("n", 2);
    const int samples = q.args.value("samples", 8);
    auto rep = krein_probe(*inst.points, n, samples, task_seed, opts);
    ReportRecord a = detail::base_record(inst, q.name);
    a.argument = "n=" + std::to_string(n) + ";side=base";
    a.value = rep.base_value;
    a.gap = rep.base_gap;
    a.mode = "exact";
    out.push_back(std::move(a));
    ReportRecord b = detail::base_record(inst, q.name);
    b.argument = "n=" + std::to_string(n) + ";side=augmented";
    b.value = rep.augmented_value;
    b.gap = rep.augmented_gap;
    b.mode = "greedy";
    out.push_back(std::move(b));
  } else if (q.name == "overlap_profile") {
    const int n_max = q.args.value("n_max", static_cast<int>(inst.family->size()));
    detail::append_profile(inst, q.name, overlap_profile(*inst.family, n_max, mode, opts), "n",
                           &out);
  } else if (q.name == "hilbert_audit") {
    auto rep = hilbert_factorization_audit(*inst.family, q.args.value("trials", 64), task_seed,
                                           opts);
    ReportRecord rec = detail::base_record(inst, q.name);
    rec.value = rep.pass ? 1.0 : 0.0;
    rec.mode = "exact";
    out.push_back(std::move(rec));
  } else if (q.name == "troyanski") {
    const int n = std::min(q.args.value("n", inst.dim), inst.points->space.dim());
    std::vector<int> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), 0);
    auto rep = troyanski_average_check(inst.points->space, idx,
                                       SimplexWeights{Vector::Constant(n, 1.0 / n)}, 1e-9, opts);
    ReportRecord rec = detail::base_record(inst, q.name);
    rec.argument = "n=" + std::to_string(n);
    rec.value = rep.pass ? 1.0 : 0.0;
    rec.mode = "exact";
    out.push_back(std::move(rec));
  } else if (q.name == "operator_norm") {
    auto nb = operator_norm_bound(*inst.op);
    ReportRecord rec = detail::base_record(inst, q.name);
    rec.value = nb.upper;
    rec.gap = std::max(0.0, nb.upper - nb.lower);
    rec.mode = "exact";
    out.push_back(std::move(rec));
  } else if (q.name == "operator_chain_value") {
    const int n = q.args.value("n", 2);
    auto cands = default_ball_candidates(inst.op->domain, 64, task_seed);
    auto r = operator_chain_value(*inst.op, n, cands,
                                  mode == SearchMode::Greedy ? SearchMode::Beam : mode, opts);
    ReportRecord rec = detail::base_record(inst, q.name);
    rec.argument = "n=" + std::to_string(n);
    rec.value = r.value;
    rec.gap = r.gap;
    rec.mode = r.exact_candidates ? to_string(r.mode) : "greedy";
    out.push_back(std::move(rec));
  } else if (q.name == "image_chain_audit") {
    const int n = q.args.value("n", 2);
    std::vector<Vector> pts;
    for (int i = 0; i < inst.op->domain.dim(); ++i) {
      Vector e = Vector::Zero(inst.op->domain.dim());
      e[i] = 1.0;
      pts.push_back(e / inst.op->domain.norm(e));
    }
    auto A = make_point_set(inst.op->domain, std::move(pts));
    auto rep = image_chain_audit(*inst.op, A, {n}, 1e-7, opts);
    ReportRecord rec = detail::base_record(inst, q.name);
    rec.argument = "n=" + std::to_string(n);
    rec.value = rep.pass ? 1.0 : 0.0;
    rec.mode = "exact";
    out.push_back(std::move(rec));
  } else {
    throw SpecError("unknown quantity '" + q.name + "'");
  }
  return out;
}

// ---------------------------------------------------------------------------
// The runner: instance-level parallelism with per-task derived seeds, so
// results are independent of the thread count.
// ---------------------------------------------------------------------------

inline Report run(const ExperimentSpec& spec, int threads = 1) {
  Report report;
  report.spec_hash = hex64(fnv1a64(canonical_json(spec.raw)));
  report.seed = spec.seed;
  report.environment = environment_stamp();

  SolverOptions opts;
  opts.enum_budget = spec.budget;

  struct Task {
    Instance inst;
    QuantitySpec quantity;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  std::uint64_t inst_index = 0;
  for (int dim : spec.sweep) {
    const std::uint64_t inst_seed = Rng::derive(spec.seed, inst_index++);
    Instance inst = build_instance(spec, dim, inst_seed);
    std::uint64_t q_index = 0;
    for (const auto& q : spec.quantities)
      tasks.push_back({inst, q, Rng::derive(inst_seed, 0x1000 + q_index++)});
  }

  std::vector<std::vector<ReportRecord>> slots(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      const auto t0 = std::chrono::steady_clock::now();
      try {
        slots[i] = evaluate_quantity(tasks[i].inst, tasks[i].quantity, opts, tasks[i].seed);
      } catch (const std::exception& e) {
        ReportRecord rec = detail::base_record(tasks[i].inst, tasks[i].quantity.name);
        rec.error = e.what();
        slots[i] = {std::move(rec)};
      }
      const auto t1 = std::chrono::steady_clock::now();
      const double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
      for (auto& r : slots[i]) r.wall_ms = ms / static_cast<double>(slots[i].size());
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (auto& s : slots)
    for (auto& r : s) report.records.push_back(std::move(r));
  return report;
}

// ---------------------------------------------------------------------------
// Decomposition audit: piece n may let a unit functional act above eps on at
// most n points, i.e. U(A_n, n) <= eps.
// ---------------------------------------------------------------------------

struct DecompositionPiece {
  int index = 0;  // 1-based
  double u_value = 0.0;
  double u_gap = 0.0;
  double margin = 0.0;  // eps + tol - u_value
  bool pass = false;
  std::string error;
};

struct DecompositionAuditReport {
  double eps = 0.0;
  double tol = 1e-9;
  bool pass = true;
  std::vector<DecompositionPiece> pieces;
};

inline DecompositionAuditReport decomposition_audit(const std::vector<PointSet>& pieces,
                                                    double eps, double tol = 1e-9,
                                                    const SolverOptions& opts = {}) {
  DecompositionAuditReport rep;
  rep.eps = eps;
  rep.tol = tol;
  int n = 0;
  for (const auto& piece : pieces) {
    ++n;
    DecompositionPiece row;
    row.index = n;
    try {
      auto P = uwn_profile(piece, n, SearchMode::Exact, opts);
      const auto& e = P.at(n);
      row.u_value = e.value;
      row.u_gap = e.gap;
      row.margin = eps + tol - e.value;
      row.pass = e.value <= eps + tol;
    } catch (const std::exception& ex) {
      row.error = ex.what();
      row.pass = false;
    }
    rep.pass = rep.pass && row.pass;
    rep.pieces.push_back(std::move(row));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Emission: canonical JSON and CSV with a fixed column order. Volatile
// fields (wall time) are excluded so reruns are byte-identical.
// ---------------------------------------------------------------------------

inline json to_json(const Report& rep) {
  json j;
  j["version"] = rep.version;
  j["spec_hash"] = rep.spec_hash;
  j["seed"] = rep.seed;
  j["environment"] = rep.environment;
  json rs = json::array();
  for (const auto& r : rep.records) {
    json jr;
    jr["generator"] = r.generator;
    jr["params"] = r.params;
    jr["dim"] = r.dim;
    jr["quantity"] = r.quantity;
    jr["argument"] = r.argument;
    jr["value"] = r.value;
    jr["gap"] = r.gap;
    jr["mode"] = r.mode;
    jr["error"] = r.error;
    rs.push_back(jr);
  }
  j["records"] = rs;
  return j;
}

inline std::string report_csv(const Report& rep) {
  std::string out = "generator,params,dim,quantity,argument,value,gap,mode,error\n";
  for (const auto& r : rep.records) {
    out += csv_escape(r.generator) + "," + csv_escape(r.params) + "," + std::to_string(r.dim) +
           "," + csv_escape(r.quantity) + "," + csv_escape(r.argument) + "," +
           format_double(r.value) + "," + format_double(r.gap) + "," + r.mode + "," +
           csv_escape(r.error) + "\n";
  }
  return out;
}

inline json to_json(const DecompositionAuditReport& rep) {
  json j;
  j["eps"] = rep.eps;
  j["tol"] = rep.tol;
  j["pass"] = rep.pass;
  json ps = json::array();
  for (const auto& p : rep.pieces) {
    json jp;
    jp["piece"] = p.index;
    jp["u_value"] = p.u_value;
    jp["u_gap"] = p.u_gap;
    jp["margin"] = p.margin;
    jp["pass"] = p.pass;
    jp["error"] = p.error;
    ps.push_back(jp);
  }
  j["pieces"] = ps;
  return j;
}

}  // namespace wnc
