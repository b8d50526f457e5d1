#include <CLI11.hpp>
#include <filesystem>
#include <iostream>

#include "wnc/wnc.hpp"

namespace {

using namespace wnc;

int cmd_run(const std::string& spec_path, std::uint64_t seed_override, bool has_seed,
            long long budget_override, const std::string& mode_override, int threads,
            std::string out, const std::string& format, bool with_timings) {
  json jspec;
  try {
    jspec = json::parse(read_file(spec_path));
  } catch (const std::exception& e) {
    std::cerr << "error: cannot parse spec: " << e.what() << "\n";
    return 1;
  }
  ExperimentSpec spec;
  try {
    if (has_seed) jspec["seed"] = seed_override;
    if (budget_override > 0) jspec["budget"] = budget_override;
    if (!mode_override.empty())
      for (auto& q : jspec.at("quantities")) q["mode"] = mode_override;
    spec = parse_experiment_spec(jspec);
  } catch (const std::exception& e) {
    std::cerr << "error: invalid spec: " << e.what() << "\n";
    return 1;
  }
  if (out.empty()) out = spec.out.empty() ? "report" : spec.out;

  Report rep = run(spec, threads);

  const auto parent = std::filesystem::path(out).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  if (format == "json" || format == "both")
    write_file(out + ".json", canonical_json(to_json(rep)) + "\n");
  if (format == "csv" || format == "both") write_file(out + ".csv", report_csv(rep));
  if (with_timings) {
    std::string t = "generator,params,dim,quantity,argument,wall_ms\n";
    for (const auto& r : rep.records)
      t += csv_escape(r.generator) + "," + csv_escape(r.params) + "," + std::to_string(r.dim) +
           "," + csv_escape(r.quantity) + "," + csv_escape(r.argument) + "," +
           format_double(r.wall_ms) + "\n";
    write_file(out + ".timings.csv", t);
  }

  int errors = 0;
  for (const auto& r : rep.records)
    if (!r.error.empty()) ++errors;
  std::cout << rep.records.size() << " records (" << errors << " errored), spec hash "
            << rep.spec_hash << ", written to " << out << ".{json,csv}\n";
  return errors ? 2 : 0;
}

int cmd_audit(const std::string& pieces_path, double eps, double tol, const std::string& out) {
  std::vector<PointSet> pieces;
  try {
    json j = json::parse(read_file(pieces_path));
    for (const auto& p : j.at("pieces")) pieces.push_back(point_set_from_json(p));
  } catch (const std::exception& e) {
    std::cerr << "error: invalid pieces file: " << e.what() << "\n";
    return 1;
  }
  auto rep = decomposition_audit(pieces, eps, tol);
  for (const auto& p : rep.pieces) {
    if (!p.error.empty()) {
      std::cout << "piece " << p.index << ": ERROR " << p.error << "\n";
    } else {
      std::cout << "piece " << p.index << ": U=" << format_double(p.u_value)
                << " margin=" << format_double(p.margin) << (p.pass ? " pass" : " FAIL") << "\n";
    }
  }
  std::cout << (rep.pass ? "decomposition audit: pass" : "decomposition audit: FAIL") << "\n";
  if (!out.empty()) write_file(out + ".json", canonical_json(to_json(rep)) + "\n");
  return rep.pass ? 0 : 2;
}

// brute-force simplex grid of mesh 1/M over the columns of A
double grid_min_norm(const SpaceSpec& sp, const std::vector<Vector>& pts, int M) {
  const int n = static_cast<int>(pts.size());
  double best = kInf;
  std::vector<int> comp(static_cast<std::size_t>(n), 0);
  std::function<void(int, int)> rec = [&](int idx, int rem) {
    if (idx == n - 1) {
      comp[static_cast<std::size_t>(idx)] = rem;
      Vector y = Vector::Zero(sp.dim());
      for (int i = 0; i < n; ++i)
        y += (static_cast<double>(comp[static_cast<std::size_t>(i)]) / M) *
             pts[static_cast<std::size_t>(i)];
      best = std::min(best, sp.norm(y));
      return;
    }
    for (int t = 0; t <= rem; ++t) {
      comp[static_cast<std::size_t>(idx)] = t;
      rec(idx + 1, rem - t);
    }
  };
  rec(0, M);
  return best;
}

int cmd_oracle_check(int instances, std::uint64_t seed, const std::string& out) {
  Rng rng(seed);
  const int mesh = 20;
  int failures = 0;
  json rows = json::array();
  for (int t = 0; t < instances; ++t) {
    const int dim = rng.uniform_int(2, 3);
    SpaceSpec sp = [&]() {
      switch (rng.uniform_int(0, 4)) {
        case 0: return SpaceSpec::lp(1, dim);
        case 1: return SpaceSpec::lp(2, dim);
        case 2: return SpaceSpec::lp(kInf, dim);
        case 3: return SpaceSpec::lp(1.5, dim);
        default: return SpaceSpec::symmetric_gauge({2.0, 1.0}, dim);
      }
    }();
    const bool pair = t % 2 == 1;
    json row;
    row["instance"] = t;
    row["space"] = sp.describe();
    if (!pair) {
      const int n = rng.uniform_int(1, 5);
      std::vector<Vector> pts;
      for (int i = 0; i < n; ++i) pts.push_back(rng.uniform_vector(dim, -1.0, 1.0));
      auto cert = min_norm_point(sp, pts);
      const double grid = grid_min_norm(sp, pts, mesh);
      double r = 0.0;
      for (const auto& p : pts) r = std::max(r, sp.norm(p));
      const double slack = r * (n - 1) / static_cast<double>(mesh);
      const bool ok = cert.value - cert.gap <= grid + 1e-9 && cert.value >= grid - slack - 1e-9;
      row["quantity"] = "min_norm_point";
      row["value"] = cert.value;
      row["gap"] = cert.gap;
      row["grid"] = grid;
      row["slack"] = slack;
      row["pass"] = ok;
      if (!ok) ++failures;
    } else {
      const int np = rng.uniform_int(1, 3), nq = rng.uniform_int(1, 2);
      std::vector<Vector> P, Q;
      for (int i = 0; i < np; ++i) P.push_back(rng.uniform_vector(dim, -1.0, 1.0));
      for (int i = 0; i < nq; ++i) Q.push_back(rng.uniform_vector(dim, -1.0, 1.0));
      auto cert = hull_distance(sp, P, Q);
      // grid over both weight simplices
      double grid = kInf;
      std::vector<Vector> diffs;
      const int MP = mesh, MQ = mesh;
      std::vector<int> cp(static_cast<std::size_t>(np), 0);
      std::function<void(int, int)> recp = [&](int idx, int rem) {
        if (idx == np - 1) {
          cp[static_cast<std::size_t>(idx)] = rem;
          Vector x = Vector::Zero(dim);
          for (int i = 0; i < np; ++i)
            x += (static_cast<double>(cp[static_cast<std::size_t>(i)]) / MP) *
                 P[static_cast<std::size_t>(i)];
          std::vector<int> cq(static_cast<std::size_t>(nq), 0);
          std::function<void(int, int)> recq = [&](int jdx, int remq) {
            if (jdx == nq - 1) {
              cq[static_cast<std::size_t>(jdx)] = remq;
              Vector y = Vector::Zero(dim);
              for (int i = 0; i < nq; ++i)
                y += (static_cast<double>(cq[static_cast<std::size_t>(i)]) / MQ) *
                     Q[static_cast<std::size_t>(i)];
              grid = std::min(grid, sp.norm(x - y));
              return;
            }
            for (int v = 0; v <= remq; ++v) {
              cq[static_cast<std::size_t>(jdx)] = v;
              recq(jdx + 1, remq - v);
            }
          };
          recq(0, MQ);
          return;
        }
        for (int v = 0; v <= rem; ++v) {
          cp[static_cast<std::size_t>(idx)] = v;
          recp(idx + 1, rem - v);
        }
      };
      recp(0, MP);
      double r = 0.0;
      for (const auto& p : P) r = std::max(r, sp.norm(p));
      for (const auto& q : Q) r = std::max(r, sp.norm(q));
      const double slack = r * (np + nq - 2) / static_cast<double>(mesh);
      const bool ok = cert.value - cert.gap <= grid + 1e-9 && cert.value >= grid - slack - 1e-9;
      row["quantity"] = "hull_distance";
      row["value"] = cert.value;
      row["gap"] = cert.gap;
      row["grid"] = grid;
      row["slack"] = slack;
      row["pass"] = ok;
      if (!ok) ++failures;
    }
    rows.push_back(row);
  }
  std::cout << instances << " oracle comparisons, " << failures << " failures\n";
  if (!out.empty()) {
    json j;
    j["seed"] = seed;
    j["rows"] = rows;
    write_file(out + ".json", canonical_json(j) + "\n");
  }
  return failures ? 2 : 0;
}

int cmd_emit(const std::string& report_path, const std::string& format, const std::string& out) {
  json j;
  try {
    j = json::parse(read_file(report_path));
  } catch (const std::exception& e) {
    std::cerr << "error: cannot parse report: " << e.what() << "\n";
    return 1;
  }
  Report rep;
  try {
    rep.version = j.at("version").get<std::string>();
    rep.spec_hash = j.at("spec_hash").get<std::string>();
    rep.seed = j.at("seed").get<std::uint64_t>();
    rep.environment = j.at("environment").get<std::string>();
    for (const auto& r : j.at("records")) {
      ReportRecord rec;
      rec.generator = r.at("generator").get<std::string>();
      rec.params = r.at("params").get<std::string>();
      rec.dim = r.at("dim").get<int>();
      rec.quantity = r.at("quantity").get<std::string>();
      rec.argument = r.at("argument").get<std::string>();
      rec.value = r.at("value").get<double>();
      rec.gap = r.at("gap").get<double>();
      rec.mode = r.at("mode").get<std::string>();
      rec.error = r.at("error").get<std::string>();
      rep.records.push_back(std::move(rec));
    }
  } catch (const std::exception& e) {
    std::cerr << "error: malformed report: " << e.what() << "\n";
    return 1;
  }
  if (format == "json" || format == "both")
    write_file(out + ".json", canonical_json(to_json(rep)) + "\n");
  if (format == "csv" || format == "both") write_file(out + ".csv", report_csv(rep));
  std::cout << "re-emitted " << rep.records.size() << " records to " << out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wnc: finite profiles, chains, separations and derivation indices for "
               "weak-noncompactness experiments"};
  app.require_subcommand(1);

  // run
  std::string spec_path, out, format = "both", mode_override;
  std::uint64_t seed = 0;
  long long budget = 0;
  int threads = 1;
  bool with_timings = false;
  auto* run_cmd = app.add_subcommand("run", "execute an experiment spec (wnc-spec/1)");
  run_cmd->add_option("spec", spec_path, "experiment spec JSON")->required();
  auto* seed_opt = run_cmd->add_option("--seed", seed, "override the spec seed");
  run_cmd->add_option("--budget", budget, "override the enumeration budget");
  run_cmd->add_option("--mode", mode_override, "force mode for all quantities (exact|greedy|beam)");
  run_cmd->add_option("--threads", threads, "worker threads")->default_val(1);
  run_cmd->add_option("--out", out, "output stem (default: spec's 'out' or 'report')");
  run_cmd->add_option("--format", format, "csv|json|both")->default_val("both");
  run_cmd->add_flag("--with-timings", with_timings, "also write a (non-canonical) timings CSV");

  // audit-decomposition
  std::string pieces_path, audit_out;
  double eps = 0.5, tol = 1e-9;
  auto* audit_cmd =
      app.add_subcommand("audit-decomposition", "check U(A_n, n) <= eps for every piece");
  audit_cmd->add_option("pieces", pieces_path, "JSON file with {\"pieces\": [point sets]}")
      ->required();
  audit_cmd->add_option("--eps", eps, "decomposition level")->required();
  audit_cmd->add_option("--tol", tol, "comparison tolerance")->default_val(1e-9);
  audit_cmd->add_option("--out", audit_out, "write the audit report JSON to this stem");

  // oracle-check
  int instances = 100;
  std::uint64_t ocheck_seed = 20210228;
  std::string ocheck_out;
  auto* oracle_cmd = app.add_subcommand(
      "oracle-check", "compare the certified solvers against simplex-grid brute force");
  oracle_cmd->add_option("--instances", instances, "number of random instances")->default_val(100);
  oracle_cmd->add_option("--seed", ocheck_seed, "base seed");
  oracle_cmd->add_option("--out", ocheck_out, "write comparison rows JSON to this stem");

  // emit
  std::string report_path, emit_format = "csv", emit_out = "report";
  auto* emit_cmd = app.add_subcommand("emit", "re-emit a report deterministically");
  emit_cmd->add_option("report", report_path, "report JSON")->required();
  emit_cmd->add_option("--format", emit_format, "csv|json|both")->default_val("csv");
  emit_cmd->add_option("--out", emit_out, "output stem")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd)
      return cmd_run(spec_path, seed, seed_opt->count() > 0, budget, mode_override, threads, out,
                     format, with_timings);
    if (*audit_cmd) return cmd_audit(pieces_path, eps, tol, audit_out);
    if (*oracle_cmd) return cmd_oracle_check(instances, ocheck_seed, ocheck_out);
    if (*emit_cmd) return cmd_emit(report_path, emit_format, emit_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
