#pragma once

#include "multlab/cli/cache.hpp"
#include "multlab/cli/config.hpp"
#include "multlab/colon_theorems.hpp"
#include "multlab/limits.hpp"
#include "multlab/report.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace multlab::cli {

inline constexpr std::int64_t kDefaultHorizon = 100;

struct RunOptions {
  std::filesystem::path out_dir = ".";
  std::optional<std::string> cache;
  std::optional<unsigned> threads;
  std::optional<std::int64_t> horizon;
  std::optional<double> tol;
  std::ostream* log = nullptr;
};

struct TaskResult {
  std::string name;
  std::string op;
  CheckReport report;
  std::optional<std::string> error;
  std::vector<std::string> csv_files;
};

struct RunResult {
  std::vector<TaskResult> tasks;
  int exit_code = 0;
};

/// 0 when every task passes (or is not applicable), 2 on any failure,
/// 3 when something is inconclusive and nothing failed.
inline int exit_code_for(const std::vector<TaskResult>& tasks) {
  bool inconclusive = false;
  for (const auto& t : tasks) {
    if (t.report.status == Status::fail) return 2;
    if (t.report.status == Status::inconclusive) inconclusive = true;
  }
  return inconclusive ? 3 : 0;
}

namespace detail {

inline CheckReport verdict_report(const std::string& check, bool passed, const std::string& failure) {
  CheckReport r{check};
  r.status = passed ? Status::pass : Status::fail;
  r.add("passed", passed);
  if (!passed) r.add("first_failure", failure);
  return r;
}

inline CheckReport run_task(const TaskSpec& t, const JobConfig& job, const std::map<std::string, IdealFamily>& fams,
                            std::int64_t N, const Tolerance& tol, const EvalOptions& opts) {
  auto fam = [&](const std::optional<std::string>& ref) -> const IdealFamily& { return fams.at(*ref); };
  auto ideal = [&](const std::optional<std::string>& ref) -> const MonomialIdeal& { return job.ideals.at(*ref); };
  const std::string& op = t.op;

  if (op == "mult" || op == "epsilon") {
    const IdealFamily& F = fam(t.family);
    LimitEstimate est = op == "mult" ? ew_multiplicity(F, N, tol, opts) : epsilon_limit(F, N, tol, opts);
    CheckReport r{op};
    r.add(op == "mult" ? "ew" : "epsilon", est.limit);
    r.add("residual", est.residual);
    r.add("converged", est.converged);
    bool ok = est.converged;
    if (op == "mult") {
      if (auto exact = exact_family_multiplicity(F)) r.add("exact", *exact);
    }
    if (t.expect) {
      const bool agrees = tol.agree(est.limit, to_double(*t.expect));
      r.add("expected", *t.expect);
      r.add("agrees_with_expected", agrees);
      ok = ok && agrees;
    }
    r.status = ok ? Status::pass : Status::fail;
    r.series = {{op, est}};
    return r;
  }
  if (op == "volmult") return volume_multiplicity_check(fam(t.family), N, tol, opts).report();
  if (op == "minkowski") return minkowski_check(fam(t.left), fam(t.right), N, tol, opts).report();
  if (op == "ar") {
    auto v = ar_check(fam(t.family), *t.r, N);
    CheckReport r = verdict_report("ar", v.passed, v.first_failure ? "n = " + std::to_string(*v.first_failure) : "");
    r.add("r", std::to_string(*t.r));
    return r;
  }
  if (op == "colon-limit") {
    const IdealFamily& F = fam(t.family);
    ColonReport c = colon_limit(F, ideal(t.ideal), N, tol, opts);
    return c.report("colon-limit");
  }
  if (op == "rees") return rees_horizon_check(fam(t.left), fam(t.right), ideal(t.ideal), N, tol, opts).report();
  if (op == "weakep") return weakep_limit(fam(t.family), ideal(t.ideal), *t.r, N, tol, opts).report();
  if (op == "shift") {
    const IdealFamily& F = fam(t.family);
    if (F.kind() != FamilyKind::divisorial) throw PreconditionError("shift needs a divisorial family");
    return divisorial_shift(*F.slabs(), ideal(t.ideal), N, tol, opts).report();
  }
  if (op == "closure") return closure_equal_mult_check(fam(t.left), fam(t.right), N, tol, opts).report();
  if (op == "noetherian-colon") return noetherian_colon_check(ideal(t.base), ideal(t.ideal), N, tol, opts).report();
  if (op == "minkowski-equality") {
    return minkowski_equality_check(fam(t.left), fam(t.right), ideal(t.ideal), N, tol, opts).report();
  }
  if (op == "weakep-noetherian") {
    return weakep_noetherian_check(ideal(t.base), ideal(t.ideal), N, tol, opts).report();
  }
  if (op == "filtration") {
    auto v = verify_filtration(fam(t.family), N);
    return verdict_report("filtration", v.passed, v.first_failure ? "n = " + std::to_string(*v.first_failure) : "");
  }
  if (op == "weakly-graded") {
    const IdealFamily& F = fam(t.family);
    std::optional<Exponent> c = t.witness ? std::optional<Exponent>(Exponent(*t.witness)) : F.meta().witness;
    if (!c) throw PreconditionError("family declares no weakly graded witness and none was given");
    auto v = verify_weakly_graded(F, *c, N);
    CheckReport r = verdict_report(
        "weakly-graded", v.passed,
        v.first_failure ? "(m, n) = (" + std::to_string(v.first_failure->first) + ", " +
                              std::to_string(v.first_failure->second) + ")"
                        : "");
    r.add("witness", c->str());
    return r;
  }
  if (op == "bounded-below") {
    const IdealFamily& F = fam(t.family);
    std::optional<std::int64_t> s = t.s ? t.s : F.meta().linear_bound;
    if (!s) throw PreconditionError("family declares no linear bound and none was given");
    auto v = verify_bounded_below(F, *s, N);
    CheckReport r = verdict_report("bounded-below", v.passed,
                                   v.first_failure ? "n = " + std::to_string(*v.first_failure) : "");
    r.add("s", std::to_string(*s));
    return r;
  }
  throw InternalError("unhandled op " + op);
}

inline nlohmann::ordered_json task_json(const TaskResult& t) {
  nlohmann::ordered_json o;
  o["name"] = t.name;
  o["op"] = t.op;
  o["status"] = status_name(t.report.status);
  nlohmann::ordered_json details = nlohmann::ordered_json::object();
  for (const auto& [k, v] : t.report.details) details[k] = v;
  o["details"] = details;
  if (t.error) o["error"] = *t.error;
  o["csv"] = t.csv_files;
  return o;
}

}  // namespace detail

/// Runs every task of the job, writing CSV files, report.txt and report.json
/// into opts.out_dir. A task that throws is recorded as a failure.
inline RunResult run(const JobConfig& job, const RunOptions& opts) {
  namespace fs = std::filesystem;
  fs::create_directories(opts.out_dir);

  std::unique_ptr<LengthCache> cache;
  const std::optional<std::string> cache_path = opts.cache ? opts.cache : job.cache;
  if (cache_path) {
    cache = std::make_unique<LengthCache>(*cache_path);
    if (opts.log) {
      for (const auto& w : cache->warnings()) *opts.log << "warning: " << w << '\n';
    }
  }
  EvalOptions eval;
  eval.threads = opts.threads ? *opts.threads : (job.threads ? *job.threads : default_thread_count());
  eval.store = cache.get();

  const auto fams = build_families(job);
  RunResult result;
  for (const auto& t : job.tasks) {
    TaskResult tr{t.name, t.op, CheckReport{t.op}, std::nullopt, {}};
    const std::int64_t N = opts.horizon ? *opts.horizon : (t.horizon ? *t.horizon : kDefaultHorizon);
    Tolerance tol;
    if (t.tolerance) tol.rel = *t.tolerance;
    if (t.abs_tolerance) tol.abs = *t.abs_tolerance;
    if (opts.tol) tol.rel = *opts.tol;
    try {
      tr.report = detail::run_task(t, job, fams, N, tol, eval);
    } catch (const CacheError&) {
      throw;
    } catch (const std::exception& e) {
      tr.report.status = Status::fail;
      tr.error = e.what();
      tr.report.add("error", e.what());
    }
    tr.report.add("horizon", std::to_string(N));
    const std::string stem = t.output ? *t.output : t.name;
    for (const auto& [series, est] : tr.report.series) {
      const std::string file = tr.report.series.size() == 1 ? stem + ".csv" : stem + "-" + series + ".csv";
      std::ofstream out(opts.out_dir / file);
      write_csv(out, est);
      tr.csv_files.push_back(file);
    }
    if (opts.log) *opts.log << t.name << ": " << status_name(tr.report.status) << '\n';
    result.tasks.push_back(std::move(tr));
  }
  result.exit_code = exit_code_for(result.tasks);

  std::ofstream txt(opts.out_dir / "report.txt");
  for (const auto& t : result.tasks) {
    txt << t.name << " [" << t.op << "]: " << status_name(t.report.status) << '\n';
    for (const auto& [k, v] : t.report.details) txt << "  " << k << " = " << v << '\n';
  }
  txt << "exit code: " << result.exit_code << '\n';

  nlohmann::ordered_json doc;
  doc["tasks"] = nlohmann::ordered_json::array();
  for (const auto& t : result.tasks) doc["tasks"].push_back(detail::task_json(t));
  doc["exit_code"] = result.exit_code;
  std::ofstream js(opts.out_dir / "report.json");
  js << doc.dump(2) << '\n';
  return result;
}

}  // namespace multlab::cli
