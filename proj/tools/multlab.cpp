#include "multlab/cli/config.hpp"
#include "multlab/cli/explain.hpp"
#include "multlab/cli/runner.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

int main(int argc, char** argv) {
  CLI::App app{"multlab: multiplicities of families of monomial ideals"};
  app.require_subcommand(1);

  std::string config_path;
  multlab::cli::RunOptions opts;
  std::string out_dir = ".";
  std::string cache;
  unsigned threads = 0;
  std::int64_t horizon = 0;
  double tol = 0;
  auto* run = app.add_subcommand("run", "run the tasks of a job file");
  run->add_option("config", config_path, "job file (JSON)")->required();
  run->add_option("--out", out_dir, "output directory");
  auto* cache_opt = run->add_option("--cache", cache, "length cache file");
  auto* threads_opt = run->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  auto* horizon_opt = run->add_option("--horizon", horizon, "override every task horizon")->check(CLI::Range(4, 1 << 30));
  auto* tol_opt = run->add_option("--tol", tol, "relative tolerance")->check(CLI::PositiveNumber);

  std::string check;
  auto* explain = app.add_subcommand("explain", "describe what a check verifies");
  explain->add_option("check", check, "check name")->required();

  CLI11_PARSE(app, argc, argv);

  if (*explain) {
    auto text = multlab::cli::explain(check);
    if (!text) {
      std::cerr << "unknown check \"" << check << "\"; known checks:";
      for (const auto& [name, _] : multlab::cli::explanations()) std::cerr << ' ' << name;
      std::cerr << '\n';
      return 1;
    }
    std::cout << check << ": " << *text << '\n';
    return 0;
  }

  std::ifstream in(config_path);
  if (!in) {
    std::cerr << "error: cannot open " << config_path << '\n';
    return 1;
  }
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    auto job = multlab::cli::parse_config(buf.str());
    opts.out_dir = out_dir;
    if (*cache_opt) opts.cache = cache;
    if (*threads_opt) opts.threads = threads;
    if (*horizon_opt) opts.horizon = horizon;
    if (*tol_opt) opts.tol = tol;
    opts.log = &std::cerr;
    auto result = multlab::cli::run(job, opts);
    return result.exit_code;
  } catch (const multlab::cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
