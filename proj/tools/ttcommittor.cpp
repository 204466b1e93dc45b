// ttcommittor: solve / validate / oracle driver.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ttc/errors.hpp"
#include "ttc/pipeline.hpp"

namespace {

struct Options {
  std::string config;
  std::string out = "out";
  std::string solution;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::size_t threads = 0;
  bool dry_run = false;
};

ttc::RunConfig load(const Options& o, CLI::App& sub) {
  ttc::Config cfg = o.config.empty() ? ttc::Config{} : ttc::Config::load(o.config);
  if (sub.count("--seed")) cfg.set("seed", std::to_string(o.seed));
  if (sub.count("--threads")) cfg.set("threads", std::to_string(o.threads));
  return ttc::run_config_from(cfg);
}

int report(const std::vector<ttc::Metric>& metrics) {
  int failed = 0;
  for (const auto& m : metrics) {
    std::printf("%-34s %-24s %-24s %s\n", m.name.c_str(), ttc::format_double(m.value).c_str(), m.tolerance.c_str(),
                m.pass.c_str());
    if (m.pass == "false") ++failed;
  }
  return failed ? 1 : 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Committor functions in tensor-train format"};
  app.set_version_flag("--version", std::string(TTC_VERSION));
  app.require_subcommand(1);
  Options o;
  auto add_common = [&](CLI::App* s) {
    s->add_option("--config", o.config, "Configuration file (key = value)")->check(CLI::ExistingFile);
    s->add_option("--seed", o.seed, "Random seed (overrides the config)");
    s->add_option("--out", o.out, "Output directory");
    s->add_option("--threads", o.threads, "Worker threads (default: TTC_THREADS or all cores)");
    s->add_flag("--dry-run", o.dry_run, "Validate the configuration and print the resolved plan");
  };
  auto* solve = app.add_subcommand("solve", "Assemble and solve the committor problem");
  auto* validate = app.add_subcommand("validate", "Run the configured validation checks on a solution");
  auto* oracle = app.add_subcommand("oracle", "Dense brute-force and 1D reference checks");
  for (auto* s : {solve, validate, oracle}) add_common(s);
  validate->add_option("--solution", o.solution, "Solution file or directory (default: <out>/solution.tt)");

  CLI11_PARSE(app, argc, argv);

  try {
    CLI::App* sub = app.get_subcommands().front();
    const ttc::RunConfig config = load(o, *sub);
    if (o.dry_run) {
      std::cout << "command=" << sub->get_name() << "\n" << config.plan();
      return 0;
    }
    if (sub == solve) {
      const auto sol = ttc::cmd_solve(config, o.out);
      std::printf("final objective %.17g at rho = %.17g, ranks", sol.objective_trace.empty() ? 0.0
                  : sol.objective_trace.back().objective, sol.final_rho);
      for (auto r : sol.Q.ranks()) std::printf(" %zu", r);
      std::printf("\nwrote %s\n", o.out.c_str());
      return 0;
    }
    if (sub == validate) {
      const std::filesystem::path solution = o.solution.empty() ? std::filesystem::path(o.out) / "solution.tt"
                                                                : std::filesystem::path(o.solution);
      return report(ttc::cmd_validate(config, solution, o.out));
    }
    return report(ttc::cmd_oracle(config, o.out));
  } catch (const ttc::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
