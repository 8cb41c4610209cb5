#include <CLI11.hpp>
#include <iostream>

#include "rsd/format.hpp"
#include "rsd/harness.hpp"

namespace {

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::size_t> jobs;
};

int run(rsd::ExperimentKind kind, const CommonFlags& flags) {
  rsd::ExperimentSpec spec = rsd::load_spec(flags.config, flags.seed);
  spec.kind = kind;
  if (flags.out) spec.out = *flags.out;
  if (flags.jobs) spec.jobs = *flags.jobs;
  spec.validate();

  const rsd::ResultSet results = rsd::run_experiment(spec);
  std::cout << rsd::to_string(kind) << ": " << results.rows.size() << " records";
  if (!spec.out.empty()) std::cout << " -> " << spec.out;
  std::cout << '\n';
  for (const auto& [k, v] : results.metadata) std::cout << "  " << k << " = " << v << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"randomized smoothing certification, attacks and probes"};
  app.require_subcommand(1);

  const std::vector<std::pair<std::string, rsd::ExperimentKind>> commands = {
      {"certify", rsd::ExperimentKind::kCertify},
      {"attack", rsd::ExperimentKind::kAttackSweep},
      {"probe-bs", rsd::ExperimentKind::kBinarySearchDist},
      {"slice", rsd::ExperimentKind::kSlice},
      {"profile", rsd::ExperimentKind::kDirectionProfile},
      {"sorm", rsd::ExperimentKind::kSormCheck},
  };

  CommonFlags flags;
  std::optional<rsd::ExperimentKind> chosen;
  for (const auto& [name, kind] : commands) {
    auto* sub = app.add_subcommand(name, "run the " + std::string(rsd::to_string(kind)) +
                                             " experiment");
    sub->add_option("--config", flags.config, "TOML experiment file")->required()->check(
        CLI::ExistingFile);
    sub->add_option("--seed", flags.seed, "master seed (overrides the file)");
    sub->add_option("--out", flags.out, "output directory (overrides the file)");
    sub->add_option("--jobs", flags.jobs, "worker threads")->check(CLI::PositiveNumber);
    sub->callback([&chosen, k = kind] { chosen = k; });
  }

  std::string report_dir;
  auto* report = app.add_subcommand("report", "recheck a run directory and re-render its figures");
  report->add_option("--out", report_dir, "run directory")->required()->check(
      CLI::ExistingDirectory);

  CLI11_PARSE(app, argc, argv);

  try {
    if (report->parsed()) {
      for (const auto& path : rsd::report(report_dir)) std::cout << path.string() << '\n';
      return 0;
    }
    return run(*chosen, flags);
  } catch (const rsd::SpecError& e) {
    std::cerr << "invalid spec: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
