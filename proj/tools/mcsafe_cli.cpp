#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "mcsafe/checks.hpp"
#include "mcsafe/io.hpp"
#include "mcsafe/scenario.hpp"
#include "mcsafe/sim.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitSafetyViolation = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitNumericalFailure = 3;

constexpr double kViolationTol = 1e-6;

struct CommonOptions {
  std::string config_path;
  std::string out_dir = ".";
  double duration = -1.0;
  bool no_filter = false;
  uint64_t seed = 0;
  bool seed_given = false;
};

mcsafe::Scenario load(const CommonOptions& opt) {
  mcsafe::Scenario sc = opt.config_path.empty()
                            ? mcsafe::paper_scenario()
                            : mcsafe::load_scenario(opt.config_path);
  if (opt.duration >= 0.0) sc.duration = opt.duration;
  if (opt.no_filter) sc.filter_enabled = false;
  if (opt.seed_given) sc.seed = opt.seed;
  sc.validate();
  return sc;
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path);
  if (!out) {
    throw mcsafe::ConfigError("cannot write output file: " + path.string());
  }
  out << contents;
}

void print_report_summary(const mcsafe::SafetyReport& rep, bool filter_enabled) {
  auto line = [](const char* name, const mcsafe::FamilyReport& fam) {
    std::cout << "  min " << name << " = " << fam.min_value << " at t=" << fam.min_time
              << "s, " << fam.violations.size() << " violation interval(s)\n";
  };
  std::cout << (filter_enabled ? "safety filter: ON\n" : "safety filter: OFF\n");
  line("h_omega", rep.angular_velocity);
  line("h0_tilt", rep.tilt);
  line("h0_vel ", rep.velocity);
  line("h0_pos ", rep.position);
  std::cout << "  relaxed QP steps: " << rep.relaxed_steps
            << ", saturated steps: " << rep.saturated_steps << "\n";
  if (filter_enabled) {
    std::cout << "  filter time: mean " << rep.filter_time_mean_us << " us, max "
              << rep.filter_time_max_us << " us\n";
  }
}

int cmd_run(const CommonOptions& opt) {
  mcsafe::Scenario sc = load(opt);
  const mcsafe::SimResult result = mcsafe::run(sc);

  std::filesystem::create_directories(opt.out_dir);
  {
    std::ofstream csv(std::filesystem::path(opt.out_dir) / "trajectory.csv");
    mcsafe::write_trajectory_csv(csv, result);
  }
  write_file(std::filesystem::path(opt.out_dir) / "report.json",
             mcsafe::report_to_json(result.report, sc).dump(2) + "\n");

  print_report_summary(result.report, sc.filter_enabled);
  if (sc.filter_enabled && result.report.any_violation(kViolationTol)) {
    std::cerr << "safety violation under the active filter\n";
    return kExitSafetyViolation;
  }
  return kExitOk;
}

int cmd_compare(const CommonOptions& opt) {
  mcsafe::Scenario sc = load(opt);

  mcsafe::Scenario filtered = sc;
  filtered.filter_enabled = true;
  const mcsafe::SimResult on = mcsafe::run(filtered);

  mcsafe::Scenario nominal = sc;
  nominal.filter_enabled = false;
  const mcsafe::SimResult off = mcsafe::run(nominal);

  std::filesystem::create_directories(opt.out_dir);
  write_file(std::filesystem::path(opt.out_dir) / "compare.json",
             mcsafe::compare_to_json(on.report, off.report, sc).dump(2) + "\n");

  std::cout << "=== filtered run ===\n";
  print_report_summary(on.report, true);
  std::cout << "=== nominal run ===\n";
  print_report_summary(off.report, false);

  return on.report.any_violation(kViolationTol) ? kExitSafetyViolation : kExitOk;
}

int cmd_check(const CommonOptions& opt, bool inject_sign_error) {
  mcsafe::Scenario sc = load(opt);
  mcsafe::checks::CheckOptions copt;
  copt.seed = opt.seed_given ? opt.seed : 1;
  copt.inject_sign_error = inject_sign_error;

  const auto suites = mcsafe::checks::run_property_suites(copt, sc.safety, sc.vehicle);
  bool all_passed = true;
  for (const auto& s : suites) {
    std::cout << (s.passed ? "[PASS] " : "[FAIL] ") << s.name << ": " << s.cases
              << " cases, worst residual " << s.worst << " (tolerance " << s.tolerance
              << ")\n";
    all_passed = all_passed && s.passed;
  }
  return all_passed ? kExitOk : kExitNumericalFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CBF quadratic-program safety filter for multicopters"};
  app.require_subcommand(1);

  CommonOptions opt;
  bool inject_sign_error = false;

  auto add_common = [&opt](CLI::App* cmd) {
    cmd->add_option("--config", opt.config_path,
                    "scenario config file (JSON); built-in default scenario if omitted")
        ->check(CLI::ExistingFile);
    cmd->add_option("--out-dir", opt.out_dir, "output directory");
    cmd->add_option("--duration", opt.duration, "override simulation duration [s]");
    cmd->add_flag("--no-safety-filter", opt.no_filter, "disable the safety filter");
    cmd->add_option_function<uint64_t>(
           "--seed",
           [&opt](const uint64_t& s) {
             opt.seed = s;
             opt.seed_given = true;
           },
           "seed for randomized harnesses");
  };

  CLI::App* run_cmd =
      app.add_subcommand("run", "simulate one scenario; writes trajectory.csv and report.json");
  add_common(run_cmd);

  CLI::App* compare_cmd = app.add_subcommand(
      "compare", "run with and without the filter; writes compare.json");
  add_common(compare_cmd);

  CLI::App* check_cmd = app.add_subcommand(
      "check", "run the derivative/affinity/certificate/QP property suites");
  add_common(check_cmd);
  check_cmd
      ->add_flag("--inject-sign-error", inject_sign_error,
                 "self-test canary: corrupt one constraint row so the suites must fail")
      ->group("");  // hidden

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfigError;
  }

  try {
    if (run_cmd->parsed()) return cmd_run(opt);
    if (compare_cmd->parsed()) return cmd_compare(opt);
    if (check_cmd->parsed()) return cmd_check(opt, inject_sign_error);
  } catch (const mcsafe::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumericalFailure;
  }
  return kExitConfigError;
}
