#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "kdef/errors.hpp"
#include "kdef/io.hpp"

namespace {

// Exit codes: 0 success, 2 input error, 3 non-unitary factor, 4 method or
// verification disagreement, 5 size guard exceeded.
enum ExitCode {
  kOk = 0,
  kInputError = 2,
  kNonUnitary = 3,
  kDisagreement = 4,
  kGuardExceeded = 5,
};

void add_common_options(CLI::App* cmd, kdef::JobSpec& job, std::string& sizes_text) {
  cmd->add_option("--sizes", sizes_text, "factor sizes, e.g. 2,2,3 (bench: shapes joined by ';')");
  cmd->add_option("--seed", job.seed, "base random seed")->default_val(0);
  cmd->add_option("--tol", job.tolerance, "explicit rank tolerance (default: automatic)");
  cmd->add_option("--format", job.format, "output format")
      ->check(CLI::IsMember({"json", "csv", "text"}))
      ->default_val("json");
  cmd->add_option("--out", job.out_path, "output file (default: stdout)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"defect and feasible-space computations for Kronecker products of unitaries"};
  app.require_subcommand(1);

  kdef::JobSpec job;
  std::string sizes_text;

  CLI::App* cmd_defect = app.add_subcommand("defect", "defect report for a unitary product");
  add_common_options(cmd_defect, job, sizes_text);
  cmd_defect->add_option("--factors", job.factor_path, "JSON factor file");
  cmd_defect->add_flag("--haar", job.haar, "draw Haar factors for --sizes");
  cmd_defect->add_option("--method", job.method, "computation route")
      ->check(CLI::IsMember({"direct", "decomposed", "both"}))
      ->default_val("decomposed");
  cmd_defect->add_flag("--timings", job.timings, "include wall times in the JSON report");

  CLI::App* cmd_bound = app.add_subcommand("bound", "lower bound on the generalized defect");
  add_common_options(cmd_bound, job, sizes_text);

  CLI::App* cmd_verify = app.add_subcommand("verify", "direct-sum and invariant suites");
  add_common_options(cmd_verify, job, sizes_text);
  cmd_verify->add_option("--factors", job.factor_path, "JSON factor file");
  cmd_verify->add_flag("--haar", job.haar, "draw Haar factors for --sizes");

  CLI::App* cmd_sample = app.add_subcommand("sample", "Haar factor files and attainment campaigns");
  add_common_options(cmd_sample, job, sizes_text);
  cmd_sample->add_option("--trials", job.trials,
                         "campaign trials (0: write a factor file instead)");

  CLI::App* cmd_bench = app.add_subcommand("bench", "direct vs decomposed benchmark (CSV)");
  add_common_options(cmd_bench, job, sizes_text);
  cmd_bench->add_option("--trials", job.trials, "seeds per shape (default 5)");
  cmd_bench->add_option("--jobs", job.jobs, "concurrent trials");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (!sizes_text.empty()) job.size_grid = kdef::parse_size_grid(sizes_text);
    if (cmd_defect->parsed()) {
      job.command = "defect";
      kdef::run_defect(job);
    } else if (cmd_bound->parsed()) {
      job.command = "bound";
      kdef::run_bound(job);
    } else if (cmd_verify->parsed()) {
      job.command = "verify";
      if (!kdef::run_verify(job)) return kDisagreement;
    } else if (cmd_sample->parsed()) {
      job.command = "sample";
      kdef::run_sample(job);
    } else if (cmd_bench->parsed()) {
      job.command = "bench";
      kdef::run_bench(job);
    }
  } catch (const kdef::NonUnitaryError& e) {
    std::cerr << "error: " << e.what() << " (factor " << e.factor_index << ")\n";
    return kNonUnitary;
  } catch (const kdef::MethodDisagreementError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDisagreement;
  } catch (const kdef::GuardExceededError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kGuardExceeded;
  } catch (const kdef::InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kOk;
}
