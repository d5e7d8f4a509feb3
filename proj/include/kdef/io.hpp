#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kdef/bounds.hpp"
#include "kdef/engine.hpp"
#include "kdef/factors.hpp"
#include "kdef/matrix.hpp"

namespace kdef {

// --- matrix and factor files -------------------------------------------------
//
// A matrix file is a JSON object { "rows": int, "cols": int,
// "data": [[re, im], ...] } with data row-major and reals carrying full double
// precision. A factor file is either a single matrix object (r = 1) or a JSON
// array of matrix objects.

std::string matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const std::string& text);

FactorList parse_factor_file(const std::string& path);
std::string factors_to_json(const std::vector<ComplexMatrix>& factors);

// --- report serialization ----------------------------------------------------

// JSON form of a DefectReport. Wall times vary run to run, so they are only
// included on request; everything else is a deterministic function of the
// inputs and the output is byte-stable for fixed inputs.
std::string report_to_json(const DefectReport& report, bool include_timings = false);
DefectReport report_from_json(const std::string& text);

std::string report_to_csv(const DefectReport& report);
std::string report_to_text(const DefectReport& report);

std::string bound_to_json(const BoundBreakdown& breakdown);
std::string bound_to_csv(const BoundBreakdown& breakdown);
std::string bound_to_text(const BoundBreakdown& breakdown);

// --- jobs --------------------------------------------------------------------

struct JobSpec {
  std::string command;                  // defect | bound | verify | sample | bench
  std::optional<std::string> factor_path;
  std::vector<std::vector<int>> size_grid;  // parsed --sizes (bench may carry several)
  bool haar = false;
  std::uint64_t seed = 0;
  std::string method = "decomposed";    // defect only: direct | decomposed | both
  std::optional<double> tolerance;      // explicit rank tolerance
  std::string format = "json";          // json | csv | text
  int jobs = 1;
  int trials = 0;                       // sample campaigns and bench seeds per shape
  bool timings = false;
  std::optional<std::string> out_path;  // default: stdout
};

// Parse "2,2,3" into one shape; bench accepts several shapes joined by ';'.
std::vector<std::vector<int>> parse_size_grid(const std::string& text);

// Derived per-factor / per-trial seeds, deterministic in (seed, stream).
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

// Factors named by the job: a factor file, or Haar factors synthesized from
// --sizes/--seed (factor k drawing from mix_seed(seed, k)).
FactorList factors_for_job(const JobSpec& job);

// --- command runners (shared by the CLI and the tests) ------------------------

// Computes the report for job.method, writes it in job.format to job.out_path
// or stdout, and returns it. With method "both" the two routes must agree on
// dim_mspace or a MethodDisagreementError is thrown after diagnostics are
// printed to stderr.
DefectReport run_defect(const JobSpec& job);

BoundBreakdown run_bound(const JobSpec& job);

// Runs the verification suites (direct-sum, route agreement, generator and
// feasibility identities) and prints one PASS/FAIL line each; returns true
// iff all passed.
bool run_verify(const JobSpec& job);

// With trials == 0 writes the synthesized Haar factors as a factor file; with
// trials > 0 runs a bound-attainment campaign and writes a JSON summary.
void run_sample(const JobSpec& job);

struct BenchRow {
  std::vector<int> sizes;
  std::uint64_t seed = 0;
  long long dim_direct = 0;
  long long dim_decomposed = 0;
  double t_direct = 0.0;
  double t_decomposed = 0.0;
  double min_gap_ratio = 0.0;
  bool agree = false;
};

// One row per (shape, trial), trials running concurrently up to job.jobs.
// Rows are emitted in deterministic (shape, trial) order; any dimension
// disagreement flags the row and makes the run fail.
std::vector<BenchRow> run_bench(const JobSpec& job);

std::string bench_csv_header();
std::string bench_row_to_csv(const BenchRow& row);

}  // namespace kdef
