#include "kdef/io.hpp"

#include <atomic>
#include <cctype>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace kdef {

namespace {

using nlohmann::ordered_json;

ordered_json matrix_to_ojson(const ComplexMatrix& m) {
  ordered_json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  ordered_json data = ordered_json::array();
  for (const Complex& x : m.data()) data.push_back({x.real(), x.imag()});
  j["data"] = std::move(data);
  return j;
}

ComplexMatrix matrix_from_ojson(const ordered_json& j) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("data"))
    throw InputError("matrix JSON must be an object with rows, cols and data");
  if (!j["rows"].is_number_integer() || !j["cols"].is_number_integer())
    throw InputError("matrix JSON: rows and cols must be integers");
  const long long rows = j["rows"].get<long long>();
  const long long cols = j["cols"].get<long long>();
  if (rows < 1 || cols < 1) throw InputError("matrix JSON: dimensions must be positive");
  const auto& data = j["data"];
  if (!data.is_array() || static_cast<long long>(data.size()) != rows * cols)
    throw InputError("matrix JSON: data must hold rows*cols entries");
  ComplexMatrix m(rows, cols);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto& e = data[i];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
      throw InputError("matrix JSON: each entry must be a [re, im] number pair");
    const double re = e[0].get<double>();
    const double im = e[1].get<double>();
    if (!std::isfinite(re) || !std::isfinite(im))
      throw InputError("matrix JSON: entries must be finite");
    m.data()[i] = Complex(re, im);
  }
  return m;
}

ordered_json parse_json_text(const std::string& text, const char* what) {
  ordered_json j = ordered_json::parse(text, nullptr, false);
  if (j.is_discarded()) throw InputError(std::string(what) + ": malformed JSON");
  return j;
}

std::string sizes_token(const std::vector<int>& sizes) {
  std::string out;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (i) out += 'x';
    out += std::to_string(sizes[i]);
  }
  return out;
}

void write_output(const std::optional<std::string>& path, const std::string& text) {
  if (path) {
    std::ofstream f(*path);
    if (!f) throw InputError("cannot open output file: " + *path);
    f << text;
  } else {
    std::cout << text;
  }
}

ordered_json report_to_ojson(const DefectReport& report, bool include_timings) {
  ordered_json j;
  j["n_total"] = report.n_total;
  j["dim_mspace"] = report.dim_mspace;
  j["defect"] = report.defect;
  j["generalized_defect"] = report.generalized_defect;
  j["method"] = report.method;
  ordered_json terms = ordered_json::array();
  for (const SubsetTerm& t : report.per_subset_dims) {
    ordered_json jt;
    jt["removed"] = t.removed;
    jt["dim"] = t.dim;
    jt["multiplicity"] = t.multiplicity;
    terms.push_back(std::move(jt));
  }
  j["per_subset_dims"] = std::move(terms);
  j["lower_bound"] = report.lower_bound;
  if (std::isfinite(report.min_gap_ratio))
    j["min_gap_ratio"] = report.min_gap_ratio;
  else
    j["min_gap_ratio"] = nullptr;  // the run had no finite gap to report
  if (include_timings) {
    ordered_json times;
    for (const auto& [phase, seconds] : report.wall_times) times[phase] = seconds;
    j["wall_times"] = std::move(times);
  }
  return j;
}

double elapsed_total(const DefectReport& report) {
  double t = 0.0;
  for (const auto& [phase, seconds] : report.wall_times) t += seconds;
  return t;
}

}  // namespace

std::string matrix_to_json(const ComplexMatrix& m) { return matrix_to_ojson(m).dump(); }

ComplexMatrix matrix_from_json(const std::string& text) {
  return matrix_from_ojson(parse_json_text(text, "matrix"));
}

FactorList parse_factor_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InputError("cannot open factor file: " + path);
  std::stringstream buffer;
  buffer << f.rdbuf();
  const ordered_json j = parse_json_text(buffer.str(), "factor file");
  std::vector<ComplexMatrix> factors;
  if (j.is_object()) {
    factors.push_back(matrix_from_ojson(j));
  } else if (j.is_array()) {
    if (j.empty()) throw InputError("factor file: empty factor array");
    for (const auto& e : j) factors.push_back(matrix_from_ojson(e));
  } else {
    throw InputError("factor file: expected a matrix object or an array of them");
  }
  return FactorList(std::move(factors));
}

std::string factors_to_json(const std::vector<ComplexMatrix>& factors) {
  ordered_json j = ordered_json::array();
  for (const auto& f : factors) j.push_back(matrix_to_ojson(f));
  return j.dump(2) + "\n";
}

std::string report_to_json(const DefectReport& report, bool include_timings) {
  return report_to_ojson(report, include_timings).dump(2) + "\n";
}

DefectReport report_from_json(const std::string& text) {
  const ordered_json j = parse_json_text(text, "report");
  DefectReport report;
  report.n_total = j.at("n_total").get<long long>();
  report.dim_mspace = j.at("dim_mspace").get<long long>();
  report.defect = j.at("defect").get<long long>();
  report.generalized_defect = j.at("generalized_defect").get<long long>();
  report.method = j.at("method").get<std::string>();
  for (const auto& jt : j.at("per_subset_dims")) {
    SubsetTerm t;
    t.removed = jt.at("removed").get<std::vector<int>>();
    t.dim = jt.at("dim").get<long long>();
    t.multiplicity = jt.at("multiplicity").get<long long>();
    report.per_subset_dims.push_back(std::move(t));
  }
  report.lower_bound = j.at("lower_bound").get<long long>();
  const auto& gap = j.at("min_gap_ratio");
  report.min_gap_ratio =
      gap.is_null() ? std::numeric_limits<double>::infinity() : gap.get<double>();
  if (j.contains("wall_times"))
    for (const auto& [phase, seconds] : j.at("wall_times").items())
      report.wall_times.emplace_back(phase, seconds.get<double>());
  return report;
}

std::string report_to_csv(const DefectReport& report) {
  std::ostringstream out;
  out << "n_total,dim_mspace,defect,generalized_defect,method,lower_bound,min_gap_ratio\n";
  out << report.n_total << ',' << report.dim_mspace << ',' << report.defect << ','
      << report.generalized_defect << ',' << report.method << ',' << report.lower_bound << ',';
  if (std::isfinite(report.min_gap_ratio))
    out << report.min_gap_ratio;
  else
    out << "inf";
  out << '\n';
  return out.str();
}

std::string report_to_text(const DefectReport& report) {
  std::ostringstream out;
  out << "N                  : " << report.n_total << '\n'
      << "dim M(U)           : " << report.dim_mspace << '\n'
      << "defect             : " << report.defect << '\n'
      << "generalized defect : " << report.generalized_defect << '\n'
      << "method             : " << report.method << '\n'
      << "lower bound        : " << report.lower_bound << '\n';
  if (!report.per_subset_dims.empty()) {
    out << "terms (removed positions -> dim x multiplicity):\n";
    for (const SubsetTerm& t : report.per_subset_dims) {
      out << "  {";
      for (std::size_t i = 0; i < t.removed.size(); ++i) out << (i ? "," : "") << t.removed[i];
      out << "} -> " << t.dim << " x " << t.multiplicity << '\n';
    }
  }
  return out.str();
}

std::string bound_to_json(const BoundBreakdown& breakdown) {
  ordered_json j;
  j["sizes"] = breakdown.sizes;
  j["twos_count"] = breakdown.twos_count;
  j["expanded_total"] = breakdown.expanded_total;
  j["closed_form_total"] = breakdown.closed_form_total;
  j["naive_product"] = breakdown.naive_product;
  j["delta_vs_naive"] = breakdown.closed_form_total - breakdown.naive_product;
  ordered_json terms = ordered_json::array();
  for (const auto& [removed, bound] : breakdown.per_subset_bounds) {
    ordered_json jt;
    jt["removed"] = removed;
    jt["bound"] = bound;
    terms.push_back(std::move(jt));
  }
  j["per_subset_bounds"] = std::move(terms);
  return j.dump(2) + "\n";
}

std::string bound_to_csv(const BoundBreakdown& breakdown) {
  std::ostringstream out;
  out << "sizes,twos_count,expanded_total,closed_form_total,naive_product,delta_vs_naive\n"
      << sizes_token(breakdown.sizes) << ',' << breakdown.twos_count << ','
      << breakdown.expanded_total << ',' << breakdown.closed_form_total << ','
      << breakdown.naive_product << ','
      << (breakdown.closed_form_total - breakdown.naive_product) << '\n';
  return out.str();
}

std::string bound_to_text(const BoundBreakdown& breakdown) {
  std::ostringstream out;
  out << "sizes              : " << sizes_token(breakdown.sizes) << '\n'
      << "expanded bound     : " << breakdown.expanded_total << '\n'
      << "closed-form bound  : " << breakdown.closed_form_total << '\n'
      << "per-factor product : " << breakdown.naive_product << '\n'
      << "gain over product  : " << (breakdown.closed_form_total - breakdown.naive_product)
      << '\n';
  return out.str();
}

std::vector<std::vector<int>> parse_size_grid(const std::string& text) {
  std::vector<std::vector<int>> grid;
  std::stringstream shapes(text);
  std::string shape;
  while (std::getline(shapes, shape, ';')) {
    if (shape.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<int> sizes;
    std::stringstream items(shape);
    std::string item;
    while (std::getline(items, item, ',')) {
      try {
        std::size_t used = 0;
        const int n = std::stoi(item, &used);
        while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
        if (used != item.size() || n < 1) throw InputError("");
        sizes.push_back(n);
      } catch (const std::exception&) {
        throw InputError("--sizes: '" + item + "' is not a positive integer");
      }
    }
    if (sizes.empty()) throw InputError("--sizes: empty shape");
    grid.push_back(std::move(sizes));
  }
  return grid;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 of seed advanced by the stream index: well-separated
  // deterministic seeds for derived generators.
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

FactorList haar_factors(const std::vector<int>& sizes, std::uint64_t seed) {
  std::vector<ComplexMatrix> factors;
  factors.reserve(sizes.size());
  for (std::size_t k = 0; k < sizes.size(); ++k)
    factors.push_back(haar_unitary(sizes[k], mix_seed(seed, k)));
  return FactorList(std::move(factors));
}

}  // namespace

FactorList factors_for_job(const JobSpec& job) {
  if (job.factor_path) return parse_factor_file(*job.factor_path);
  if (job.haar && job.size_grid.size() == 1) return haar_factors(job.size_grid.front(), job.seed);
  throw InputError("need either --factors PATH or --sizes LIST with --haar");
}

DefectReport run_defect(const JobSpec& job) {
  const RankPolicy policy = job.tolerance ? RankPolicy::explicit_tolerance(*job.tolerance)
                                          : RankPolicy::automatic();
  const FactorList factors = factors_for_job(job);

  if (job.method == "direct" || job.method == "decomposed") {
    const DefectReport report = job.method == "direct" ? defect_report_direct(factors, policy)
                                                       : dim_mspace_kron(factors, policy);
    std::string text;
    if (job.format == "json")
      text = report_to_json(report, job.timings);
    else if (job.format == "csv")
      text = report_to_csv(report);
    else
      text = report_to_text(report);
    write_output(job.out_path, text);
    return report;
  }
  if (job.method != "both") throw InputError("--method must be direct, decomposed or both");

  const DefectReport direct = defect_report_direct(factors, policy);
  const DefectReport decomposed = dim_mspace_kron(factors, policy);
  if (direct.dim_mspace != decomposed.dim_mspace) {
    std::cerr << "method disagreement: direct dim " << direct.dim_mspace << ", decomposed dim "
              << decomposed.dim_mspace << "\n"
              << report_to_text(direct) << report_to_text(decomposed);
    throw MethodDisagreementError("direct and decomposed dimensions disagree");
  }
  std::string text;
  if (job.format == "json") {
    ordered_json j;
    j["direct"] = report_to_ojson(direct, job.timings);
    j["decomposed"] = report_to_ojson(decomposed, job.timings);
    j["methods_agree"] = true;
    text = j.dump(2) + "\n";
  } else if (job.format == "csv") {
    text = report_to_csv(direct) + report_to_csv(decomposed);
  } else {
    text = report_to_text(direct) + report_to_text(decomposed) + "methods agree: yes\n";
  }
  write_output(job.out_path, text);
  return decomposed;
}

BoundBreakdown run_bound(const JobSpec& job) {
  if (job.size_grid.size() != 1) throw InputError("bound: exactly one --sizes shape required");
  const BoundBreakdown breakdown = expanded_lower_bound(job.size_grid.front());
  std::string text;
  if (job.format == "json")
    text = bound_to_json(breakdown);
  else if (job.format == "csv")
    text = bound_to_csv(breakdown);
  else
    text = bound_to_text(breakdown);
  write_output(job.out_path, text);
  return breakdown;
}

void run_sample(const JobSpec& job) {
  if (job.size_grid.size() != 1) throw InputError("sample: exactly one --sizes shape required");
  const std::vector<int>& sizes = job.size_grid.front();

  if (job.trials <= 0) {
    // Emit the synthesized factors as a factor file.
    const FactorList factors = haar_factors(sizes, job.seed);
    write_output(job.out_path, factors_to_json(factors.factors()));
    return;
  }

  // Bound-attainment campaign: how often does the generalized defect of a
  // Haar product sit exactly on the closed-form bound?
  const long long bound = closed_form_lower_bound(sizes);
  ordered_json rows = ordered_json::array();
  long long attained = 0;
  for (int t = 0; t < job.trials; ++t) {
    const FactorList factors = haar_factors(sizes, mix_seed(job.seed, static_cast<std::uint64_t>(t)));
    const DefectReport report = dim_mspace_kron(factors);
    const bool hit = report.generalized_defect == bound;
    attained += hit ? 1 : 0;
    ordered_json row;
    row["trial"] = t;
    row["generalized_defect"] = report.generalized_defect;
    row["attained"] = hit;
    rows.push_back(std::move(row));
  }
  ordered_json j;
  j["sizes"] = sizes;
  j["trials"] = job.trials;
  j["lower_bound"] = bound;
  j["attained"] = attained;
  j["attainment_rate"] = static_cast<double>(attained) / static_cast<double>(job.trials);
  j["rows"] = std::move(rows);
  write_output(job.out_path, j.dump(2) + "\n");
}

std::string bench_csv_header() {
  return "sizes,seed,dim_direct,dim_decomposed,t_direct,t_decomposed,min_gap_ratio,agree\n";
}

std::string bench_row_to_csv(const BenchRow& row) {
  std::ostringstream out;
  out << sizes_token(row.sizes) << ',' << row.seed << ',' << row.dim_direct << ','
      << row.dim_decomposed << ',';
  out.setf(std::ios::fixed);
  out.precision(6);
  out << row.t_direct << ',' << row.t_decomposed << ',';
  out.unsetf(std::ios::fixed);
  if (std::isfinite(row.min_gap_ratio))
    out << row.min_gap_ratio;
  else
    out << "inf";
  out << ',' << (row.agree ? 1 : 0) << '\n';
  return out.str();
}

std::vector<BenchRow> run_bench(const JobSpec& job) {
  if (job.size_grid.empty()) throw InputError("bench: at least one --sizes shape required");
  const int trials = job.trials > 0 ? job.trials : 5;
  const int jobs = std::max(1, job.jobs);
  const RankPolicy policy = job.tolerance ? RankPolicy::explicit_tolerance(*job.tolerance)
                                          : RankPolicy::automatic();

  struct Task {
    std::size_t shape;
    int trial;
  };
  std::vector<Task> tasks;
  for (std::size_t s = 0; s < job.size_grid.size(); ++s)
    for (int t = 0; t < trials; ++t) tasks.push_back({s, t});

  std::vector<BenchRow> rows(tasks.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto worker = [&]() {
    for (;;) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= tasks.size()) return;
      try {
        const Task& task = tasks[idx];
        const std::vector<int>& sizes = job.size_grid[task.shape];
        const std::uint64_t trial_seed =
            mix_seed(job.seed, (static_cast<std::uint64_t>(task.shape) << 32) |
                                   static_cast<std::uint64_t>(task.trial));
        const FactorList factors = haar_factors(sizes, trial_seed);

        const DefectReport direct = defect_report_direct(factors, policy);
        const DefectReport decomposed = dim_mspace_kron(factors, policy);

        BenchRow row;
        row.sizes = sizes;
        row.seed = trial_seed;
        row.dim_direct = direct.dim_mspace;
        row.dim_decomposed = decomposed.dim_mspace;
        row.t_direct = elapsed_total(direct);
        row.t_decomposed = elapsed_total(decomposed);
        row.min_gap_ratio = std::min(direct.min_gap_ratio, decomposed.min_gap_ratio);
        row.agree = direct.dim_mspace == decomposed.dim_mspace;
        rows[idx] = std::move(row);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  for (int w = 0; w < jobs; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);

  std::string csv = bench_csv_header();
  bool all_agree = true;
  for (const BenchRow& row : rows) {
    csv += bench_row_to_csv(row);
    all_agree = all_agree && row.agree;
  }
  write_output(job.out_path, csv);
  if (!all_agree)
    throw MethodDisagreementError("bench: direct and decomposed dimensions disagree");
  return rows;
}

bool run_verify(const JobSpec& job) {
  const RankPolicy policy = job.tolerance ? RankPolicy::explicit_tolerance(*job.tolerance)
                                          : RankPolicy::automatic();
  const FactorList factors = factors_for_job(job);
  const ComplexMatrix u = factors.product();
  const long long n = u.rows();
  std::ostringstream out;
  bool all_ok = true;
  const auto line = [&](const char* name, bool ok, const std::string& detail) {
    out << (ok ? "PASS" : "FAIL") << ' ' << name << ": " << detail << '\n';
    all_ok = all_ok && ok;
  };

  {
    const DirectSumCheck check = verify_direct_sum(factors, policy);
    line("direct-sum", check.ok,
         "per-key rank sum " + std::to_string(check.rank_sum) + " vs direct rank " +
             std::to_string(check.direct_rank));
  }
  {
    const DefectReport direct = defect_report_direct(factors, policy);
    const DefectReport decomposed = dim_mspace_kron(factors, policy);
    line("method-agreement", direct.dim_mspace == decomposed.dim_mspace,
         "direct dim " + std::to_string(direct.dim_mspace) + ", decomposed dim " +
             std::to_string(decomposed.dim_mspace));
    line("lower-bound", decomposed.generalized_defect >= decomposed.lower_bound,
         "generalized defect " + std::to_string(decomposed.generalized_defect) + " vs bound " +
             std::to_string(decomposed.lower_bound));
  }
  {
    // Columns of every generator sum to zero exactly by construction; verify
    // the materialized vectors honor that.
    const GeneratorSet set = spanning_set(u);
    double worst = 0.0;
    for (const auto& vec : set.vectors)
      for (long long c = 0; c < n; ++c) {
        double sum = 0.0;
        for (long long r = 0; r < n; ++r) sum += vec[static_cast<std::size_t>(r * n + c)];
        worst = std::max(worst, std::abs(sum));
      }
    line("generator-column-sums", worst <= 1e-12, "max |column sum| = " + std::to_string(worst));
  }
  {
    const auto basis = phasing_basis(n);
    bool feasible = true;
    for (const auto& m : basis) feasible = feasible && feasible_space_contains(u, m);
    std::vector<std::vector<double>> flat;
    for (const auto& m : basis) flat.push_back(vectorize(m));
    const long long rank = numerical_rank(flat, policy).rank;
    line("phasing-basis", feasible && rank == 2 * n - 1,
         "all feasible = " + std::string(feasible ? "yes" : "no") + ", rank " +
             std::to_string(rank) + " (expect " + std::to_string(2 * n - 1) + ")");
  }
  if (n <= kMaxConstraintSystemSize) {
    const long long via_constraints = feasible_space_dim(u, policy);
    const long long via_generators = generalized_defect(u, policy);
    line("feasible-dimension", via_constraints == via_generators,
         "constraint route " + std::to_string(via_constraints) + " vs generator route " +
             std::to_string(via_generators));
  } else {
    out << "SKIP feasible-dimension: N " << n << " above constraint-system guard "
        << kMaxConstraintSystemSize << '\n';
  }

  write_output(job.out_path, out.str());
  return all_ok;
}

}  // namespace kdef
