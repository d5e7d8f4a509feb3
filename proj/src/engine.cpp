#include "kdef/engine.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <iostream>
#include <limits>
#include <map>
#include <string>

#include "kdef/bounds.hpp"

namespace kdef {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void warn_small_gap(const RankResult& r, const char* context) {
  if (std::isfinite(r.gap_ratio) && r.gap_ratio < kGapRatioWarningThreshold)
    std::cerr << "warning: " << context << ": singular-value gap ratio " << r.gap_ratio
              << " is below " << kGapRatioWarningThreshold
              << "; the integer rank may be unreliable\n";
}

RankResult empty_span_rank() {
  RankResult r;
  r.rank = 0;
  r.gap_ratio = std::numeric_limits<double>::infinity();
  r.tolerance_used = std::numeric_limits<double>::min();
  return r;
}

void check_direct_guard(long long n, const char* who) {
  if (n > kMaxProductSize)
    throw GuardExceededError(std::string(who) + ": size " + std::to_string(n) +
                             " exceeds the guard of " + std::to_string(kMaxProductSize));
}

struct TermOutcome {
  long long dim = 0;
  double gap_ratio = std::numeric_limits<double>::infinity();
};

// Dimension of the all-positions-differ generator subspace of the product
// restricted to the retained factors.
TermOutcome subproduct_term(const FactorList& factors, const std::vector<int>& removed,
                            const RankPolicy& policy) {
  std::vector<ComplexMatrix> retained;
  std::size_t d = 0;
  for (int k = 1; k <= factors.order(); ++k) {
    if (d < removed.size() && removed[static_cast<std::size_t>(d)] == k) {
      ++d;
      continue;
    }
    if (factors.factor(k).rows() == 1) return {};  // a retained 1x1 factor forces dimension 0
    retained.push_back(factors.factor(k));
  }
  const FactorList reduced(std::move(retained));
  const GeneratorSet set = pattern_subset(reduced, PatternKey{});
  if (set.vectors.empty()) return {};
  const RankResult r = numerical_rank(set.vectors, policy);
  warn_small_gap(r, "subproduct_dim");
  return {r.rank, r.gap_ratio};
}

// Proper subsets of {0..r-1} as bitmasks, smaller subsets first.
std::vector<unsigned> proper_subset_masks(int r) {
  std::vector<unsigned> masks;
  for (unsigned mask = 0; mask + 1 < (1u << r); ++mask) masks.push_back(mask);
  std::stable_sort(masks.begin(), masks.end(), [](unsigned a, unsigned b) {
    return __builtin_popcount(a) < __builtin_popcount(b);
  });
  return masks;
}

// Columns of the linear system whose kernel is the feasible space: for each
// entry position (a, b) of R the antihermitian-violation components of
// E = i * (e_ab entrywise U) * dagger(U). Row a of E is the only nonzero one:
// E(a, m) = i * U(a,b) * conj(U(m,b)).
std::vector<std::vector<double>> feasibility_constraint_columns(const ComplexMatrix& u) {
  if (u.rows() != u.cols()) throw InputError("feasible space: matrix must be square");
  const long long n = u.rows();
  if (n > kMaxConstraintSystemSize)
    throw GuardExceededError("feasible space: constraint system guarded at size " +
                             std::to_string(kMaxConstraintSystemSize));
  std::vector<std::vector<double>> columns;
  columns.reserve(static_cast<std::size_t>(n * n));
  const Complex iunit(0.0, 1.0);
  for (long long a = 0; a < n; ++a)
    for (long long b = 0; b < n; ++b) {
      ComplexMatrix h(n, n);  // E + dagger(E) for the basis direction e_ab
      for (long long m = 0; m < n; ++m) {
        const Complex e = iunit * u(a, b) * std::conj(u(m, b));
        h(a, m) += e;
        h(m, a) += std::conj(e);
      }
      // Independent real components of the hermitian matrix h: the diagonal,
      // then real and imaginary parts of the upper triangle.
      std::vector<double> col;
      col.reserve(static_cast<std::size_t>(n * n));
      for (long long k = 0; k < n; ++k) col.push_back(h(k, k).real());
      for (long long p = 0; p < n; ++p)
        for (long long q = p + 1; q < n; ++q) {
          col.push_back(h(p, q).real());
          col.push_back(h(p, q).imag());
        }
      columns.push_back(std::move(col));
    }
  return columns;
}

}  // namespace

RankResult dim_mspace(const ComplexMatrix& u, const RankPolicy& policy) {
  if (u.rows() != u.cols()) throw InputError("dim_mspace: matrix must be square");
  check_direct_guard(u.rows(), "dim_mspace");
  if (u.rows() == 1) return empty_span_rank();  // no row pairs, empty spanning set
  const GeneratorSet set = spanning_set(u);
  const RankResult r = numerical_rank(set.vectors, policy);
  warn_small_gap(r, "dim_mspace");
  return r;
}

long long defect(const ComplexMatrix& u, const RankPolicy& policy) {
  const long long n = u.rows();
  return (n - 1) * (n - 1) - dim_mspace(u, policy).rank;
}

long long generalized_defect(const ComplexMatrix& u, const RankPolicy& policy) {
  const long long n = u.rows();
  return n * n - dim_mspace(u, policy).rank;
}

long long subproduct_dim(const FactorList& factors, const std::vector<int>& removed,
                         const RankPolicy& policy) {
  // Delegating validation: reduce_sizes enforces sorted, in-range, proper.
  reduce_sizes(factors.sizes(), removed);
  return subproduct_term(factors, removed, policy).dim;
}

DefectReport dim_mspace_kron(const FactorList& factors, const RankPolicy& policy) {
  const auto t0 = Clock::now();
  const int r = factors.order();
  const SizeSequence& sizes = factors.sizes();
  const long long n = sizes.total();
  // The no-removals term ranks the full product's generators, so the overall
  // guard is the full product size.
  check_direct_guard(n, "dim_mspace_kron");

  // Positions with entrywise-identical factors are interchangeable for the
  // term dimensions; memoize per retained-factor multiset.
  std::vector<int> factor_id(static_cast<std::size_t>(r));
  for (int t = 0; t < r; ++t) {
    factor_id[static_cast<std::size_t>(t)] = t;
    for (int s = 0; s < t; ++s)
      if (factors.factors()[static_cast<std::size_t>(s)] ==
          factors.factors()[static_cast<std::size_t>(t)]) {
        factor_id[static_cast<std::size_t>(t)] = s;
        break;
      }
  }

  std::map<std::vector<int>, TermOutcome> memo;
  DefectReport report;
  long long total = 0;
  double min_gap = std::numeric_limits<double>::infinity();
  for (unsigned mask : proper_subset_masks(r)) {
    std::vector<int> removed;
    std::vector<int> retained_ids;
    long long multiplicity = 1;
    for (int k = 0; k < r; ++k) {
      if (mask & (1u << k)) {
        removed.push_back(k + 1);
        multiplicity *= sizes.size_at(k + 1);
      } else {
        retained_ids.push_back(factor_id[static_cast<std::size_t>(k)]);
      }
    }
    std::sort(retained_ids.begin(), retained_ids.end());
    auto it = memo.find(retained_ids);
    if (it == memo.end()) it = memo.emplace(retained_ids, subproduct_term(factors, removed, policy)).first;
    const TermOutcome& term = it->second;
    total += multiplicity * term.dim;
    min_gap = std::min(min_gap, term.gap_ratio);
    report.per_subset_dims.push_back({std::move(removed), term.dim, multiplicity});
  }

  report.n_total = n;
  report.dim_mspace = total;
  report.defect = (n - 1) * (n - 1) - total;
  report.generalized_defect = n * n - total;
  report.method = "decomposed";
  report.lower_bound = closed_form_lower_bound(sizes.sizes());
  report.min_gap_ratio = min_gap;
  report.wall_times.emplace_back("decomposed", seconds_since(t0));
  return report;
}

DefectReport defect_report_direct(const FactorList& factors, const RankPolicy& policy) {
  const auto t0 = Clock::now();
  const ComplexMatrix u = factors.product();
  const long long n = u.rows();
  const GeneratorSet set = spanning_set(u);
  const double t_generators = seconds_since(t0);

  const auto t1 = Clock::now();
  const RankResult r = set.vectors.empty() ? empty_span_rank() : numerical_rank(set.vectors, policy);
  warn_small_gap(r, "defect_report_direct");
  const double t_rank = seconds_since(t1);

  DefectReport report;
  report.n_total = n;
  report.dim_mspace = r.rank;
  report.defect = (n - 1) * (n - 1) - r.rank;
  report.generalized_defect = n * n - r.rank;
  report.method = "direct";
  report.lower_bound = closed_form_lower_bound(factors.sizes().sizes());
  report.min_gap_ratio = r.gap_ratio;
  report.wall_times.emplace_back("generators", t_generators);
  report.wall_times.emplace_back("rank", t_rank);
  return report;
}

DirectSumCheck verify_direct_sum(const FactorList& factors, const RankPolicy& policy) {
  const ComplexMatrix u = factors.product();  // size guard lives here
  const SizeSequence& sizes = factors.sizes();
  const int r = factors.order();

  DirectSumCheck check;
  check.direct_rank = dim_mspace(u, policy).rank;

  for (unsigned mask : proper_subset_masks(r)) {
    std::vector<int> positions;
    for (int k = 0; k < r; ++k)
      if (mask & (1u << k)) positions.push_back(k + 1);
    // Odometer over all value assignments at the fixed positions.
    std::vector<int> values(positions.size(), 1);
    while (true) {
      PatternKey key{positions, values};
      const GeneratorSet set = pattern_subset(u, sizes, key);
      long long rank = 0;
      if (!set.vectors.empty()) {
        const RankResult rr = numerical_rank(set.vectors, policy);
        warn_small_gap(rr, "verify_direct_sum");
        rank = rr.rank;
      }
      check.per_key.push_back({std::move(key), static_cast<long long>(set.vectors.size()), rank});
      check.rank_sum += rank;

      std::size_t q = positions.size();
      while (q > 0) {
        auto& v = values[q - 1];
        if (v < sizes.size_at(positions[q - 1])) {
          ++v;
          break;
        }
        v = 1;
        --q;
      }
      if (q == 0) break;
    }
  }
  check.ok = (check.rank_sum == check.direct_rank);
  return check;
}

bool feasible_space_contains(const ComplexMatrix& u, const RealMatrix& rmat, double tol) {
  if (u.rows() != u.cols()) throw InputError("feasible_space_contains: matrix must be square");
  if (rmat.rows() != u.rows() || rmat.cols() != u.cols())
    throw InputError("feasible_space_contains: dimension mismatch");
  const long long n = u.rows();
  ComplexMatrix w(n, n);
  const Complex iunit(0.0, 1.0);
  for (long long a = 0; a < n; ++a)
    for (long long b = 0; b < n; ++b) w(a, b) = iunit * rmat(a, b) * u(a, b);
  const ComplexMatrix e = matmul(w, dagger(u));
  return max_abs(e + dagger(e)) <= tol;
}

std::vector<RealMatrix> phasing_basis(long long n) {
  if (n < 1) throw InputError("phasing_basis: n must be positive");
  std::vector<RealMatrix> basis;
  basis.reserve(static_cast<std::size_t>(2 * n));
  for (long long i = 0; i < n; ++i) {
    RealMatrix m(n, n);
    for (long long c = 0; c < n; ++c) m(i, c) = 1.0;
    basis.push_back(std::move(m));
  }
  for (long long j = 0; j < n; ++j) {
    RealMatrix m(n, n);
    for (long long r = 0; r < n; ++r) m(r, j) = 1.0;
    basis.push_back(std::move(m));
  }
  return basis;
}

RealMatrix kron_feasible_product(const RealMatrix& r1, const RealMatrix& r2) {
  return kron(r1, r2);
}

RankResult feasible_space_constraint_rank(const ComplexMatrix& u, const RankPolicy& policy) {
  const RankResult r = numerical_rank(feasibility_constraint_columns(u), policy);
  warn_small_gap(r, "feasible_space_constraint_rank");
  return r;
}

long long feasible_space_dim(const ComplexMatrix& u, const RankPolicy& policy) {
  const long long n = u.rows();
  return n * n - feasible_space_constraint_rank(u, policy).rank;
}

std::vector<RealMatrix> feasible_space_basis(const ComplexMatrix& u, const RankPolicy& policy) {
  const auto columns = feasibility_constraint_columns(u);
  const long long n = u.rows();
  const long long dim = n * n;
  Eigen::MatrixXd k(dim, dim);
  for (long long c = 0; c < dim; ++c)
    for (long long r = 0; r < dim; ++r)
      k(r, c) = columns[static_cast<std::size_t>(c)][static_cast<std::size_t>(r)];

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(k, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double sigma_max = sv.size() > 0 ? sv(0) : 0.0;
  double tol;
  if (policy.is_automatic) {
    tol = static_cast<double>(dim) * std::numeric_limits<double>::epsilon() * sigma_max;
    if (!(tol > 0.0)) tol = std::numeric_limits<double>::min();
  } else {
    tol = policy.epsilon;
  }
  long long rank = 0;
  for (long long i = 0; i < sv.size(); ++i)
    if (sv(i) > tol) ++rank;

  std::vector<RealMatrix> basis;
  basis.reserve(static_cast<std::size_t>(dim - rank));
  for (long long c = rank; c < dim; ++c) {
    RealMatrix m(n, n);
    for (long long a = 0; a < n; ++a)
      for (long long b = 0; b < n; ++b) m(a, b) = svd.matrixV()(a * n + b, c);
    basis.push_back(std::move(m));
  }
  return basis;
}

}  // namespace kdef
