#include "kdef/bounds.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace kdef {

namespace {

constexpr long long kMaxTotalSize = 1LL << 31;

// The expanded bound enumerates 2^r - 1 subsets; cap r so that stays cheap.
constexpr int kMaxExpandedOrder = 20;

void check_sizes(const std::vector<int>& sizes, const char* who) {
  if (sizes.empty()) throw InputError(std::string(who) + ": empty size sequence");
  for (int n : sizes)
    if (n < 1) throw InputError(std::string(who) + ": sizes must be positive");
}

long long checked_mul(long long a, long long b, const char* who) {
  const __int128 p = static_cast<__int128>(a) * static_cast<__int128>(b);
  if (p > static_cast<__int128>(std::numeric_limits<long long>::max()))
    throw GuardExceededError(std::string(who) + ": integer overflow");
  return static_cast<long long>(p);
}

long long total_size(const std::vector<int>& sizes, const char* who) {
  long long n = 1;
  for (int nk : sizes) n = checked_mul(n, nk, who);
  if (n > kMaxTotalSize)
    throw GuardExceededError(std::string(who) + ": size product exceeds 2^31");
  return n;
}

}  // namespace

long long count_twos(const std::vector<int>& sizes) {
  check_sizes(sizes, "count_twos");
  const long long c = std::count(sizes.begin(), sizes.end(), 2);
  return c > 0 ? c : 1;
}

long long subspace_dim_bound(const std::vector<int>& sizes) {
  check_sizes(sizes, "subspace_dim_bound");
  const long long n = total_size(sizes, "subspace_dim_bound");
  const long long t = count_twos(sizes);
  long long shrink = 1;
  for (int nk : sizes) shrink = checked_mul(shrink, nk - 1, "subspace_dim_bound");
  return checked_mul(n - (1LL << (t - 1)), shrink, "subspace_dim_bound");
}

BoundBreakdown expanded_lower_bound(const std::vector<int>& sizes) {
  check_sizes(sizes, "expanded_lower_bound");
  BoundBreakdown breakdown;
  breakdown.sizes = sizes;
  const long long n = total_size(sizes, "expanded_lower_bound");
  const int r = static_cast<int>(sizes.size());
  if (r > kMaxExpandedOrder)
    throw GuardExceededError("expanded_lower_bound: too many factors to enumerate");

  long long sum = 0;
  // Every proper subset of removed positions, in (popcount, mask) order so the
  // breakdown reads from no removals upward.
  std::vector<unsigned> masks;
  for (unsigned mask = 0; mask + 1 < (1u << r); ++mask) masks.push_back(mask);
  std::stable_sort(masks.begin(), masks.end(),
                   [](unsigned a, unsigned b) { return __builtin_popcount(a) < __builtin_popcount(b); });
  for (unsigned mask : masks) {
    std::vector<int> removed_positions;
    std::vector<int> retained;
    long long multiplicity = 1;
    for (int k = 0; k < r; ++k) {
      if (mask & (1u << k)) {
        removed_positions.push_back(k + 1);
        multiplicity = checked_mul(multiplicity, sizes[static_cast<std::size_t>(k)],
                                   "expanded_lower_bound");
      } else {
        retained.push_back(sizes[static_cast<std::size_t>(k)]);
      }
    }
    const long long bound = subspace_dim_bound(retained);
    breakdown.per_subset_bounds.emplace_back(std::move(removed_positions), bound);
    sum += checked_mul(multiplicity, bound, "expanded_lower_bound");
  }
  breakdown.expanded_total = checked_mul(n, n, "expanded_lower_bound") - sum;
  breakdown.closed_form_total = closed_form_lower_bound(sizes);
  breakdown.twos_count = std::count(sizes.begin(), sizes.end(), 2);

  long long naive = 1;
  for (int nk : sizes) naive = checked_mul(naive, 2LL * nk - 1, "expanded_lower_bound");
  breakdown.naive_product = naive;
  return breakdown;
}

long long closed_form_lower_bound(const std::vector<int>& sizes) {
  check_sizes(sizes, "closed_form_lower_bound");
  total_size(sizes, "closed_form_lower_bound");  // overflow guard
  const long long x = std::count(sizes.begin(), sizes.end(), 2);
  if (x == 0) {
    long long p = 1;
    for (int nk : sizes) p = checked_mul(p, 2LL * nk - 1, "closed_form_lower_bound");
    return p;
  }
  long long p = checked_mul(1LL << (x - 1), (1LL << x) + 1, "closed_form_lower_bound");
  for (int nk : sizes)
    if (nk > 2) p = checked_mul(p, 2LL * nk - 1, "closed_form_lower_bound");
  return p;
}

long long supermultiplicative_floor(const std::vector<long long>& gendefects) {
  if (gendefects.empty()) throw InputError("supermultiplicative_floor: empty input");
  long long p = 1;
  for (long long g : gendefects) {
    if (g < 1) throw InputError("supermultiplicative_floor: generalized defects are positive");
    p = checked_mul(p, g, "supermultiplicative_floor");
  }
  return p;
}

StrategyComparison compare_strategies(const std::vector<int>& sizes) {
  check_sizes(sizes, "compare_strategies");
  StrategyComparison cmp;
  cmp.closed_form = closed_form_lower_bound(sizes);
  long long naive = 1;
  for (int nk : sizes) naive = checked_mul(naive, 2LL * nk - 1, "compare_strategies");
  cmp.naive_product = naive;
  cmp.delta = cmp.closed_form - cmp.naive_product;
  return cmp;
}

}  // namespace kdef
