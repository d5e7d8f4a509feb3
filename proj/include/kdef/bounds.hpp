#pragma once

#include <vector>

#include "kdef/errors.hpp"

namespace kdef {

// All bound arithmetic is exact integer arithmetic; inputs are guarded so the
// total size N = prod(n_k) stays within 2^31 and no intermediate overflows.

// Number of entries equal to 2, with the convention that a sequence without
// any 2 counts as 1. (This is the exponent convention used by the bound
// formulas below.)
long long count_twos(const std::vector<int>& sizes);

// Upper bound on the dimension of the all-positions-differ generator subspace
// of a product with the given retained sizes:
//   (N - 2^(t-1)) * prod(n_k - 1),  t = count_twos(sizes).
// With no 2s present this is (N-1)*prod(n_k-1); any size-1 entry forces 0.
long long subspace_dim_bound(const std::vector<int>& sizes);

struct BoundBreakdown {
  std::vector<int> sizes;
  // removed-position set (sorted, 1-based) -> subspace_dim_bound of the retained sizes
  std::vector<std::pair<std::vector<int>, long long>> per_subset_bounds;
  long long expanded_total = 0;
  long long closed_form_total = 0;
  long long naive_product = 0;  // prod(2*n_k - 1)
  long long twos_count = 0;     // plain count of entries equal to 2 (0 if none)
};

// Lower bound on the generalized defect of a product with the given sizes,
// assembled term by term: N^2 minus the sum over all proper removed-position
// subsets S of (prod_{k in S} n_k) * subspace_dim_bound(retained sizes).
BoundBreakdown expanded_lower_bound(const std::vector<int>& sizes);

// The same bound in closed form: prod(2*n_l - 1) when no size equals 2, and
// prod_{n_l > 2}(2*n_l - 1) * 2^(x-1) * (2^x + 1) with x the number of 2s
// otherwise. Size-1 entries contribute a factor of 1 either way, and the two
// branches agree when x <= 1.
long long closed_form_lower_bound(const std::vector<int>& sizes);

// Product of per-factor generalized defects: a valid lower bound on the
// generalized defect of the Kronecker product (supermultiplicativity).
long long supermultiplicative_floor(const std::vector<long long>& gendefects);

struct StrategyComparison {
  long long closed_form = 0;
  long long naive_product = 0;
  long long delta = 0;  // closed_form - naive_product; positive iff >= 2 sizes equal 2
};

// Closed-form bound versus the plain per-factor product prod(2*n_k - 1). The
// closed form dominates, strictly as soon as two or more sizes equal 2.
StrategyComparison compare_strategies(const std::vector<int>& sizes);

}  // namespace kdef
