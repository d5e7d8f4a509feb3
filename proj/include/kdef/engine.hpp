#pragma once

#include <string>
#include <utility>
#include <vector>

#include "kdef/factors.hpp"
#include "kdef/generators.hpp"
#include "kdef/matrix.hpp"
#include "kdef/rank.hpp"

namespace kdef {

// One term of the decomposed dimension computation: the generator-subspace
// dimension of the product with the listed positions removed, counted with
// multiplicity prod(n_k) over the removed positions.
struct SubsetTerm {
  std::vector<int> removed;  // sorted, 1-based factor positions
  long long dim = 0;
  long long multiplicity = 1;
};

struct DefectReport {
  long long n_total = 0;       // N
  long long dim_mspace = 0;    // dimension of the generator span
  long long defect = 0;        // (N-1)^2 - dim_mspace
  long long generalized_defect = 0;  // N^2 - dim_mspace
  std::string method;          // "direct" | "decomposed"
  std::vector<SubsetTerm> per_subset_dims;  // decomposed method only
  long long lower_bound = 0;   // closed-form bound from the factor sizes
  double min_gap_ratio = 0.0;  // smallest gap ratio across the rank calls
  std::vector<std::pair<std::string, double>> wall_times;  // phase -> seconds
};

// Dimension of the real span of all generators of u (rank of the flattened
// spanning set). N = 1 has no generators and dimension 0.
RankResult dim_mspace(const ComplexMatrix& u, const RankPolicy& policy = RankPolicy::automatic());

// (N-1)^2 - dim_mspace(u): the dimension bound on smooth families of
// inequivalent unitaries with the entry moduli of u passing through u.
long long defect(const ComplexMatrix& u, const RankPolicy& policy = RankPolicy::automatic());

// N^2 - dim_mspace(u) = defect(u) + (2N-1): the dimension of the feasible
// space of u (see feasible_space_contains).
long long generalized_defect(const ComplexMatrix& u,
                             const RankPolicy& policy = RankPolicy::automatic());

// Dimension of the all-positions-differ generator subspace of the product
// with the listed positions removed (removed must be a proper subset of
// {1..r}). Any retained size-1 factor forces 0.
long long subproduct_dim(const FactorList& factors, const std::vector<int>& removed,
                         const RankPolicy& policy = RankPolicy::automatic());

// Dimension of the generator span of the full product computed without ever
// ranking the full spanning set: the sum over all proper removed-position
// subsets S of (prod_{k in S} n_k) * subproduct_dim(factors, S). Each term
// only needs the reduced product's all-positions-differ generators, and terms
// with identical retained factor multisets are computed once.
DefectReport dim_mspace_kron(const FactorList& factors,
                             const RankPolicy& policy = RankPolicy::automatic());

// The same report computed the plain way: rank of the full spanning set of
// the materialized product.
DefectReport defect_report_direct(const FactorList& factors,
                                  const RankPolicy& policy = RankPolicy::automatic());

struct PatternRank {
  PatternKey key;
  long long generator_count = 0;
  long long rank = 0;
};

struct DirectSumCheck {
  bool ok = false;
  long long direct_rank = 0;  // rank of the union of all pattern subsets
  long long rank_sum = 0;     // sum of the per-key subset ranks
  std::vector<PatternRank> per_key;
};

// Checks that the pattern subspaces only meet at the origin: the rank of the
// full spanning set must equal the sum of the per-key subset ranks over every
// admissible key (ranks add exactly when the subspace sum is direct).
DirectSumCheck verify_direct_sum(const FactorList& factors,
                                 const RankPolicy& policy = RankPolicy::automatic());

// True iff rmat is a feasible direction for u: with W = i * (rmat entrywise u),
// the matrix E = W * dagger(u) must be antihermitian, i.e. E + dagger(E) = 0
// within tol (max-norm).
bool feasible_space_contains(const ComplexMatrix& u, const RealMatrix& rmat, double tol = 1e-9);

// The 2n row/column indicator masks (row i all ones, then column j all ones).
// Every mask is feasible for every unitary; the flattened family has rank
// 2n-1 (the all-ones matrix is reachable from both sides).
std::vector<RealMatrix> phasing_basis(long long n);

// Kronecker product of two real matrices, under the same index convention as
// kron: the product of feasible directions for two unitaries is a feasible
// direction for their Kronecker product.
RealMatrix kron_feasible_product(const RealMatrix& r1, const RealMatrix& r2);

// Feasibility of R is a homogeneous linear condition on R's entries. This is
// the rank of that constraint system, built entrywise from the antihermitian
// condition rather than from any generator construction; an independent route
// to the same dimension count.
RankResult feasible_space_constraint_rank(const ComplexMatrix& u,
                                          const RankPolicy& policy = RankPolicy::automatic());

// N^2 minus the constraint rank: must coincide with generalized_defect(u).
long long feasible_space_dim(const ComplexMatrix& u,
                             const RankPolicy& policy = RankPolicy::automatic());

// Orthonormal basis (as matrices) of the feasible space, from the null space
// of the constraint system.
std::vector<RealMatrix> feasible_space_basis(const ComplexMatrix& u,
                                             const RankPolicy& policy = RankPolicy::automatic());

// The constraint-system route builds an N^2 x N^2 system; keep it to sizes
// where that stays a desk-scale SVD.
inline constexpr long long kMaxConstraintSystemSize = 16;

}  // namespace kdef
