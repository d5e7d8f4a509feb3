#pragma once

#include <vector>

#include "kdef/errors.hpp"

namespace kdef {

// Outcome of a numerical rank decision over a set of real vectors.
struct RankResult {
  long long rank = 0;
  std::vector<double> singular_values;  // sorted descending
  double gap_ratio = 0.0;               // sigma_rank / sigma_{rank+1}; +inf at the extremes
  double tolerance_used = 0.0;
};

// Threshold selection for numerical_rank. The automatic policy scales with the
// largest singular value: tau = max(m, L) * eps * sigma_max with eps the
// machine epsilon (the usual dense rank rule), so rank decisions are invariant
// under rescaling the input.
struct RankPolicy {
  static RankPolicy automatic() { return RankPolicy{}; }
  static RankPolicy explicit_tolerance(double epsilon) {
    if (!(epsilon > 0)) throw InputError("rank tolerance must be positive");
    RankPolicy p;
    p.is_automatic = false;
    p.epsilon = epsilon;
    return p;
  }

  bool is_automatic = true;
  double epsilon = 0.0;
};

// Rank of the span of the given vectors (each a row of the decomposed matrix):
// the number of singular values strictly above the policy threshold. An
// all-zero input set has rank 0. Requires at least one vector, all of equal
// positive length.
RankResult numerical_rank(const std::vector<std::vector<double>>& vectors,
                          const RankPolicy& policy = RankPolicy::automatic());

// Ranks below this gap ratio are flagged as untrustworthy by the engine.
inline constexpr double kGapRatioWarningThreshold = 1e3;

}  // namespace kdef
