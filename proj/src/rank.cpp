#include "kdef/rank.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <limits>

namespace kdef {

namespace {
// Precision unit of the standard rank rule (as in numpy/MATLAB): machine
// epsilon, i.e. the spacing of doubles at 1. Halving it is measurably too
// tight here: spanning sets built from products of unitary entries carry
// spurious singular values up to a few eps relative to sigma_max.
constexpr double kRankPrecision = std::numeric_limits<double>::epsilon();
}  // namespace

RankResult numerical_rank(const std::vector<std::vector<double>>& vectors,
                          const RankPolicy& policy) {
  if (vectors.empty()) throw InputError("numerical_rank: need at least one vector");
  const std::size_t len = vectors.front().size();
  if (len == 0) throw InputError("numerical_rank: vectors must be nonempty");
  for (const auto& v : vectors)
    if (v.size() != len) throw InputError("numerical_rank: vectors differ in length");

  const long long m = static_cast<long long>(vectors.size());
  const long long l = static_cast<long long>(len);
  Eigen::MatrixXd a(m, l);
  for (long long r = 0; r < m; ++r)
    for (long long c = 0; c < l; ++c) a(r, c) = vectors[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];

  Eigen::BDCSVD<Eigen::MatrixXd> svd(a);  // singular values only
  const auto& sv = svd.singularValues();

  RankResult result;
  result.singular_values.assign(sv.data(), sv.data() + sv.size());
  const double sigma_max = result.singular_values.empty() ? 0.0 : result.singular_values.front();

  double tol;
  if (policy.is_automatic) {
    tol = static_cast<double>(std::max(m, l)) * kRankPrecision * sigma_max;
    // An all-zero set would give tol = 0; keep the threshold positive so that
    // exact zeros are always discarded.
    if (!(tol > 0.0)) tol = std::numeric_limits<double>::min();
  } else {
    tol = policy.epsilon;
  }
  result.tolerance_used = tol;

  long long rank = 0;
  for (double s : result.singular_values)
    if (s > tol) ++rank;
  result.rank = rank;

  const long long total = static_cast<long long>(result.singular_values.size());
  if (rank == 0 || rank == total || result.singular_values[static_cast<std::size_t>(rank)] == 0.0)
    result.gap_ratio = std::numeric_limits<double>::infinity();
  else
    result.gap_ratio = result.singular_values[static_cast<std::size_t>(rank - 1)] /
                       result.singular_values[static_cast<std::size_t>(rank)];
  return result;
}

}  // namespace kdef
