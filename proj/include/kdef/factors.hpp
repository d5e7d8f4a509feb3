#pragma once

#include <vector>

#include "kdef/indexing.hpp"
#include "kdef/matrix.hpp"

namespace kdef {

// Materializing a product larger than this is refused; the flattened
// generator vectors grow as N^2 and the direct rank as N^6.
inline constexpr long long kMaxProductSize = 64;

// Unitarity is required of factors at this tolerance. Inputs are used
// verbatim beyond the check; nothing is re-orthonormalized.
inline constexpr double kUnitaryTolerance = 1e-10;

// An ordered list of square unitary factors U^(1)..U^(r) whose Kronecker
// product is the matrix under study.
class FactorList {
 public:
  explicit FactorList(std::vector<ComplexMatrix> factors, double tol = kUnitaryTolerance);

  int order() const { return static_cast<int>(factors_.size()); }  // r
  const std::vector<ComplexMatrix>& factors() const { return factors_; }
  const ComplexMatrix& factor(int k) const;  // 1-based
  const SizeSequence& sizes() const { return sizes_; }
  long long total_size() const { return sizes_.total(); }  // N

  // Kronecker product of all factors, left to right. Guarded at
  // kMaxProductSize since every downstream consumer is O(N^2) per vector.
  ComplexMatrix product() const;

 private:
  std::vector<ComplexMatrix> factors_;
  SizeSequence sizes_;
};

}  // namespace kdef
