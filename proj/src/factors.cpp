#include "kdef/factors.hpp"

#include <string>

#include "kdef/errors.hpp"

namespace kdef {

FactorList::FactorList(std::vector<ComplexMatrix> factors, double tol)
    : factors_(std::move(factors)) {
  if (factors_.empty()) throw InputError("FactorList: at least one factor required");
  std::vector<int> sizes;
  sizes.reserve(factors_.size());
  for (std::size_t k = 0; k < factors_.size(); ++k) {
    const auto& f = factors_[k];
    if (f.rows() != f.cols())
      throw InputError("FactorList: factor " + std::to_string(k + 1) + " is not square");
    if (!is_unitary(f, tol))
      throw NonUnitaryError("FactorList: factor " + std::to_string(k + 1) +
                                " is not unitary within tolerance",
                            static_cast<int>(k + 1));
    sizes.push_back(static_cast<int>(f.rows()));
  }
  sizes_ = SizeSequence(std::move(sizes));
}

const ComplexMatrix& FactorList::factor(int k) const {
  if (k < 1 || k > order()) throw InputError("FactorList: factor position out of range");
  return factors_[static_cast<std::size_t>(k - 1)];
}

ComplexMatrix FactorList::product() const {
  if (total_size() > kMaxProductSize)
    throw GuardExceededError("product size " + std::to_string(total_size()) +
                             " exceeds the materialization guard of " +
                             std::to_string(kMaxProductSize));
  ComplexMatrix out = factors_.front();
  for (std::size_t k = 1; k < factors_.size(); ++k) out = kron(out, factors_[k]);
  return out;
}

}  // namespace kdef
