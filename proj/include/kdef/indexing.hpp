#pragma once

#include <vector>

#include "kdef/errors.hpp"
#include "kdef/matrix.hpp"

namespace kdef {

// Ordered factor sizes (n_1..n_r) of a Kronecker product. Sizes of 1 are
// admitted everywhere; downstream conventions treat 1x1 factors gracefully.
class SizeSequence {
 public:
  SizeSequence() = default;
  explicit SizeSequence(std::vector<int> sizes);

  int order() const { return static_cast<int>(sizes_.size()); }  // r
  int size_at(int k) const;                                      // n_k, k is 1-based
  long long total() const { return total_; }                     // N = n_1 * ... * n_r
  const std::vector<int>& sizes() const { return sizes_; }

  friend bool operator==(const SizeSequence&, const SizeSequence&) = default;

 private:
  std::vector<int> sizes_;
  long long total_ = 0;
};

// Mixed-radix components (i_1..i_r), each 1-based with i_k in 1..n_k.
using VectorIndex = std::vector<int>;

// Decompose an ordinary 1-based index i in 1..N into its vector index:
// i = (i_1-1)*n_2*...*n_r + (i_2-1)*n_3*...*n_r + ... + i_r. The expansion is
// the unique one with all components in range, and it is order-preserving
// with respect to lexicographic comparison of vector indices.
VectorIndex ordinary_to_vector(long long i, const SizeSequence& sizes);

long long vector_to_ordinary(const VectorIndex& v, const SizeSequence& sizes);

// Remove the listed positions (1-based, strictly increasing) from a vector
// index, keeping the order of the surviving components. At least one position
// must survive.
VectorIndex reduce_index(const VectorIndex& v, const std::vector<int>& drop_positions);

// Same removal applied to the size sequence itself.
SizeSequence reduce_sizes(const SizeSequence& sizes, const std::vector<int>& drop_positions);

namespace detail {
// Product of sizes strictly after position k (1-based); the stride of that
// position in the ordinary index.
long long trailing_product(const SizeSequence& sizes, int k);
void check_position(const SizeSequence& sizes, int k, int value, const char* who);
}  // namespace detail

// Entries of a length-N row whose column's k-th subindex equals y, in their
// original left-to-right order (a length N/n_k vector).
template <class T>
std::vector<T> subrow(const std::vector<T>& row, const SizeSequence& sizes, int k, int y) {
  detail::check_position(sizes, k, y, "subrow");
  if (static_cast<long long>(row.size()) != sizes.total())
    throw InputError("subrow: row length does not match the size sequence");
  const long long stride = detail::trailing_product(sizes, k);
  const long long nk = sizes.size_at(k);
  std::vector<T> out;
  out.reserve(static_cast<std::size_t>(sizes.total() / nk));
  for (long long c = 0; c < sizes.total(); ++c)
    if ((c / stride) % nk == y - 1) out.push_back(row[static_cast<std::size_t>(c)]);
  return out;
}

// Square submatrix of an NxN matrix: the rows whose k-th row subindex equals
// row_value and the columns whose k-th column subindex equals col_value, with
// both orders preserved.
template <class T>
DenseMatrix<T> submatrix(const DenseMatrix<T>& m, const SizeSequence& sizes, int k,
                         int row_value, int col_value) {
  detail::check_position(sizes, k, row_value, "submatrix");
  detail::check_position(sizes, k, col_value, "submatrix");
  if (m.rows() != sizes.total() || m.cols() != sizes.total())
    throw InputError("submatrix: matrix must be NxN for the size sequence");
  const long long stride = detail::trailing_product(sizes, k);
  const long long nk = sizes.size_at(k);
  std::vector<long long> keep_rows, keep_cols;
  for (long long x = 0; x < sizes.total(); ++x) {
    if ((x / stride) % nk == row_value - 1) keep_rows.push_back(x);
    if ((x / stride) % nk == col_value - 1) keep_cols.push_back(x);
  }
  DenseMatrix<T> out(static_cast<long long>(keep_rows.size()),
                     static_cast<long long>(keep_cols.size()));
  for (std::size_t r = 0; r < keep_rows.size(); ++r)
    for (std::size_t c = 0; c < keep_cols.size(); ++c)
      out(static_cast<long long>(r), static_cast<long long>(c)) = m(keep_rows[r], keep_cols[c]);
  return out;
}

}  // namespace kdef
