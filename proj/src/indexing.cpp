#include "kdef/indexing.hpp"

#include <limits>
#include <string>

namespace kdef {

SizeSequence::SizeSequence(std::vector<int> sizes) : sizes_(std::move(sizes)) {
  if (sizes_.empty()) throw InputError("SizeSequence: at least one size required");
  total_ = 1;
  for (int n : sizes_) {
    if (n < 1) throw InputError("SizeSequence: sizes must be positive");
    if (total_ > std::numeric_limits<long long>::max() / n)
      throw InputError("SizeSequence: size product overflows");
    total_ *= n;
  }
}

int SizeSequence::size_at(int k) const {
  if (k < 1 || k > order()) throw InputError("SizeSequence: position out of range");
  return sizes_[static_cast<std::size_t>(k - 1)];
}

namespace detail {

long long trailing_product(const SizeSequence& sizes, int k) {
  long long p = 1;
  for (int q = k + 1; q <= sizes.order(); ++q) p *= sizes.size_at(q);
  return p;
}

void check_position(const SizeSequence& sizes, int k, int value, const char* who) {
  if (k < 1 || k > sizes.order())
    throw InputError(std::string(who) + ": position out of range");
  if (value < 1 || value > sizes.size_at(k))
    throw InputError(std::string(who) + ": value out of range for position");
}

}  // namespace detail

VectorIndex ordinary_to_vector(long long i, const SizeSequence& sizes) {
  if (i < 1 || i > sizes.total()) throw InputError("ordinary_to_vector: index out of range");
  VectorIndex v(static_cast<std::size_t>(sizes.order()));
  long long t = i - 1;
  for (int k = sizes.order(); k >= 1; --k) {
    const int nk = sizes.size_at(k);
    v[static_cast<std::size_t>(k - 1)] = static_cast<int>(t % nk) + 1;
    t /= nk;
  }
  return v;
}

long long vector_to_ordinary(const VectorIndex& v, const SizeSequence& sizes) {
  if (static_cast<int>(v.size()) != sizes.order())
    throw InputError("vector_to_ordinary: component count does not match sizes");
  long long o = 0;
  for (int k = 1; k <= sizes.order(); ++k) {
    const int ik = v[static_cast<std::size_t>(k - 1)];
    if (ik < 1 || ik > sizes.size_at(k))
      throw InputError("vector_to_ordinary: component out of range");
    o = o * sizes.size_at(k) + (ik - 1);
  }
  return o + 1;
}

namespace {

// Shared validation and removal for reduce_index / reduce_sizes.
std::vector<int> drop_positions(const std::vector<int>& values, const std::vector<int>& drop,
                                const char* who) {
  const int r = static_cast<int>(values.size());
  int prev = 0;
  for (int p : drop) {
    if (p < 1 || p > r) throw InputError(std::string(who) + ": position out of range");
    if (p <= prev) throw InputError(std::string(who) + ": positions must be strictly increasing");
    prev = p;
  }
  if (static_cast<int>(drop.size()) == r)
    throw InputError(std::string(who) + ": cannot drop every position");
  std::vector<int> out;
  out.reserve(values.size() - drop.size());
  std::size_t d = 0;
  for (int k = 1; k <= r; ++k) {
    if (d < drop.size() && drop[d] == k) {
      ++d;
      continue;
    }
    out.push_back(values[static_cast<std::size_t>(k - 1)]);
  }
  return out;
}

}  // namespace

VectorIndex reduce_index(const VectorIndex& v, const std::vector<int>& positions) {
  return drop_positions(v, positions, "reduce_index");
}

SizeSequence reduce_sizes(const SizeSequence& sizes, const std::vector<int>& positions) {
  return SizeSequence(drop_positions(sizes.sizes(), positions, "reduce_sizes"));
}

}  // namespace kdef
