#include "kdef/generators.hpp"

#include <iostream>

namespace kdef {

namespace {

void check_pair(const ComplexMatrix& u, long long i, long long j, const char* who) {
  if (u.rows() != u.cols()) throw InputError(std::string(who) + ": matrix must be square");
  if (i < 1 || j <= i || j > u.rows())
    throw InputError(std::string(who) + ": need 1 <= i < j <= N");
}

// Flattened real and imaginary parts of the (i, j) generator, built without
// materializing the intermediate complex matrix: only rows i and j are
// nonzero, and row j is the negation of row i.
void append_generators(const ComplexMatrix& u, long long i, long long j, GeneratorSet& set) {
  const long long n = u.rows();
  std::vector<double> a(static_cast<std::size_t>(n * n), 0.0);
  std::vector<double> s(static_cast<std::size_t>(n * n), 0.0);
  for (long long c = 0; c < n; ++c) {
    const Complex v = u(i - 1, c) * std::conj(u(j - 1, c));
    a[static_cast<std::size_t>((i - 1) * n + c)] = v.real();
    a[static_cast<std::size_t>((j - 1) * n + c)] = -v.real();
    s[static_cast<std::size_t>((i - 1) * n + c)] = v.imag();
    s[static_cast<std::size_t>((j - 1) * n + c)] = -v.imag();
  }
  set.labels.push_back({i, j, GeneratorKind::A});
  set.vectors.push_back(std::move(a));
  set.labels.push_back({i, j, GeneratorKind::S});
  set.vectors.push_back(std::move(s));
}

}  // namespace

ComplexMatrix m_matrix(const ComplexMatrix& u, long long i, long long j) {
  check_pair(u, i, j, "m_matrix");
  const long long n = u.rows();
  ComplexMatrix out(n, n);
  for (long long c = 0; c < n; ++c) {
    const Complex v = u(i - 1, c) * std::conj(u(j - 1, c));
    out(i - 1, c) = v;
    out(j - 1, c) = -v;
  }
  return out;
}

std::pair<RealMatrix, RealMatrix> generator_pair(const ComplexMatrix& u, long long i,
                                                 long long j) {
  const ComplexMatrix m = m_matrix(u, i, j);
  return {real_part(m), imag_part(m)};
}

GeneratorSet spanning_set(const ComplexMatrix& u) {
  if (u.rows() != u.cols()) throw InputError("spanning_set: matrix must be square");
  if (!is_unitary(u, kUnitaryTolerance))
    std::cerr << "warning: spanning_set called on a matrix that is not unitary within "
              << kUnitaryTolerance << "\n";
  GeneratorSet set;
  set.n = u.rows();
  for (long long i = 1; i < set.n; ++i)
    for (long long j = i + 1; j <= set.n; ++j) append_generators(u, i, j, set);
  return set;
}

std::vector<double> vectorize(const RealMatrix& m) { return m.data(); }

void PatternKey::validate(const SizeSequence& sizes) const {
  if (fixed_positions.size() != fixed_values.size())
    throw InputError("PatternKey: positions and values differ in length");
  if (static_cast<int>(fixed_positions.size()) >= sizes.order())
    throw InputError("PatternKey: at least one position must stay free");
  int prev = 0;
  for (std::size_t q = 0; q < fixed_positions.size(); ++q) {
    const int k = fixed_positions[q];
    if (k < 1 || k > sizes.order()) throw InputError("PatternKey: position out of range");
    if (k <= prev) throw InputError("PatternKey: positions must be strictly increasing");
    prev = k;
    const int v = fixed_values[q];
    if (v < 1 || v > sizes.size_at(k)) throw InputError("PatternKey: value out of range");
  }
}

GeneratorSet pattern_subset(const ComplexMatrix& product, const SizeSequence& sizes,
                            const PatternKey& key) {
  key.validate(sizes);
  const long long n = sizes.total();
  if (product.rows() != n || product.cols() != n)
    throw InputError("pattern_subset: product does not match the size sequence");
  GeneratorSet set;
  set.n = n;
  for (long long i = 1; i < n; ++i) {
    const VectorIndex vi = ordinary_to_vector(i, sizes);
    for (long long j = i + 1; j <= n; ++j) {
      const VectorIndex vj = ordinary_to_vector(j, sizes);
      bool match = true;
      std::size_t q = 0;
      for (int k = 1; k <= sizes.order() && match; ++k) {
        const int a = vi[static_cast<std::size_t>(k - 1)];
        const int b = vj[static_cast<std::size_t>(k - 1)];
        if (q < key.fixed_positions.size() && key.fixed_positions[q] == k) {
          match = (a == key.fixed_values[q]) && (b == key.fixed_values[q]);
          ++q;
        } else {
          match = (a != b);
        }
      }
      if (match) append_generators(product, i, j, set);
    }
  }
  return set;
}

GeneratorSet pattern_subset(const FactorList& factors, const PatternKey& key) {
  return pattern_subset(factors.product(), factors.sizes(), key);
}

}  // namespace kdef
