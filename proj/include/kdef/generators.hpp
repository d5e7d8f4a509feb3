#pragma once

#include <utility>
#include <vector>

#include "kdef/factors.hpp"
#include "kdef/indexing.hpp"
#include "kdef/matrix.hpp"

namespace kdef {

// Each row pair (i, j) of a unitary contributes two real generator matrices:
// kind A is the real part of m_matrix(u, i, j), kind S the imaginary part.
enum class GeneratorKind { A, S };

struct GeneratorLabel {
  long long i = 0;  // 1-based, i < j
  long long j = 0;
  GeneratorKind kind = GeneratorKind::A;

  friend bool operator==(const GeneratorLabel&, const GeneratorLabel&) = default;
};

// A labelled family of flattened real N x N matrices. Vectors are row-major
// flattenings of matrices supported on rows i and j only, with row j the
// negation of row i.
struct GeneratorSet {
  long long n = 0;  // ambient side length; vectors have length n*n
  std::vector<GeneratorLabel> labels;
  std::vector<std::vector<double>> vectors;
};

// Complex generator matrix for the row pair (i, j): row i is the entrywise
// product of row i of u with the conjugate of row j, row j its negation, all
// other rows zero. Indices are 1-based and must satisfy 1 <= i < j <= N.
ComplexMatrix m_matrix(const ComplexMatrix& u, long long i, long long j);

// (real part, imaginary part) of m_matrix(u, i, j).
std::pair<RealMatrix, RealMatrix> generator_pair(const ComplexMatrix& u, long long i, long long j);

// All 2 * N(N-1)/2 generators of u, flattened, in deterministic order:
// lexicographic in (i, j), kind A before kind S. Construction is defined for
// any square matrix; a non-unitary input only triggers a warning on stderr.
GeneratorSet spanning_set(const ComplexMatrix& u);

// Row-major flattening; the Euclidean inner product of two flattenings equals
// trace(A * B^T).
std::vector<double> vectorize(const RealMatrix& m);

// Constraint pattern on the vector indices of a generator's row pair: the
// pair must agree (with the given values) at the fixed positions and differ
// at every other position. An empty key fixes nothing: all positions differ.
struct PatternKey {
  std::vector<int> fixed_positions;  // strictly increasing, 1-based, size p <= r-1
  std::vector<int> fixed_values;     // fixed_values[q] in 1..n_{fixed_positions[q]}

  void validate(const SizeSequence& sizes) const;

  friend bool operator==(const PatternKey&, const PatternKey&) = default;
};

// Generators of the materialized product whose index pairs match the key.
// The set is empty whenever some free position has size 1 (no two indices can
// differ there).
GeneratorSet pattern_subset(const FactorList& factors, const PatternKey& key);

// Same selection against an already materialized product; product must be
// N x N for the size sequence.
GeneratorSet pattern_subset(const ComplexMatrix& product, const SizeSequence& sizes,
                            const PatternKey& key);

}  // namespace kdef
