#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "kdef/errors.hpp"

namespace kdef {

using Complex = std::complex<double>;

// Dense row-major matrix with value semantics. Element access is 0-based;
// the combinatorial layer (indexing.hpp, generators.hpp) speaks 1-based
// indices and converts at the boundary.
template <class T>
class DenseMatrix {
 public:
  DenseMatrix() = default;

  DenseMatrix(long long rows, long long cols, T fill = T{})
      : rows_(rows), cols_(cols) {
    if (rows < 1 || cols < 1) throw InputError("matrix dimensions must be positive");
    data_.assign(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), fill);
  }

  static DenseMatrix identity(long long n) {
    DenseMatrix m(n, n);
    for (long long i = 0; i < n; ++i) m(i, i) = T{1};
    return m;
  }

  long long rows() const { return rows_; }
  long long cols() const { return cols_; }

  T& operator()(long long r, long long c) { return data_[static_cast<std::size_t>(r * cols_ + c)]; }
  const T& operator()(long long r, long long c) const {
    return data_[static_cast<std::size_t>(r * cols_ + c)];
  }

  std::vector<T>& data() { return data_; }
  const std::vector<T>& data() const { return data_; }

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  long long rows_ = 0;
  long long cols_ = 0;
  std::vector<T> data_;
};

using ComplexMatrix = DenseMatrix<Complex>;
using RealMatrix = DenseMatrix<double>;

// Kronecker product: entry at ((i1,i2),(j1,j2)) is a[i1,j1]*b[i2,j2], with the
// second index running fastest (row i1*b.rows()+i2, column j1*b.cols()+j2).
template <class T>
DenseMatrix<T> kron(const DenseMatrix<T>& a, const DenseMatrix<T>& b) {
  DenseMatrix<T> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (long long i1 = 0; i1 < a.rows(); ++i1)
    for (long long j1 = 0; j1 < a.cols(); ++j1) {
      const T f = a(i1, j1);
      for (long long i2 = 0; i2 < b.rows(); ++i2)
        for (long long j2 = 0; j2 < b.cols(); ++j2)
          out(i1 * b.rows() + i2, j1 * b.cols() + j2) = f * b(i2, j2);
    }
  return out;
}

// Entrywise product of equally sized matrices.
template <class T>
DenseMatrix<T> hadamard(const DenseMatrix<T>& a, const DenseMatrix<T>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw InputError("hadamard: dimension mismatch");
  DenseMatrix<T> out = a;
  for (std::size_t i = 0; i < out.data().size(); ++i) out.data()[i] *= b.data()[i];
  return out;
}

template <class T>
DenseMatrix<T> operator+(const DenseMatrix<T>& a, const DenseMatrix<T>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw InputError("operator+: dimension mismatch");
  DenseMatrix<T> out = a;
  for (std::size_t i = 0; i < out.data().size(); ++i) out.data()[i] += b.data()[i];
  return out;
}

template <class T>
DenseMatrix<T> operator-(const DenseMatrix<T>& a, const DenseMatrix<T>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw InputError("operator-: dimension mismatch");
  DenseMatrix<T> out = a;
  for (std::size_t i = 0; i < out.data().size(); ++i) out.data()[i] -= b.data()[i];
  return out;
}

template <class T, class S>
DenseMatrix<T> operator*(S scalar, const DenseMatrix<T>& a) {
  DenseMatrix<T> out = a;
  for (auto& x : out.data()) x = static_cast<T>(scalar * x);
  return out;
}

// Conjugate transpose.
ComplexMatrix dagger(const ComplexMatrix& a);

RealMatrix transpose(const RealMatrix& a);

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);

RealMatrix real_part(const ComplexMatrix& a);
RealMatrix imag_part(const ComplexMatrix& a);
ComplexMatrix to_complex(const RealMatrix& a);

double max_abs(const ComplexMatrix& a);
double max_abs(const RealMatrix& a);

// True iff u is square and max-norm of (dagger(u)*u - I) is at most tol.
bool is_unitary(const ComplexMatrix& u, double tol);

// Unitary discrete Fourier matrix: entry (j,k) = exp(2*pi*i*(j-1)*(k-1)/n)/sqrt(n), 1-based.
ComplexMatrix fourier(long long n);

// Haar-distributed random unitary, deterministic for a fixed seed. Sampling is
// a matrix of i.i.d. standard complex Gaussians followed by QR with the column
// phases corrected so the triangular factor has a positive real diagonal
// (plain QR alone is not Haar-distributed).
ComplexMatrix haar_unitary(long long n, std::uint64_t seed);

}  // namespace kdef
