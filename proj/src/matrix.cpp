#include "kdef/matrix.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>

namespace kdef {

ComplexMatrix dagger(const ComplexMatrix& a) {
  ComplexMatrix out(a.cols(), a.rows());
  for (long long r = 0; r < a.rows(); ++r)
    for (long long c = 0; c < a.cols(); ++c) out(c, r) = std::conj(a(r, c));
  return out;
}

RealMatrix transpose(const RealMatrix& a) {
  RealMatrix out(a.cols(), a.rows());
  for (long long r = 0; r < a.rows(); ++r)
    for (long long c = 0; c < a.cols(); ++c) out(c, r) = a(r, c);
  return out;
}

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) throw InputError("matmul: inner dimensions disagree");
  ComplexMatrix out(a.rows(), b.cols());
  for (long long r = 0; r < a.rows(); ++r)
    for (long long k = 0; k < a.cols(); ++k) {
      const Complex f = a(r, k);
      if (f == Complex{}) continue;
      for (long long c = 0; c < b.cols(); ++c) out(r, c) += f * b(k, c);
    }
  return out;
}

RealMatrix real_part(const ComplexMatrix& a) {
  RealMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.data().size(); ++i) out.data()[i] = a.data()[i].real();
  return out;
}

RealMatrix imag_part(const ComplexMatrix& a) {
  RealMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.data().size(); ++i) out.data()[i] = a.data()[i].imag();
  return out;
}

ComplexMatrix to_complex(const RealMatrix& a) {
  ComplexMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.data().size(); ++i) out.data()[i] = Complex(a.data()[i], 0.0);
  return out;
}

double max_abs(const ComplexMatrix& a) {
  double m = 0.0;
  for (const auto& x : a.data()) m = std::max(m, std::abs(x));
  return m;
}

double max_abs(const RealMatrix& a) {
  double m = 0.0;
  for (const auto& x : a.data()) m = std::max(m, std::abs(x));
  return m;
}

bool is_unitary(const ComplexMatrix& u, double tol) {
  if (u.rows() != u.cols()) throw InputError("is_unitary: matrix must be square");
  ComplexMatrix gram = matmul(dagger(u), u);
  for (long long i = 0; i < gram.rows(); ++i) gram(i, i) -= 1.0;
  return max_abs(gram) <= tol;
}

ComplexMatrix fourier(long long n) {
  if (n < 1) throw InputError("fourier: n must be positive");
  ComplexMatrix out(n, n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (long long j = 0; j < n; ++j)
    for (long long k = 0; k < n; ++k) {
      // Reduce the exponent mod n first so the angle stays in [0, 2*pi).
      const long long e = (j * k) % n;
      // Angles landing on an axis are exact; std::polar would leave ~1e-17
      // residue at pi, making e.g. the n = 2 matrix not quite real.
      if ((4 * e) % n == 0) {
        switch ((4 * e / n) % 4) {
          case 0: out(j, k) = Complex(scale, 0.0); break;
          case 1: out(j, k) = Complex(0.0, scale); break;
          case 2: out(j, k) = Complex(-scale, 0.0); break;
          default: out(j, k) = Complex(0.0, -scale); break;
        }
      } else {
        out(j, k) = std::polar(scale, 2.0 * std::numbers::pi * static_cast<double>(e) /
                                          static_cast<double>(n));
      }
    }
  return out;
}

ComplexMatrix haar_unitary(long long n, std::uint64_t seed) {
  if (n < 1) throw InputError("haar_unitary: n must be positive");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXcd g(n, n);
  for (long long r = 0; r < n; ++r)
    for (long long c = 0; c < n; ++c) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      g(r, c) = Complex(re, im);
    }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Absorb the diagonal phases of R into Q so the triangular factor of the
  // corrected decomposition has a positive real diagonal.
  for (long long c = 0; c < n; ++c) {
    const Complex d = r(c, c);
    const double m = std::abs(d);
    q.col(c) *= (m > 0.0) ? d / m : Complex(1.0, 0.0);
  }
  // One Newton-Schulz step squares away the QR orthonormality residue (a few
  // eps down to ~1 ulp). Downstream rank decisions sit right at that scale:
  // entrywise row products amplify any residue by 1/|entry|, so the raw QR
  // output can shed spurious dimensions past the rank threshold.
  q = 0.5 * q * (3.0 * Eigen::MatrixXcd::Identity(n, n) - q.adjoint() * q);
  ComplexMatrix out(n, n);
  for (long long rr = 0; rr < n; ++rr)
    for (long long cc = 0; cc < n; ++cc) out(rr, cc) = q(rr, cc);
  return out;
}

}  // namespace kdef
