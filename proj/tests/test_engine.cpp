#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "kdef/engine.hpp"
#include "kdef/factors.hpp"
#include "kdef/matrix.hpp"

using namespace kdef;

namespace {

ComplexMatrix random_unimodular_diagonal(long long n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> angle(0.0, 6.28318530717958647692);
  ComplexMatrix d(n, n);
  for (long long k = 0; k < n; ++k) d(k, k) = std::polar(1.0, angle(gen));
  return d;
}

ComplexMatrix permute_rows(const ComplexMatrix& u, const std::vector<long long>& perm) {
  ComplexMatrix out(u.rows(), u.cols());
  for (long long r = 0; r < u.rows(); ++r)
    for (long long c = 0; c < u.cols(); ++c) out(r, c) = u(perm[static_cast<std::size_t>(r)], c);
  return out;
}

RealMatrix random_real(long long n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  RealMatrix m(n, n);
  for (auto& x : m.data()) x = dist(gen);
  return m;
}

}  // namespace

TEST_CASE("generator span dimension of reference unitaries") {
  CHECK(dim_mspace(fourier(2)).rank == 1);
  CHECK(dim_mspace(fourier(6)).rank == 21);
  CHECK(dim_mspace(kron(fourier(2), fourier(2))).rank == 6);
  for (long long n = 2; n <= 6; ++n) CHECK(dim_mspace(ComplexMatrix::identity(n)).rank == 0);
  CHECK(dim_mspace(ComplexMatrix::identity(1)).rank == 0);
}

TEST_CASE("defect of reference unitaries") {
  CHECK(defect(fourier(2)) == 0);
  CHECK(defect(fourier(6)) == 4);
  for (long long n = 2; n <= 8; ++n)
    CHECK(defect(ComplexMatrix::identity(n)) == (n - 1) * (n - 1));

  CHECK(generalized_defect(fourier(2)) == 3);
  CHECK(generalized_defect(kron(fourier(2), fourier(2))) == 10);
  for (long long n = 2; n <= 6; ++n)
    CHECK(generalized_defect(ComplexMatrix::identity(n)) == n * n);
}

TEST_CASE("defect of generic unitaries is zero") {
  for (long long n : {3, 4, 5}) {
    CHECK(defect(haar_unitary(n, 3 * static_cast<std::uint64_t>(n))) == 0);
  }
}

TEST_CASE("reduced-product subspace dimensions") {
  const FactorList f22({fourier(2), fourier(2)});
  CHECK(subproduct_dim(f22, {}) == 2);
  CHECK(subproduct_dim(f22, {1}) == 1);
  CHECK(subproduct_dim(f22, {2}) == 1);
  CHECK_THROWS_AS(subproduct_dim(f22, {1, 2}), InputError);  // nothing retained
  CHECK_THROWS_AS(subproduct_dim(f22, {3}), InputError);
  CHECK_THROWS_AS(subproduct_dim(f22, {2, 1}), InputError);

  ComplexMatrix one(1, 1);
  one(0, 0) = Complex(1.0, 0.0);
  const FactorList with_one({one, fourier(3)});
  CHECK(subproduct_dim(with_one, {2}) == 0);  // retained 1x1 factor
  CHECK(subproduct_dim(with_one, {1}) == dim_mspace(fourier(3)).rank);
}

TEST_CASE("term-by-term dimension of a 2x2 pair") {
  const FactorList f22({fourier(2), fourier(2)});
  const auto report = dim_mspace_kron(f22);
  CHECK(report.n_total == 4);
  CHECK(report.dim_mspace == 6);
  CHECK(report.defect == 3);
  CHECK(report.generalized_defect == 10);
  CHECK(report.lower_bound == 10);
  CHECK(report.method == "decomposed");
  CHECK_FALSE(report.wall_times.empty());

  long long total = 0;
  for (const auto& term : report.per_subset_dims) {
    if (term.removed.empty()) {
      CHECK(term.dim == 2);
      CHECK(term.multiplicity == 1);
    } else {
      REQUIRE(term.removed.size() == 1);
      CHECK(term.dim == 1);
      CHECK(term.multiplicity == 2);
    }
    total += term.dim * term.multiplicity;
  }
  CHECK(total == 6);
}

TEST_CASE("single-factor and size-one-factor reports") {
  const auto single = dim_mspace_kron(FactorList({fourier(6)}));
  CHECK(single.defect == 4);
  CHECK(single.dim_mspace == 21);
  CHECK(single.lower_bound == 11);

  ComplexMatrix one(1, 1);
  one(0, 0) = Complex(1.0, 0.0);
  const auto padded = dim_mspace_kron(FactorList({one, fourier(2)}));
  CHECK(padded.n_total == 2);
  CHECK(padded.dim_mspace == 1);
  CHECK(padded.generalized_defect == 3);
}

TEST_CASE("decomposed and direct dimensions agree") {
  std::mt19937_64 gen(101);
  const std::vector<std::vector<int>> shapes = {{2, 2}, {2, 3}, {2, 2, 2}};
  for (const auto& shape : shapes)
    for (int trial = 0; trial < 3; ++trial) {
      std::vector<ComplexMatrix> fs;
      for (int n : shape) fs.push_back(haar_unitary(n, gen()));
      const FactorList factors(fs);
      const auto dec = dim_mspace_kron(factors);
      const auto dir = defect_report_direct(factors);
      CHECK(dec.dim_mspace == dir.dim_mspace);
      CHECK(dir.method == "direct");
      CHECK(dir.per_subset_dims.empty());
      CHECK(dec.n_total == dir.n_total);
    }
}

TEST_CASE("pattern subspaces meet only at the origin") {
  const FactorList f22({fourier(2), fourier(2)});
  const auto check = verify_direct_sum(f22);
  CHECK(check.ok);
  CHECK(check.direct_rank == 6);
  CHECK(check.rank_sum == 6);
  REQUIRE(check.per_key.size() == 5);
  long long empties = 0;
  for (const auto& pk : check.per_key) {
    if (pk.key.fixed_positions.empty()) {
      CHECK(pk.rank == 2);
      CHECK(pk.generator_count == 4);
      ++empties;
    } else {
      CHECK(pk.rank == 1);
      CHECK(pk.generator_count == 2);
    }
  }
  CHECK(empties == 1);

  const FactorList mixed({haar_unitary(2, 7), haar_unitary(3, 8)});
  CHECK(verify_direct_sum(mixed).ok);

  const auto single = verify_direct_sum(FactorList({haar_unitary(4, 9)}));
  CHECK(single.ok);
  CHECK(single.per_key.size() == 1);
}

TEST_CASE("materialization guard") {
  const FactorList big({haar_unitary(5, 1), haar_unitary(5, 2), haar_unitary(5, 3)});
  CHECK_THROWS_AS(big.product(), GuardExceededError);
  CHECK_THROWS_AS(dim_mspace_kron(big), GuardExceededError);
  CHECK_THROWS_AS(defect_report_direct(big), GuardExceededError);
}

TEST_CASE("feasibility of explicit directions") {
  const auto u = haar_unitary(4, 77);

  RealMatrix ones(4, 4, 1.0);
  CHECK(feasible_space_contains(u, ones));

  for (const auto& mask : phasing_basis(4)) CHECK(feasible_space_contains(u, mask));

  // a Gaussian direction is not feasible for a generic unitary
  CHECK_FALSE(feasible_space_contains(u, random_real(4, 5)));

  CHECK_THROWS_AS(feasible_space_contains(u, RealMatrix(3, 3)), InputError);
}

TEST_CASE("phasing masks") {
  const auto masks = phasing_basis(2);
  REQUIRE(masks.size() == 4);
  // first the row masks, then the column masks
  CHECK(masks[0](0, 0) == 1.0);
  CHECK(masks[0](0, 1) == 1.0);
  CHECK(masks[0](1, 0) == 0.0);
  CHECK(masks[2](0, 0) == 1.0);
  CHECK(masks[2](1, 0) == 1.0);
  CHECK(masks[2](0, 1) == 0.0);

  for (long long n = 2; n <= 8; ++n) {
    const auto family = phasing_basis(n);
    std::vector<std::vector<double>> flat;
    for (const auto& m : family) flat.push_back(vectorize(m));
    CHECK(numerical_rank(flat).rank == 2 * n - 1);
  }
}

TEST_CASE("products of feasible directions are feasible") {
  const auto u = haar_unitary(2, 33);
  const auto v = haar_unitary(3, 34);
  const auto uv = kron(u, v);

  const auto bu = feasible_space_basis(u);
  const auto bv = feasible_space_basis(v);
  CHECK(bu.size() == static_cast<std::size_t>(generalized_defect(u)));
  CHECK(bv.size() == static_cast<std::size_t>(generalized_defect(v)));

  for (const auto& r1 : bu)
    for (const auto& r2 : bv) {
      const auto prod = kron_feasible_product(r1, r2);
      CHECK(prod.rows() == 6);
      CHECK(feasible_space_contains(uv, prod, 1e-9));
    }

  // the feasible space is linear, so combinations stay feasible
  std::mt19937_64 gen(51);
  std::normal_distribution<double> dist(0.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    RealMatrix combo(6, 6);
    for (const auto& r1 : bu)
      for (const auto& r2 : bv) {
        const double c = dist(gen);
        combo = combo + c * kron_feasible_product(r1, r2);
      }
    CHECK(feasible_space_contains(uv, combo, 1e-9));
  }

  RealMatrix zero(6, 6);
  CHECK(feasible_space_contains(uv, zero));
}

TEST_CASE("constraint system route agrees with the generator route") {
  std::vector<ComplexMatrix> cases;
  for (long long n = 2; n <= 6; ++n) cases.push_back(fourier(n));
  for (long long n = 3; n <= 6; ++n) cases.push_back(haar_unitary(n, 400 + static_cast<std::uint64_t>(n)));
  cases.push_back(kron(fourier(2), fourier(2)));

  for (const auto& u : cases) {
    const long long g = generalized_defect(u);
    CHECK(feasible_space_dim(u) == g);
    const auto basis = feasible_space_basis(u);
    CHECK(basis.size() == static_cast<std::size_t>(g));
    for (const auto& b : basis) CHECK(feasible_space_contains(u, b, 1e-8));
  }

  ComplexMatrix too_big(17, 17);
  for (long long k = 0; k < 17; ++k) too_big(k, k) = Complex(1.0, 0.0);
  CHECK_THROWS_AS(feasible_space_constraint_rank(too_big), GuardExceededError);
}

TEST_CASE("defect is invariant under phasing and permutations") {
  const auto f6 = fourier(6);
  CHECK(defect(std::polar(1.0, 0.737) * f6) == 4);

  const auto dl = random_unimodular_diagonal(6, 61);
  const auto dr = random_unimodular_diagonal(6, 62);
  CHECK(defect(matmul(dl, matmul(f6, dr))) == 4);

  CHECK(defect(permute_rows(f6, {3, 0, 5, 1, 4, 2})) == 4);
  // column permutation via transpose of a row permutation of the transpose;
  // fourier matrices are symmetric, so permuting rows of f6 covers both.

  const auto u = haar_unitary(5, 63);
  const auto du = random_unimodular_diagonal(5, 64);
  CHECK(defect(matmul(du, u)) == defect(u));
}

TEST_CASE("generalized defect multiplies supermultiplicatively") {
  std::mt19937_64 gen(111);
  for (int trial = 0; trial < 10; ++trial) {
    const long long n1 = 2 + static_cast<long long>(gen() % 2);
    const long long n2 = 2 + static_cast<long long>(gen() % 2);
    const auto u = haar_unitary(n1, gen());
    const auto v = haar_unitary(n2, gen());
    const long long gu = generalized_defect(u);
    const long long gv = generalized_defect(v);
    const long long guv = generalized_defect(kron(u, v));
    CHECK(guv >= gu * gv);
  }
}

TEST_CASE("report internal consistency") {
  std::mt19937_64 gen(121);
  const std::vector<std::vector<int>> shapes = {{2, 2}, {2, 3}, {3, 3}};
  for (const auto& shape : shapes) {
    std::vector<ComplexMatrix> fs;
    for (int n : shape) fs.push_back(haar_unitary(n, gen()));
    const FactorList factors(fs);
    const auto report = dim_mspace_kron(factors);
    const long long n = report.n_total;
    CHECK(report.generalized_defect == report.defect + 2 * n - 1);
    CHECK(report.dim_mspace == n * n - report.generalized_defect);
    CHECK(report.defect >= 0);
    CHECK(report.generalized_defect >= report.lower_bound);
    CHECK(report.min_gap_ratio >= kGapRatioWarningThreshold);
  }
}
