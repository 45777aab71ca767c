#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "treewalk/errors.hpp"
#include "treewalk/numkernel.hpp"

using namespace treewalk;

namespace {

ComplexMatrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c) {
  std::normal_distribution<double> g;
  ComplexMatrix m(r, c);
  for (auto& z : m.data()) z = {g(rng), g(rng)};
  return m;
}

// Unitary from Gram-Schmidt on a random square matrix.
ComplexMatrix random_unitary(std::mt19937_64& rng, std::size_t n) {
  ComplexMatrix m = random_matrix(rng, n, n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < j; ++k) {
      Complex dot = 0.0;
      for (std::size_t i = 0; i < n; ++i) dot += std::conj(m(i, k)) * m(i, j);
      for (std::size_t i = 0; i < n; ++i) m(i, j) -= dot * m(i, k);
    }
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) norm += std::norm(m(i, j));
    norm = std::sqrt(norm);
    for (std::size_t i = 0; i < n; ++i) m(i, j) /= norm;
  }
  return m;
}

}  // namespace

TEST_SUITE("numkernel") {

TEST_CASE("matmul small cases") {
  std::mt19937_64 rng(7);
  const ComplexMatrix m = random_matrix(rng, 3, 4);
  CHECK(matmul(ComplexMatrix::identity(3), m) == m);
  CHECK(max_abs(matmul(m, ComplexMatrix(4, 2))) == 0.0);

  ComplexMatrix shift(2, 2), coshift(2, 2);
  shift(0, 1) = 1.0;
  coshift(1, 0) = 1.0;
  ComplexMatrix expected(2, 2);
  expected(0, 0) = 1.0;
  CHECK(matmul(shift, coshift) == expected);

  CHECK_THROWS_AS(matmul(m, m), InvalidArgument);
}

TEST_CASE("matmul is associative on random triples") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    const ComplexMatrix a = random_matrix(rng, 6, 5);
    const ComplexMatrix b = random_matrix(rng, 5, 7);
    const ComplexMatrix c = random_matrix(rng, 7, 4);
    const ComplexMatrix lhs = matmul(matmul(a, b), c);
    const ComplexMatrix rhs = matmul(a, matmul(b, c));
    CHECK(frobenius_norm(lhs - rhs) / frobenius_norm(lhs) < 1e-12);
  }
}

TEST_CASE("matmul is deterministic") {
  std::mt19937_64 rng(3);
  const ComplexMatrix a = random_matrix(rng, 30, 40);
  const ComplexMatrix b = random_matrix(rng, 40, 20);
  CHECK(matmul(a, b) == matmul(a, b));
}

TEST_CASE("adjoint is an exact involution") {
  std::mt19937_64 rng(5);
  const ComplexMatrix m = random_matrix(rng, 4, 6);
  CHECK(adjoint(adjoint(m)) == m);
  CHECK(adjoint(m)(2, 1) == std::conj(m(1, 2)));
}

TEST_CASE("trace") {
  CHECK(trace(ComplexMatrix::identity(5)) == Complex(5.0));
  ComplexMatrix nil(2, 2);
  nil(0, 1) = 1.0;
  CHECK(trace(nil) == Complex(0.0));
  const std::vector<double> proj{1.0, 0.0, 0.0, 0.0};
  CHECK(trace(ComplexMatrix::diagonal(proj)) == Complex(1.0));
  CHECK_THROWS_AS(trace(ComplexMatrix(2, 3)), InvalidArgument);
}

TEST_CASE("svd_rank_profile examples") {
  const RankProfile zero = svd_rank_profile(ComplexMatrix(3, 3), 1e-8);
  CHECK(zero.kernel_dim == 3);
  CHECK(zero.cokernel_dim == 3);
  CHECK(zero.singular_values == std::vector<double>{0.0, 0.0, 0.0});

  const RankProfile id = svd_rank_profile(ComplexMatrix::identity(4), 1e-8);
  CHECK(id.kernel_dim == 0);
  CHECK(id.cokernel_dim == 0);
  for (double s : id.singular_values) CHECK(s == doctest::Approx(1.0).epsilon(1e-14));

  const std::vector<double> d{1.0, 1e-12};
  const RankProfile thr = svd_rank_profile(ComplexMatrix::diagonal(d), 1e-8);
  CHECK(thr.kernel_dim == 1);
  CHECK(thr.cokernel_dim == 1);
  CHECK(thr.singular_values[0] == doctest::Approx(1.0));
  CHECK(thr.singular_values[1] == doctest::Approx(1e-12).epsilon(1e-6));
}

TEST_CASE("svd_rank_profile rectangular and errors") {
  ComplexMatrix m(2, 3);
  m(0, 0) = 1.0;
  m(1, 1) = 2.0;
  const RankProfile r = svd_rank_profile(m, 1e-8);
  CHECK(r.kernel_dim == 1);
  CHECK(r.cokernel_dim == 0);
  CHECK(r.singular_values.front() == doctest::Approx(2.0));

  CHECK_THROWS_AS(svd_rank_profile(m, 0.0), InvalidArgument);
  m(1, 2) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(svd_rank_profile(m, 1e-8), InvalidArgument);
}

TEST_CASE("kernel of M equals cokernel of M*") {
  std::mt19937_64 rng(13);
  const ComplexMatrix a = random_matrix(rng, 8, 3);
  const ComplexMatrix m = matmul(a, random_matrix(rng, 3, 6));  // rank 3, 8x6
  const RankProfile r = svd_rank_profile(m, 1e-8);
  const RankProfile ra = svd_rank_profile(adjoint(m), 1e-8);
  CHECK(r.kernel_dim == 3);
  CHECK(r.cokernel_dim == 5);
  CHECK(r.kernel_dim == ra.cokernel_dim);
  CHECK(r.cokernel_dim == ra.kernel_dim);
}

TEST_CASE("singular values of a unitary are 1") {
  std::mt19937_64 rng(17);
  const ComplexMatrix u = random_unitary(rng, 12);
  for (double s : svd_rank_profile(u, 1e-8).singular_values) CHECK(std::abs(s - 1.0) < 1e-12);
}

TEST_CASE("svd reconstructs the matrix") {
  std::mt19937_64 rng(19);
  const ComplexMatrix m = random_matrix(rng, 7, 5);
  const SvdResult s = svd(m);
  ComplexMatrix us = s.u;
  for (std::size_t i = 0; i < us.rows(); ++i)
    for (std::size_t j = 0; j < us.cols(); ++j) us(i, j) *= s.values[j];
  CHECK(max_abs(matmul(us, adjoint(s.v)) - m) < 1e-12);
  for (std::size_t k = 1; k < s.values.size(); ++k) CHECK(s.values[k] <= s.values[k - 1]);
}

TEST_CASE("block helpers") {
  std::mt19937_64 rng(23);
  const ComplexMatrix a = random_matrix(rng, 2, 2), b = random_matrix(rng, 2, 3),
                      c = random_matrix(rng, 1, 2), d = random_matrix(rng, 1, 3);
  const ComplexMatrix m = block2x2(a, b, c, d);
  CHECK(m.rows() == 3);
  CHECK(m.cols() == 5);
  CHECK(sub_block(m, 0, 2, 2, 3) == b);
  CHECK(sub_block(m, 2, 0, 1, 2) == c);

  const bool mask[3] = {true, false, true};
  ComplexMatrix z(3, 3);
  z(1, 1) = 9.0;
  z(0, 2) = 2.0;
  CHECK(masked_max_abs(z, mask) == 2.0);
}

}  // TEST_SUITE
