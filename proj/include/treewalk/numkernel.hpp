#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace treewalk {

using Complex = std::complex<double>;

/// Dense row-major complex matrix. Every truncated operator in the library
/// is carried by one of these.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix diagonal(std::span<const Complex> diag);
  static ComplexMatrix diagonal(std::span<const double> diag);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  std::span<Complex> data() noexcept { return data_; }
  std::span<const Complex> data() const noexcept { return data_; }
  std::span<const Complex> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(Complex s);

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(Complex s, ComplexMatrix a);

/// Matrix product. Summation runs over k in increasing order for every
/// output entry, so the result is bit-reproducible. Structural zeros of
/// either factor are skipped, which keeps the shift/diagonal products of
/// the tree operators cheap at dimension ~4000.
ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexMatrix adjoint(const ComplexMatrix& m);

Complex trace(const ComplexMatrix& m);

double frobenius_norm(const ComplexMatrix& m);
double max_abs(const ComplexMatrix& m);

/// max |m(i,j)| over i, j with mask[i] && mask[j]; the residual of the
/// compression P m P for the coordinate projection P selected by mask.
double masked_max_abs(const ComplexMatrix& m, std::span<const bool> mask);

/// 2x2 block assembly [[tl, tr], [bl, br]].
ComplexMatrix block2x2(const ComplexMatrix& tl, const ComplexMatrix& tr,
                       const ComplexMatrix& bl, const ComplexMatrix& br);

ComplexMatrix sub_block(const ComplexMatrix& m, std::size_t row0, std::size_t col0,
                        std::size_t rows, std::size_t cols);

struct RankProfile {
  std::size_t kernel_dim = 0;
  std::size_t cokernel_dim = 0;
  std::vector<double> singular_values;  // nonincreasing
};

/// Numerical rank from singular values: rank = #{sigma_i > tol}.
RankProfile svd_rank_profile(const ComplexMatrix& m, double tol);

/// Thin SVD m = U diag(s) V^*. Columns of u and v are the left and right
/// singular vectors, ordered like `values` (nonincreasing).
struct SvdResult {
  std::vector<double> values;
  ComplexMatrix u;
  ComplexMatrix v;
};

SvdResult svd(const ComplexMatrix& m);

}  // namespace treewalk
