#include "treewalk/numkernel.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

#include "treewalk/errors.hpp"

namespace treewalk {

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, Complex{}) {}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const Complex> diag) {
  ComplexMatrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> diag) {
  ComplexMatrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_)
    throw InvalidArgument("matrix sum: dimension mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_)
    throw InvalidArgument("matrix difference: dimension mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex s) {
  for (auto& x : data_) x *= s;
  return *this;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }

namespace {

// Column indices of the nonzero entries of each row.
std::vector<std::vector<std::size_t>> row_support(const ComplexMatrix& m) {
  std::vector<std::vector<std::size_t>> support(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const auto r = m.row(i);
    for (std::size_t j = 0; j < r.size(); ++j)
      if (r[j] != Complex{}) support[i].push_back(j);
  }
  return support;
}

}  // namespace

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows())
    throw InvalidArgument("matmul: A.cols != B.rows");
  ComplexMatrix out(a.rows(), b.cols());
  const auto b_support = row_support(b);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const auto a_row = a.row(i);
    Complex* out_row = out.data().data() + i * out.cols();
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a_row[k];
      if (aik == Complex{}) continue;
      const auto b_row = b.row(k);
      for (std::size_t j : b_support[k]) out_row[j] += aik * b_row[j];
    }
  }
  return out;
}

ComplexMatrix adjoint(const ComplexMatrix& m) {
  ComplexMatrix out(m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(j, i) = std::conj(m(i, j));
  return out;
}

Complex trace(const ComplexMatrix& m) {
  if (!m.square()) throw InvalidArgument("trace: matrix is not square");
  Complex t{};
  for (std::size_t i = 0; i < m.rows(); ++i) t += m(i, i);
  return t;
}

double frobenius_norm(const ComplexMatrix& m) {
  double s = 0.0;
  for (const auto& x : m.data()) s += std::norm(x);
  return std::sqrt(s);
}

double max_abs(const ComplexMatrix& m) {
  double r = 0.0;
  for (const auto& x : m.data()) r = std::max(r, std::abs(x));
  return r;
}

double masked_max_abs(const ComplexMatrix& m, std::span<const bool> mask) {
  if (mask.size() != m.rows() || mask.size() != m.cols())
    throw InvalidArgument("masked_max_abs: mask size mismatch");
  double r = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (!mask[i]) continue;
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (mask[j]) r = std::max(r, std::abs(m(i, j)));
  }
  return r;
}

ComplexMatrix block2x2(const ComplexMatrix& tl, const ComplexMatrix& tr,
                       const ComplexMatrix& bl, const ComplexMatrix& br) {
  if (tl.rows() != tr.rows() || bl.rows() != br.rows() || tl.cols() != bl.cols() ||
      tr.cols() != br.cols())
    throw InvalidArgument("block2x2: inconsistent block shapes");
  const std::size_t r0 = tl.rows(), c0 = tl.cols();
  ComplexMatrix out(r0 + bl.rows(), c0 + tr.cols());
  auto place = [&out](const ComplexMatrix& blk, std::size_t r, std::size_t c) {
    for (std::size_t i = 0; i < blk.rows(); ++i)
      for (std::size_t j = 0; j < blk.cols(); ++j) out(r + i, c + j) = blk(i, j);
  };
  place(tl, 0, 0);
  place(tr, 0, c0);
  place(bl, r0, 0);
  place(br, r0, c0);
  return out;
}

ComplexMatrix sub_block(const ComplexMatrix& m, std::size_t row0, std::size_t col0,
                        std::size_t rows, std::size_t cols) {
  if (row0 + rows > m.rows() || col0 + cols > m.cols())
    throw InvalidArgument("sub_block: out of range");
  ComplexMatrix out(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) out(i, j) = m(row0 + i, col0 + j);
  return out;
}

namespace {

using EigenMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

EigenMatrix to_eigen(const ComplexMatrix& m) {
  for (const auto& x : m.data())
    if (!std::isfinite(x.real()) || !std::isfinite(x.imag()))
      throw InvalidArgument("svd: non-finite matrix entry");
  EigenMatrix e(static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
  std::copy(m.data().begin(), m.data().end(), e.data());
  return e;
}

ComplexMatrix from_eigen(const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>& e) {
  ComplexMatrix m(static_cast<std::size_t>(e.rows()), static_cast<std::size_t>(e.cols()));
  for (Eigen::Index i = 0; i < e.rows(); ++i)
    for (Eigen::Index j = 0; j < e.cols(); ++j)
      m(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = e(i, j);
  return m;
}

std::vector<double> to_vector(const Eigen::VectorXd& v) {
  return {v.data(), v.data() + v.size()};
}

}  // namespace

// Divide-and-conquer SVD (Eigen BDCSVD), iterated to working precision.
// Single-threaded and therefore deterministic for a fixed input.
RankProfile svd_rank_profile(const ComplexMatrix& m, double tol) {
  if (!(tol > 0.0)) throw InvalidArgument("svd_rank_profile: tol must be > 0");
  const EigenMatrix e = to_eigen(m);
  RankProfile out;
  if (m.rows() == 0 || m.cols() == 0) {
    out.kernel_dim = m.cols();
    out.cokernel_dim = m.rows();
    return out;
  }
  Eigen::BDCSVD<Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>> solver(e);
  out.singular_values = to_vector(solver.singularValues());
  const auto rank = static_cast<std::size_t>(std::count_if(
      out.singular_values.begin(), out.singular_values.end(), [tol](double s) { return s > tol; }));
  out.kernel_dim = m.cols() - rank;
  out.cokernel_dim = m.rows() - rank;
  return out;
}

SvdResult svd(const ComplexMatrix& m) {
  const EigenMatrix e = to_eigen(m);
  Eigen::BDCSVD<Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>> solver(
      e, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return {to_vector(solver.singularValues()), from_eigen(solver.matrixU()),
          from_eigen(solver.matrixV())};
}

}  // namespace treewalk
