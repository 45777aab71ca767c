#include "treewalk/onedim.hpp"

#include <cmath>
#include <memory>
#include <sstream>

#include "treewalk/errors.hpp"

namespace treewalk {

namespace {

constexpr double kCriticalA = 0.70710678118654752440;  // 1/sqrt 2
constexpr double kCriticalMargin = 0.05;

// Unit vector spanning the range of a rank-one 2x2 projection, taken from
// its larger column.
std::pair<Complex, Complex> range_vector(Complex p00, Complex p01, Complex p10, Complex p11) {
  const double n0 = std::norm(p00) + std::norm(p10);
  const double n1 = std::norm(p01) + std::norm(p11);
  if (n0 >= n1) {
    const double s = std::sqrt(n0);
    return {p00 / s, p10 / s};
  }
  const double s = std::sqrt(n1);
  return {p01 / s, p11 / s};
}

}  // namespace

LineBundle build_line(const LineWalkSpec& spec, std::size_t halfwidth) {
  if (halfwidth < 10) throw InvalidArgument("line halfwidth must be at least 10");
  if (2 * spec.support_radius() > static_cast<std::int64_t>(halfwidth))
    throw InvalidArgument("walk middle extends past [-N/2, N/2]; increase the halfwidth");

  LineBundle b;
  b.halfwidth = halfwidth;
  b.a_left = spec.left_tail.a;
  b.a_right = spec.right_tail.a;
  const std::size_t m = b.sites();

  b.L = ComplexMatrix(m, m);
  for (std::size_t j = 0; j + 1 < m; ++j) b.L(j + 1, j) = 1.0;

  const double r = 1.0 / std::sqrt(2.0);
  b.Gamma = r * block2x2(ComplexMatrix::identity(m), adjoint(b.L), b.L,
                         -1.0 * ComplexMatrix::identity(m));

  b.C = ComplexMatrix(2 * m, 2 * m);
  for (std::size_t i = 0; i < m; ++i) {
    const SphereCoeff c = spec.at(b.site(i));
    b.C(i, i) = c.a;
    b.C(i, m + i) = std::conj(c.b);
    b.C(m + i, i) = c.b;
    b.C(m + i, m + i) = -c.a;
  }
  b.U = matmul(b.Gamma, b.C);
  b.Q = b.U - adjoint(b.U);

  const ComplexMatrix id = ComplexMatrix::identity(2 * m);
  b.Pplus = 0.5 * (id + b.C);
  b.Pminus = 0.5 * (id - b.C);

  b.basis_plus = ComplexMatrix(2 * m, m);
  b.basis_minus = ComplexMatrix(2 * m, m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto [p0, p1] = range_vector(b.Pplus(i, i), b.Pplus(i, m + i), b.Pplus(m + i, i),
                                       b.Pplus(m + i, m + i));
    b.basis_plus(i, i) = p0;
    b.basis_plus(m + i, i) = p1;
    const auto [q0, q1] = range_vector(b.Pminus(i, i), b.Pminus(i, m + i), b.Pminus(m + i, i),
                                       b.Pminus(m + i, m + i));
    b.basis_minus(i, i) = q0;
    b.basis_minus(m + i, i) = q1;
  }
  return b;
}

ComplexMatrix chirality_block(const LineBundle& b) {
  return matmul(adjoint(b.basis_minus), matmul(b.Q, b.basis_plus));
}

std::vector<bool> line_edge_sites(const LineBundle& b) {
  std::vector<bool> edge(b.sites());
  const auto n = static_cast<double>(b.halfwidth);
  for (std::size_t i = 0; i < edge.size(); ++i)
    edge[i] = std::abs(static_cast<double>(b.site(i))) > 0.9 * n;
  return edge;
}

FredholmResult fredholm_index(const LineBundle& b, double tol) {
  for (double a : {b.a_left, b.a_right}) {
    if (std::abs(std::abs(a) - kCriticalA) < kCriticalMargin) {
      std::ostringstream os;
      os << "|a| = " << std::abs(a) << " at infinity is within " << kCriticalMargin
         << " of 1/sqrt(2); the chirality operator is not reliably Fredholm there";
      throw InvalidArgument(os.str());
    }
  }
  const std::vector<bool> edge = line_edge_sites(b);
  const std::unique_ptr<bool[]> flags(new bool[edge.size()]);
  for (std::size_t i = 0; i < edge.size(); ++i) flags[i] = edge[i];
  FredholmResult out;
  out.diagnostics = filtered_rank(chirality_block(b), tol, {flags.get(), edge.size()});
  out.index = static_cast<int>(out.diagnostics.kernel_dim) -
              static_cast<int>(out.diagnostics.cokernel_dim);
  return out;
}

int expected_line_index(double a_left, double a_right) {
  // Each end contributes sgn(a) when |a| > 1/sqrt 2.
  auto end = [](double a) { return std::abs(a) > kCriticalA ? (a > 0.0 ? 1 : -1) : 0; };
  return end(a_left) - end(a_right);
}

}  // namespace treewalk
