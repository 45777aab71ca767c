#include <doctest.h>

#include <random>

#include "treewalk/errors.hpp"
#include "treewalk/onedim.hpp"

using namespace treewalk;

namespace {

LineWalkSpec reflect(const LineWalkSpec& s) {
  // n -> -n; site 0 stays, so the reflected right tail starts at n = 0 too.
  std::vector<LineWalkSpec::Site> middle;
  for (const auto& site : s.middle) middle.push_back({-site.n, site.coeff});
  bool has_zero = false;
  for (const auto& site : middle) has_zero = has_zero || site.n == 0;
  if (!has_zero) middle.push_back({0, s.at(0)});
  return LineWalkSpec::make(s.right_tail, s.left_tail, std::move(middle));
}

double interior_residual(const ComplexMatrix& m, std::size_t sites, std::size_t margin) {
  double r = 0.0;
  auto inner = [&](std::size_t i) {
    const std::size_t s = i % sites;
    return s >= margin && s + margin < sites;
  };
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (inner(i) && inner(j)) r = std::max(r, std::abs(m(i, j)));
  return r;
}

}  // namespace

TEST_SUITE("onedim") {

TEST_CASE("line bundle identities") {
  const LineBundle b = build_line(linear_ramp_walk(0.9, 0.3), 40);
  const std::size_t m = b.sites();
  CHECK(m == 81);
  const ComplexMatrix id2 = ComplexMatrix::identity(2 * m);
  CHECK(interior_residual(matmul(b.Gamma, b.Gamma) - id2, m, 1) < 1e-12);
  CHECK(max_abs(matmul(b.C, b.C) - id2) < 1e-12);
  CHECK(max_abs(b.Q + adjoint(b.Q)) == 0.0);
  CHECK(max_abs(b.Pplus + b.Pminus - id2) == 0.0);
  CHECK(max_abs(matmul(adjoint(b.basis_plus), b.basis_plus) - ComplexMatrix::identity(m)) < 1e-12);
  CHECK(max_abs(matmul(b.Pplus, b.basis_plus) - b.basis_plus) < 1e-12);
  CHECK(max_abs(matmul(b.Pminus, b.basis_minus) - b.basis_minus) < 1e-12);
}

TEST_CASE("support guard") {
  CHECK_THROWS_AS(build_line(linear_ramp_walk(0.9, 0.3, 30), 40), InvalidArgument);
  CHECK_THROWS_AS(build_line(linear_ramp_walk(0.9, 0.3), 5), InvalidArgument);
}

TEST_CASE("index examples") {
  CHECK(fredholm_index(build_line(linear_ramp_walk(0.9, 0.3), 120), 1e-8).index == 1);
  CHECK(fredholm_index(build_line(linear_ramp_walk(0.3, 0.9), 120), 1e-8).index == -1);
  CHECK(fredholm_index(build_line(linear_ramp_walk(0.9, 0.9), 120), 1e-8).index == 0);
  CHECK(fredholm_index(build_line(linear_ramp_walk(0.1, -0.3), 120), 1e-8).index == 0);
}

TEST_CASE("negative tails contribute with the sign of a") {
  CHECK(fredholm_index(build_line(linear_ramp_walk(-0.9, 0.2), 120), 1e-8).index == -1);
  CHECK(fredholm_index(build_line(linear_ramp_walk(0.2, -0.9), 120), 1e-8).index == 1);
  CHECK(fredholm_index(build_line(linear_ramp_walk(-0.9, 0.9), 200), 1e-8).index == -2);
  CHECK(fredholm_index(build_line(linear_ramp_walk(-0.9, -0.9), 120), 1e-8).index == 0);
}

TEST_CASE("index equals the trace of C over the kernel of Q") {
  // Independent route: ker Q splits into C = +1 and C = -1 parts.
  const LineBundle b = build_line(linear_ramp_walk(0.9, 0.3), 60);
  const SvdResult s = svd(b.Q);
  double witten = 0.0;
  for (std::size_t k = 0; k < s.values.size(); ++k) {
    if (s.values[k] >= 1e-8) continue;
    double edge = 0.0;
    for (std::size_t i = 0; i < s.v.rows(); ++i)
      if (std::abs(b.site(i % b.sites())) > 54) edge += std::norm(s.v(i, k));
    if (edge >= 0.5) continue;
    ComplexMatrix v(s.v.rows(), 1);
    for (std::size_t i = 0; i < v.rows(); ++i) v(i, 0) = s.v(i, k);
    witten += matmul(adjoint(v), matmul(b.C, v))(0, 0).real();
  }
  CHECK(witten == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("critical tails are refused") {
  CHECK_THROWS_AS(fredholm_index(build_line(linear_ramp_walk(0.9, 0.72), 60), 1e-8), InvalidArgument);
}

TEST_CASE("closed form") {
  CHECK(expected_line_index(0.9, 0.3) == 1);
  CHECK(expected_line_index(0.3, 0.9) == -1);
  CHECK(expected_line_index(0.95, 0.9) == 0);
  CHECK(expected_line_index(-0.9, 0.95) == -2);
  CHECK(expected_line_index(-0.9, 0.2) == -1);
  CHECK(expected_line_index(0.2, -0.1) == 0);
}

TEST_CASE("reflection negates the index") {
  for (auto [l, r] : {std::pair{0.9, 0.3}, std::pair{0.2, -0.8}, std::pair{0.95, 0.1}}) {
    const LineWalkSpec s = linear_ramp_walk(l, r);
    const int forward = fredholm_index(build_line(s, 100), 1e-8).index;
    const int mirrored = fredholm_index(build_line(reflect(s), 100), 1e-8).index;
    CHECK(forward != 0);
    CHECK(mirrored == -forward);
  }
}

TEST_CASE("index is stable under random middle perturbations") {
  std::mt19937_64 rng(103);
  std::uniform_real_distribution<double> ua(-0.98, 0.98), ph(-3.1, 3.1);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<LineWalkSpec::Site> middle;
    for (std::int64_t n = -8; n <= 8; ++n) {
      const double a = ua(rng);
      middle.push_back({n, SphereCoeff::make(a, std::sqrt(1.0 - a * a) * std::polar(1.0, ph(rng)))});
    }
    const double al = trial % 2 ? 0.9 : 0.3, ar = trial % 2 ? 0.3 : 0.9;
    const LineWalkSpec s = LineWalkSpec::make(SphereCoeff::make(al, std::sqrt(1.0 - al * al)),
                                              SphereCoeff::make(ar, std::sqrt(1.0 - ar * ar)), middle);
    const FredholmResult r = fredholm_index(build_line(s, 100), 1e-8);
    CHECK(r.index == expected_line_index(al, ar));
  }
}

}  // TEST_SUITE
