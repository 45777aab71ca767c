#include "treewalk/treeop.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "treewalk/errors.hpp"

namespace treewalk {

namespace {

struct VertexCoins {
  std::vector<double> a;
  std::vector<Complex> b;
};

VertexCoins vertex_coins(const WalkSpec& w, const TruncatedTree& t, InteriorRule rule) {
  VertexCoins c;
  c.a.resize(t.vertex_count());
  c.b.resize(t.vertex_count());
  for (std::size_t i = 0; i < t.vertex_count(); ++i) {
    const SphereCoeff s = eval_vertex(w, t.vertex_at(i), rule);
    if (!(std::abs(s.a) < 1.0))
      throw SingularCoinError("|a| >= 1 at vertex \"" + t.vertex_at(i).str() + "\"");
    c.a[i] = s.a;
    c.b[i] = s.b;
  }
  return c;
}

ComplexMatrix scaled_identity(std::size_t n, Complex s) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = s;
  return m;
}

void check_on_sphere(double p, Complex q) {
  const double n2 = p * p + std::norm(q);
  if (!(std::abs(n2 - 1.0) <= 1e-12))
    throw InvalidArgument("(p, q) is off S^2: p^2 + |q|^2 = " + std::to_string(n2));
}

}  // namespace

ComplexMatrix build_shift(const TruncatedTree& t) {
  const std::size_t n = t.vertex_count();
  ComplexMatrix s(n, n);
  for (std::size_t i = 1; i < n; ++i) s(i, t.index_of(parent(t.vertex_at(i)))) = 1.0;
  return s;
}

std::pair<ComplexMatrix, ComplexMatrix> build_L_E(const TruncatedTree& t) {
  const ComplexMatrix s = build_shift(t);
  ComplexMatrix l = (1.0 / std::sqrt(2.0)) * s;
  ComplexMatrix e = ComplexMatrix::identity(t.vertex_count());
  e -= 0.5 * matmul(s, adjoint(s));
  return {std::move(l), std::move(e)};
}

ComplexMatrix build_gamma(const ComplexMatrix& L, const ComplexMatrix& E, double p, Complex q,
                          GammaForm form) {
  check_on_sphere(p, q);
  const std::size_t n = L.rows();
  ComplexMatrix lower_right = E;
  if (form == GammaForm::symmetric) {
    // E - p LL* = (1 + p) E - p
    lower_right *= (1.0 + p);
  }
  lower_right -= scaled_identity(n, p);
  return block2x2(scaled_identity(n, p), std::conj(q) * adjoint(L), q * L, lower_right);
}

ComplexMatrix build_coin(const WalkSpec& w, const TruncatedTree& t, InteriorRule rule) {
  const VertexCoins c = vertex_coins(w, t, rule);
  const std::size_t n = t.vertex_count();
  ComplexMatrix m(2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) = c.a[i];
    m(i, n + i) = std::conj(c.b[i]);
    m(n + i, i) = c.b[i];
    m(n + i, n + i) = -c.a[i];
  }
  return m;
}

ComplexMatrix build_epsilon(const WalkSpec& w, const TruncatedTree& t, InteriorRule rule) {
  const VertexCoins c = vertex_coins(w, t, rule);
  const std::size_t n = t.vertex_count();
  const double r = 1.0 / std::sqrt(2.0);
  ComplexMatrix m(2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    const double sp = std::sqrt(1.0 + c.a[i]);
    const double sm = std::sqrt(1.0 - c.a[i]);
    m(i, i) = r * sp;
    m(i, n + i) = -r * sm;
    m(n + i, i) = r * c.b[i] / sp;
    m(n + i, n + i) = r * c.b[i] / sm;
  }
  return m;
}

namespace {

ComplexMatrix q_plus_direct(const WalkSpec& w, const TruncatedTree& t, GammaForm form,
                            InteriorRule rule) {
  const VertexCoins c = vertex_coins(w, t, rule);
  const auto [l, e] = build_L_E(t);
  const std::size_t n = t.vertex_count();
  const double p = w.p();
  const Complex q = w.q();
  const double e_coeff = form == GammaForm::symmetric ? 1.0 + p : 1.0;

  std::vector<Complex> left_b(n), right_b(n);  // conj(b)/sqrt(1-a), b/sqrt(1+a)
  std::vector<double> sp(n), sm(n);
  for (std::size_t i = 0; i < n; ++i) {
    sp[i] = std::sqrt(1.0 + c.a[i]);
    sm[i] = std::sqrt(1.0 - c.a[i]);
    left_b[i] = std::conj(c.b[i]) / sm[i];
    right_b[i] = c.b[i] / sp[i];
  }
  ComplexMatrix qp(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      Complex v{};
      if (l(i, j) != Complex{}) v += q * left_b[i] * l(i, j) * sp[j];
      if (l(j, i) != Complex{}) v -= std::conj(q) * sm[i] * std::conj(l(j, i)) * right_b[j];
      if (e(i, j) != Complex{}) v += e_coeff * left_b[i] * e(i, j) * right_b[j];
      qp(i, j) = v;
    }
    qp(i, i) -= 2.0 * p * std::abs(c.b[i]);
  }
  return qp;
}

}  // namespace

ComplexMatrix build_Q_plus(const WalkSpec& w, const TruncatedTree& t, QPlusRoute route,
                           GammaForm form, InteriorRule rule) {
  if (route == QPlusRoute::direct) return q_plus_direct(w, t, form, rule);
  const auto [l, e] = build_L_E(t);
  const ComplexMatrix gamma = build_gamma(l, e, w.p(), w.q(), form);
  const ComplexMatrix coin = build_coin(w, t, rule);
  const ComplexMatrix u = matmul(gamma, coin);
  const ComplexMatrix q = u - adjoint(u);
  const ComplexMatrix eps = build_epsilon(w, t, rule);
  const ComplexMatrix conj = matmul(adjoint(eps), matmul(q, eps));
  const std::size_t n = t.vertex_count();
  return sub_block(conj, n, 0, n, n);
}

std::vector<bool> interior_mask(const TruncatedTree& t) {
  std::vector<bool> mask(t.vertex_count());
  for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = t.depth_of(i) + 2 <= t.depth();
  return mask;
}

std::vector<bool> doubled(const std::vector<bool>& mask) {
  std::vector<bool> out(mask);
  out.insert(out.end(), mask.begin(), mask.end());
  return out;
}

OperatorBundle build_bundle(const WalkSpec& w, const TruncatedTree& t, GammaForm form,
                            InteriorRule rule) {
  OperatorBundle b{t, form, {}, {}, {}, {}, {}, {}, {}, {}, {}, interior_mask(t)};
  b.S = build_shift(t);
  std::tie(b.L, b.E) = build_L_E(t);
  b.Gamma = build_gamma(b.L, b.E, w.p(), w.q(), form);
  b.C = build_coin(w, t, rule);
  b.Eps = build_epsilon(w, t, rule);
  b.U = matmul(b.Gamma, b.C);
  b.Q = b.U - adjoint(b.U);
  const std::size_t n = t.vertex_count();
  b.Qplus = sub_block(matmul(adjoint(b.Eps), matmul(b.Q, b.Eps)), n, 0, n, n);
  return b;
}

namespace {

// std::vector<bool> has no contiguous storage; masked_max_abs takes a span.
double masked(const ComplexMatrix& m, const std::vector<bool>& mask) {
  const std::unique_ptr<bool[]> flags(new bool[mask.size()]);
  for (std::size_t i = 0; i < mask.size(); ++i) flags[i] = mask[i];
  return masked_max_abs(m, {flags.get(), mask.size()});
}

}  // namespace

std::vector<IdentityResidual> check_identities(const OperatorBundle& b) {
  const std::size_t n = b.dim();
  const std::vector<bool> mask2 = doubled(b.interior);
  const ComplexMatrix id2 = ComplexMatrix::identity(2 * n);
  std::vector<IdentityResidual> out;

  out.push_back({"gamma_squared_minus_identity", masked(matmul(b.Gamma, b.Gamma) - id2, mask2)});
  out.push_back({"coin_squared_minus_identity", masked(matmul(b.C, b.C) - id2, mask2)});

  const ComplexMatrix eps_adj = adjoint(b.Eps);
  out.push_back({"eps_unitarity", masked(matmul(eps_adj, b.Eps) - id2, mask2)});

  ComplexMatrix diag_pm = id2;
  for (std::size_t i = n; i < 2 * n; ++i) diag_pm(i, i) = -1.0;
  out.push_back({"eps_diagonalizes_coin",
                 masked(matmul(eps_adj, matmul(b.C, b.Eps)) - diag_pm, mask2)});

  out.push_back({"E_times_L", masked(matmul(b.E, b.L), b.interior)});

  out.push_back({"coin_anticommutes_with_Q", masked(matmul(b.C, b.Q) + matmul(b.Q, b.C), mask2)});

  const ComplexMatrix conj = matmul(eps_adj, matmul(b.Q, b.Eps));
  const double upper = masked(sub_block(conj, 0, 0, n, n), b.interior);
  const double lower = masked(sub_block(conj, n, n, n, n), b.interior);
  out.push_back({"eps_Q_eps_diagonal_blocks", std::max(upper, lower)});
  return out;
}

}  // namespace treewalk
