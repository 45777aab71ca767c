#include "treewalk/symbolic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <sstream>

#include "treewalk/errors.hpp"

namespace treewalk {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Complex unit(double angle) { return std::polar(1.0, angle); }

bool degenerate(const SymbolLoop& s) {
  return std::abs(std::abs(s.p) - std::abs(s.a)) <= kDegeneracyTolerance;
}

std::string describe(const SymbolLoop& s) {
  std::ostringstream os;
  os.precision(17);
  os << "a = " << s.a << ", p = " << s.p;
  return os.str();
}

// Integrand of g^{-1} dg in w:
//   (q(1+a) w^2 + conj(q)(1-a)) / (w (q(1+a) w^2 - 2p|b| w - conj(q)(1-a))).
Complex log_derivative(const SymbolLoop& s, Complex w) {
  const Complex qa = s.q * (1.0 + s.a);
  const Complex qb = std::conj(s.q) * (1.0 - s.a);
  const double c = 2.0 * s.p * std::abs(s.b);
  return (qa * w * w + qb) / (w * (qa * w * w - c * w - qb));
}

}  // namespace

Complex eval_loop(const SymbolLoop& s, double angle) {
  const Complex w = unit(angle);
  return s.q * (1.0 + s.a) * w - std::conj(s.q) * (1.0 - s.a) * std::conj(w) -
         2.0 * s.p * std::abs(s.b);
}

Complex eval_loop_z(const SymbolLoop& s, double angle) { return eval_loop(s, angle - s.theta()); }

Complex solve_w0(const SymbolLoop& s) {
  const double q2 = std::norm(s.q);
  if (s.a == 0.0 || q2 == 0.0)
    throw NoUniqueSolution("g(w) = 0 has no unique solution (" + describe(s) + ")");
  return std::conj(s.q) * s.p * std::abs(s.b) / (s.a * q2);
}

InvertibilityCheck is_invertible(const SymbolLoop& s) {
  if (!degenerate(s)) return {true, std::nullopt};
  if (s.a != 0.0 && std::norm(s.q) != 0.0) {
    const Complex w0 = solve_w0(s);
    return {false, w0 / std::abs(w0)};
  }
  // a = p = 0: g = q w - conj(q w) vanishes where q w is real.
  return {false, std::conj(s.q) / std::abs(s.q)};
}

double phase_winding(std::span<const Complex> samples) {
  double total = 0.0;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const Complex next = samples[(k + 1) % samples.size()];
    total += std::arg(next / samples[k]);
  }
  return total / kTwoPi;
}

double min_modulus(const SymbolLoop& s, std::size_t n_samples) {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n_samples; ++k)
    m = std::min(m, std::abs(eval_loop(s, kTwoPi * static_cast<double>(k) / static_cast<double>(n_samples))));
  return m;
}

QuadratureWinding winding_quadrature(const SymbolLoop& s, std::size_t n_samples) {
  if (n_samples < 64) throw InvalidArgument("winding_quadrature needs at least 64 samples");
  if (degenerate(s)) throw SymbolSingular("symbol loop vanishes on the circle (" + describe(s) + ")");
  std::vector<Complex> g(n_samples);
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n_samples; ++k) {
    g[k] = eval_loop(s, kTwoPi * static_cast<double>(k) / static_cast<double>(n_samples));
    m = std::min(m, std::abs(g[k]));
  }
  return {phase_winding(g), m};
}

PoleData pole_data(const SymbolLoop& s) {
  if (std::norm(s.q) == 0.0) throw InvalidArgument("pole_data requires q != 0");
  const double mod_b = std::abs(s.b);
  const Complex denom = s.q * (1.0 + s.a);
  PoleData d;
  d.alpha = mod_b * (s.p + 1.0) / denom;
  d.beta = mod_b * (s.p - 1.0) / denom;
  if (s.a != 0.0) d.w0 = solve_w0(s);
  return d;
}

int winding_residues(const SymbolLoop& s) {
  if (degenerate(s)) throw SymbolSingular("pole on the unit circle (" + describe(s) + ")");
  if (std::norm(s.q) == 0.0) return 0;
  const PoleData d = pole_data(s);
  int total = d.residues[0];
  if (std::abs(d.alpha) < 1.0) total += d.residues[1];
  if (std::abs(d.beta) < 1.0) total += d.residues[2];
  return total;
}

Complex residue_numeric(const SymbolLoop& s, Complex center, double radius, std::size_t n_nodes) {
  if (!(radius > 0.0)) throw InvalidArgument("residue_numeric: radius must be positive");
  std::vector<Complex> poles{Complex{}};
  if (std::norm(s.q) != 0.0) {
    const PoleData d = pole_data(s);
    poles.push_back(d.alpha);
    poles.push_back(d.beta);
  }
  for (const Complex& pole : poles) {
    const double dist = std::abs(pole - center);
    if (dist > 1e-12 * std::max(1.0, std::abs(center)) && dist <= 2.0 * radius)
      throw InvalidArgument("residue_numeric: another pole lies within twice the radius");
  }
  // (1/2 pi i) \oint f dw with w = c + r e^{i phi}, dw = i (w - c) dphi.
  Complex sum{};
  for (std::size_t k = 0; k < n_nodes; ++k) {
    const Complex offset = radius * unit(kTwoPi * static_cast<double>(k) / static_cast<double>(n_nodes));
    sum += log_derivative(s, center + offset) * offset;
  }
  return sum / static_cast<double>(n_nodes);
}

HalfLineOperator build_half_line(const SymbolLoop& s, std::size_t N, GammaForm form) {
  if (N < 2) throw InvalidArgument("half-line truncation needs N >= 2");
  if (!(std::abs(s.a) < 1.0)) throw SingularCoinError("half-line operator needs |a| < 1");
  const double mod_b = std::abs(s.b);
  const Complex A = s.q * std::sqrt((1.0 + s.a) / (1.0 - s.a)) * std::conj(s.b);
  const Complex B = std::conj(s.q) * std::sqrt((1.0 - s.a) / (1.0 + s.a)) * s.b;
  const double e_coeff = form == GammaForm::symmetric ? 1.0 + s.p : 1.0;
  HalfLineOperator op{N, ComplexMatrix(N, N)};
  auto& m = op.matrix;
  for (std::size_t n = 0; n < N; ++n) {
    if (n + 1 < N) {
      m(n + 1, n) += A;   // V e_n = e_{n+1}
      m(n, n + 1) -= B;   // V* e_{n+1} = e_n
    }
    m(n, n) -= 2.0 * s.p * mod_b;
  }
  m(0, 0) += e_coeff * mod_b;
  return op;
}

FilteredRank filtered_rank(const ComplexMatrix& m, double tol, std::span<const bool> edge,
                           double mass_threshold) {
  if (!(tol > 0.0)) throw InvalidArgument("filtered_rank: tol must be > 0");
  if (!m.square() || edge.size() != m.rows())
    throw InvalidArgument("filtered_rank: needs a square matrix and a matching edge mask");
  const SvdResult sv = svd(m);
  FilteredRank out;
  out.singular_values = sv.values;
  out.smallest_kept = std::numeric_limits<double>::infinity();
  for (double v : sv.values) {
    if (v >= tol && v <= 100.0 * tol) {
      std::ostringstream os;
      os << "singular value " << v << " lies in [tol, 100 tol]; increase the truncation";
      throw InconclusiveTruncation(os.str());
    }
    if (v > tol) out.smallest_kept = std::min(out.smallest_kept, v);
  }
  auto edge_mass = [&](const ComplexMatrix& vecs, std::size_t col) {
    double on_edge = 0.0, total = 0.0;
    for (std::size_t i = 0; i < vecs.rows(); ++i) {
      const double w = std::norm(vecs(i, col));
      total += w;
      if (edge[i]) on_edge += w;
    }
    return on_edge / total;
  };
  for (std::size_t k = 0; k < sv.values.size(); ++k) {
    if (sv.values[k] > tol) continue;
    const bool right_bulk = edge_mass(sv.v, k) < mass_threshold;
    const bool left_bulk = edge_mass(sv.u, k) < mass_threshold;
    out.kernel_dim += right_bulk ? 1 : 0;
    out.cokernel_dim += left_bulk ? 1 : 0;
    out.discarded += (right_bulk ? 0 : 1) + (left_bulk ? 0 : 1);
  }
  return out;
}

FilteredRank half_line_rank(const HalfLineOperator& op, double tol) {
  const std::unique_ptr<bool[]> edge(new bool[op.N]);
  for (std::size_t n = 0; n < op.N; ++n) edge[n] = 10 * n >= 9 * op.N;
  return filtered_rank(op.matrix, tol, {edge.get(), op.N});
}

KernelRecursion kernel_recursion(const SymbolLoop& s, std::size_t N) {
  if (s.p != 0.0) throw InvalidArgument("kernel_recursion requires p == 0");
  if (s.a == 0.0) throw SymbolSingular("kernel_recursion: a == 0, the symbol is not invertible");
  if (N < 2) throw InvalidArgument("kernel_recursion needs N >= 2");
  const double a = s.a;
  const Complex phase = std::abs(s.b) / s.b;  // |b| / b
  const Complex conj_over = std::conj(s.b) / s.b;
  KernelRecursion r;
  r.coeffs.assign(N, Complex{});
  r.coeffs[0] = 1.0;
  Complex step;
  if (a > 0.0) {
    // sigma* xi = 0:  C_1 = -sqrt((1-a)/(1+a)) (|b|/b) C_0,
    //                 C_{n+1} = ((1-a)/(1+a)) (conj(b)/b) C_{n-1}.
    r.side = KernelRecursion::Side::adjoint;
    r.coeffs[1] = -std::sqrt((1.0 - a) / (1.0 + a)) * phase;
    r.decay_ratio = (1.0 - a) / (1.0 + a);
    step = r.decay_ratio * conj_over;
  } else {
    // sigma xi = 0:   C_1 = sqrt((1+a)/(1-a)) (|b|/b) C_0,
    //                 C_{n+1} = ((1+a)/(1-a)) (conj(b)/b) C_{n-1}.
    r.side = KernelRecursion::Side::direct;
    r.coeffs[1] = std::sqrt((1.0 + a) / (1.0 - a)) * phase;
    r.decay_ratio = (1.0 + a) / (1.0 - a);
    step = r.decay_ratio * conj_over;
  }
  for (std::size_t n = 1; n + 1 < N; ++n) r.coeffs[n + 1] = step * r.coeffs[n - 1];
  return r;
}

double falk_trace_raw(int f, std::size_t truncation) {
  if (f != 0 && f != 1) throw InvalidArgument("falk pairing: f must be 0 or 1");
  if (truncation < 16) throw InvalidArgument("falk pairing: truncation must be >= 16");
  const std::size_t size = truncation + 2;
  ComplexMatrix v(size, size);
  for (std::size_t n = 0; n + 1 < size; ++n) v(n + 1, n) = 1.0;
  const double fv = f;
  const ComplexMatrix id = ComplexMatrix::identity(size);
  const ComplexMatrix lift_m = fv * v + (1.0 - fv) * id;
  const ComplexMatrix lift_n = fv * adjoint(v) + (1.0 - fv) * id;
  const ComplexMatrix one_minus_nm = id - matmul(lift_n, lift_m);
  const ComplexMatrix one_minus_mn = id - matmul(lift_m, lift_n);
  const ComplexMatrix lower = matmul(one_minus_nm, one_minus_nm);
  const ComplexMatrix upper = matmul(one_minus_mn, one_minus_mn);
  double t = 0.0;
  for (std::size_t n = 0; n < truncation; ++n) t += lower(n, n).real() - upper(n, n).real();
  return t;
}

int falk_orientation(std::size_t truncation) {
  return falk_trace_raw(1, truncation) < 0.0 ? -1 : 1;
}

double falk_pairing(int f, std::size_t truncation) {
  return falk_orientation(truncation) * falk_trace_raw(f, truncation) + 0.0;  // no -0
}

}  // namespace treewalk
