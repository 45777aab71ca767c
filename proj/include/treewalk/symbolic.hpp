#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "treewalk/numkernel.hpp"
#include "treewalk/treeop.hpp"
#include "treewalk/walk.hpp"

namespace treewalk {

/// |p| and |a| closer than this count as equal: the loop is then treated as
/// singular.
inline constexpr double kDegeneracyTolerance = 1e-12;

/// Secondary symbol of Q+ at one boundary point x:
///   g(w) = q(1+a) w - conj(q)(1-a) conj(w) - 2p|b|,  w = e^{-i theta} z,
/// where b = |b| e^{i theta}.
struct SymbolLoop {
  double a;
  Complex b;
  double p;
  Complex q;

  static SymbolLoop from(const SphereCoeff& c, double p, Complex q) { return {c.a, c.b, p, q}; }
  double theta() const { return std::arg(b); }
};

/// g at w = e^{i angle}.
Complex eval_loop(const SymbolLoop& s, double angle);
/// The same loop in the original circle variable z = e^{i angle}.
Complex eval_loop_z(const SymbolLoop& s, double angle);

/// Unique root of the real-linear equation g(w) = 0:
///   w0 = conj(q) p |b| / (a |q|^2).
/// Throws NoUniqueSolution when a == 0 or q == 0.
Complex solve_w0(const SymbolLoop& s);

struct InvertibilityCheck {
  bool invertible;
  std::optional<Complex> witness;  // circle point with g = 0 when not invertible
};

/// Invertible iff |p| != |a| (to kDegeneracyTolerance).
InvertibilityCheck is_invertible(const SymbolLoop& s);

/// Winding number of a sampled closed loop: sum of principal-branch phase
/// increments between consecutive samples, divided by 2 pi. The sample list
/// is treated as cyclic.
double phase_winding(std::span<const Complex> samples);

struct QuadratureWinding {
  double winding;      // within rounding of an integer for adequate sampling
  double min_modulus;  // min |g| over the samples
};

/// Argument-principle count of g over n_samples uniform circle points.
/// Throws SymbolSingular for a non-invertible loop, InvalidArgument for
/// n_samples < 64.
QuadratureWinding winding_quadrature(const SymbolLoop& s, std::size_t n_samples);

/// min |g| over n uniform samples of the circle.
double min_modulus(const SymbolLoop& s, std::size_t n_samples);

/// Poles of g^{-1} dg in the w-plane: 0, alpha, beta, with residues
/// -1, +1, +1.
struct PoleData {
  Complex alpha;
  Complex beta;
  std::optional<Complex> w0;
  std::array<int, 3> residues{-1, 1, 1};
};

/// Requires q != 0.
PoleData pole_data(const SymbolLoop& s);

/// -1 + [|alpha| < 1] + [|beta| < 1]. For q == 0 the loop is the nonzero
/// constant -2p|b| and the count is 0. Throws SymbolSingular when |a| == |p|.
int winding_residues(const SymbolLoop& s);

/// (1 / 2 pi i) times the contour integral of g^{-1} dg over the circle of
/// the given radius around `center`, by the periodic trapezoid rule.
/// Throws InvalidArgument if another pole lies within 2 * radius.
Complex residue_numeric(const SymbolLoop& s, Complex center, double radius,
                        std::size_t n_nodes = 4096);

/// Truncation of sigma(Q+) to span{e_0..e_{N-1}} with V the unilateral shift:
///   A V - B V* + c|b|(1 - VV*) - 2p|b|,
///   A = q sqrt((1+a)/(1-a)) conj(b),  B = conj(q) sqrt((1-a)/(1+a)) b,
/// with c = 1 + p (symmetric form) or 1 (as printed).
struct HalfLineOperator {
  std::size_t N;
  ComplexMatrix matrix;
};

HalfLineOperator build_half_line(const SymbolLoop& s, std::size_t N,
                                 GammaForm form = GammaForm::symmetric);

struct FilteredRank {
  std::size_t kernel_dim = 0;
  std::size_t cokernel_dim = 0;
  std::size_t discarded = 0;     // small singular directions rejected as edge artifacts
  double smallest_kept = 0.0;    // smallest singular value above tol (spectral gap)
  std::vector<double> singular_values;
};

/// Kernel/cokernel of a square truncation after dropping singular vectors
/// that carry >= mass_threshold of their weight on the flagged edge
/// coordinates. Throws InconclusiveTruncation if any singular value lies in
/// [tol, 100 tol].
FilteredRank filtered_rank(const ComplexMatrix& m, double tol, std::span<const bool> edge,
                           double mass_threshold = 0.5);

/// filtered_rank with the last 10% of the half-line flagged as edge.
FilteredRank half_line_rank(const HalfLineOperator& op, double tol);

/// Explicit kernel vector of sigma(Q+)* (a > 0) or of sigma(Q+) (a < 0), p = 0.
struct KernelRecursion {
  enum class Side { adjoint, direct };
  Side side;
  std::vector<Complex> coeffs;  // C_0 = 1
  double decay_ratio;           // |C_{n+1} / C_{n-1}|
};

/// Requires p == 0 and a != 0.
KernelRecursion kernel_recursion(const SymbolLoop& s, std::size_t N);

/// Raw Falk trace Tr (1-NM)^2 - Tr (1-MN)^2 for M = V f + (1-f),
/// N = V* f + (1-f) on the half-line truncated to N sites. Products are
/// formed with two sites of padding so the far cut does not leak into the
/// trace.
double falk_trace_raw(int f, std::size_t truncation);

/// +1 or -1: the sign that makes the generator u = z pair to +1, matching
/// the winding number of z.
int falk_orientation(std::size_t truncation);

/// Oriented pairing falk_orientation * falk_trace_raw. Requires f in {0, 1}
/// and truncation >= 16.
double falk_pairing(int f, std::size_t truncation);

}  // namespace treewalk
