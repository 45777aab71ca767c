#pragma once

#include <string>
#include <utility>
#include <vector>

#include "treewalk/numkernel.hpp"
#include "treewalk/tree.hpp"
#include "treewalk/walk.hpp"

namespace treewalk {

// All operators act on l2(T_d) (dimension n = 2^{d+1} - 1, breadth-first
// vertex order) or on l2(T_d) (x) C^2, laid out as two stacked copies of
// l2(T_d): [first component; second component].

/// Lower-right block of the chirality symmetry.
///   symmetric:  E - p LL*   (Gamma^2 = 1 for every (p, q) on S^2)
///   as_printed: E - p       (Gamma^2 = 1 + (p^2 - 2p) E in the lower block;
///                            a symmetry only at p = 0)
/// Both agree at p = 0 and differ by p E, an element of the commutator ideal,
/// so they share the secondary symbol.
enum class GammaForm { symmetric, as_printed };

enum class QPlusRoute { direct, conjugation };

/// (Sf)(v) = f(par v); S e_u is the sum of the children of u present in T_d.
ComplexMatrix build_shift(const TruncatedTree& t);

/// L = S / sqrt 2 and E = 1 - LL*. E is assembled as 1 - SS*/2, which is
/// exact in floating point and keeps EL = 0 exact.
std::pair<ComplexMatrix, ComplexMatrix> build_L_E(const TruncatedTree& t);

/// Gamma = [[p, conj(q) L*], [q L, X]] with X chosen by `form`.
ComplexMatrix build_gamma(const ComplexMatrix& L, const ComplexMatrix& E, double p, Complex q,
                          GammaForm form = GammaForm::symmetric);

/// C = [[a, conj(b)], [b, -a]] with a, b acting diagonally via eval_vertex.
ComplexMatrix build_coin(const WalkSpec& w, const TruncatedTree& t,
                         InteriorRule rule = InteriorRule::leftmost);

/// eps = (1/sqrt 2) [[sqrt(1+a), -sqrt(1-a)], [b/sqrt(1+a), b/sqrt(1-a)]].
ComplexMatrix build_epsilon(const WalkSpec& w, const TruncatedTree& t,
                            InteriorRule rule = InteriorRule::leftmost);

/// Chirality operator on l2(T_d).
///   direct:      q B L A+ - conj(q) A- L* B' + c B E B' - 2p|b|, where
///                B = conj(b)/sqrt(1-a), A+ = sqrt(1+a), A- = sqrt(1-a),
///                B' = b/sqrt(1+a), c = 1 (as_printed) or 1 + p (symmetric).
///   conjugation: lower-left block of eps* (U - U*) eps with U = Gamma C.
ComplexMatrix build_Q_plus(const WalkSpec& w, const TruncatedTree& t, QPlusRoute route,
                           GammaForm form = GammaForm::symmetric,
                           InteriorRule rule = InteriorRule::leftmost);

/// Vertices of depth <= d - 2. Compression artifacts live on the two
/// outermost layers only.
std::vector<bool> interior_mask(const TruncatedTree& t);

/// The same mask repeated for both C^2 components.
std::vector<bool> doubled(const std::vector<bool>& mask);

struct OperatorBundle {
  TruncatedTree tree;
  GammaForm form;
  ComplexMatrix S, L, E;                  // on l2(T_d)
  ComplexMatrix Gamma, C, Eps, U, Q;      // on l2(T_d) (x) C^2
  ComplexMatrix Qplus;                    // on l2(T_d), conjugation route
  std::vector<bool> interior;             // depth <= d - 2

  std::size_t dim() const noexcept { return tree.vertex_count(); }
};

OperatorBundle build_bundle(const WalkSpec& w, const TruncatedTree& t,
                            GammaForm form = GammaForm::symmetric,
                            InteriorRule rule = InteriorRule::leftmost);

struct IdentityResidual {
  std::string name;
  double residual;  // max-norm on the interior compression
};

/// Gamma^2 - 1, C^2 - 1, eps*eps - 1, eps*C eps - diag(1,-1), E L,
/// CQ + QC, and the diagonal blocks of eps*Q eps.
std::vector<IdentityResidual> check_identities(const OperatorBundle& b);

}  // namespace treewalk
