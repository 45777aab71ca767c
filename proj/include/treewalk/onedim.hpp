#pragma once

#include <cstddef>

#include "treewalk/numkernel.hpp"
#include "treewalk/symbolic.hpp"
#include "treewalk/walk.hpp"

namespace treewalk {

/// Split-step walk on the lattice sites -N..N. Operators on l2(sites) (x) C^2
/// use the layout [first component; second component], site -N first.
struct LineBundle {
  std::size_t halfwidth;
  double a_left;   // a(-inf)
  double a_right;  // a(+inf)
  ComplexMatrix L;                       // L e_j = e_{j+1}
  ComplexMatrix Gamma, C, U, Q;          // Gamma = (1/sqrt 2)[[1, L*], [L, -1]]
  ComplexMatrix Pplus, Pminus;           // (1 +- C) / 2
  ComplexMatrix basis_plus, basis_minus; // orthonormal columns spanning Ran P+, Ran P-

  std::size_t sites() const noexcept { return 2 * halfwidth + 1; }
  std::ptrdiff_t site(std::size_t index) const noexcept {
    return static_cast<std::ptrdiff_t>(index) - static_cast<std::ptrdiff_t>(halfwidth);
  }
};

/// Requires the explicit middle sites to lie within [-N/2, N/2].
LineBundle build_line(const LineWalkSpec& spec, std::size_t halfwidth);

/// Q+ = P- Q P+ written as a (2N+1) x (2N+1) matrix between the bases of
/// Ran P+ and Ran P-.
ComplexMatrix chirality_block(const LineBundle& b);

/// Sites with |n| > 0.9 N: the truncation boundary.
std::vector<bool> line_edge_sites(const LineBundle& b);

struct FredholmResult {
  int index;
  FilteredRank diagnostics;
};

/// dim ker - dim coker of Q+ after discarding singular vectors with at least
/// half their mass on the outer 10% of sites. Requires |a(+-inf)| to stay
/// at least 0.05 away from 1/sqrt 2. Throws InconclusiveTruncation when a
/// singular value falls in [tol, 100 tol].
FredholmResult fredholm_index(const LineBundle& b, double tol);

/// Closed-form index k(a(-inf)) - k(a(+inf)) with k(a) = sgn(a) when
/// |a| > 1/sqrt 2 and 0 otherwise. For nonnegative tails this is +1 if
/// |a(+inf)| < 1/sqrt 2 < |a(-inf)|, -1 for the mirror case, 0 otherwise.
int expected_line_index(double a_left, double a_right);

}  // namespace treewalk
