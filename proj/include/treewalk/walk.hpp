#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "treewalk/cantor.hpp"
#include "treewalk/numkernel.hpp"
#include "treewalk/tree.hpp"

namespace treewalk {

/// Default exclusion zone around |a| = 1.
inline constexpr double kDefaultPoleMargin = 1e-6;
/// How far off the sphere an input (a, b) may be before it is rejected
/// rather than renormalized.
inline constexpr double kSphereInputTolerance = 1e-6;

/// A point (a, b) of S^2 = {a^2 + |b|^2 = 1}.
struct SphereCoeff {
  double a = 0.0;
  Complex b{1.0, 0.0};

  /// Validates and renormalizes. Throws ValidationError when (a, b) is more
  /// than kSphereInputTolerance off the sphere, SingularCoinError when
  /// |a| > 1 - margin.
  static SphereCoeff make(double a, Complex b, double margin = kDefaultPoleMargin);

  friend bool operator==(const SphereCoeff&, const SphereCoeff&) = default;
};

struct WalkCell {
  Cylinder cylinder;
  SphereCoeff coeff;

  friend bool operator==(const WalkCell&, const WalkCell&) = default;
};

/// Chirality parameters (p, q) on S^2 plus coin data that is constant on
/// each cell of a finite cylinder partition of the boundary.
class WalkSpec {
 public:
  /// Validates (p, q) and the prefix code; sorts cells lexicographically.
  WalkSpec(double p, Complex q, std::vector<WalkCell> cells);

  double p() const noexcept { return p_; }
  Complex q() const noexcept { return q_; }
  const std::vector<WalkCell>& cells() const noexcept { return cells_; }
  std::size_t max_level() const noexcept { return max_level_; }

  // Index of the cell containing c; throws AmbiguousCylinder if c is coarser
  // than the partition there.
  std::size_t cell_index(const Cylinder& c) const;

  friend bool operator==(const WalkSpec&, const WalkSpec&) = default;

 private:
  double p_;
  Complex q_;
  std::vector<WalkCell> cells_;
  std::size_t max_level_ = 0;
};

SphereCoeff eval_boundary(const WalkSpec& w, const Cylinder& c);

/// How a vertex above the cell partition picks its boundary point.
enum class InteriorRule { leftmost, rightmost };

/// Coin value at a vertex. Vertices at or below their cell's level take the
/// cell value; shallower vertices take the value at their leftmost (or
/// rightmost) boundary descendant.
SphereCoeff eval_vertex(const WalkSpec& w, const VertexAddr& v,
                        InteriorRule rule = InteriorRule::leftmost);

WalkSpec parse_walk(std::string_view json_text);
WalkSpec load_walk(const std::string& path);
std::string serialize_walk(const WalkSpec& w);

/// Walk on Z: eventually constant, with finitely many explicit sites.
struct LineWalkSpec {
  struct Site {
    std::int64_t n;
    SphereCoeff coeff;
    friend bool operator==(const Site&, const Site&) = default;
  };

  SphereCoeff left_tail;
  SphereCoeff right_tail;
  std::vector<Site> middle;  // sorted by n, distinct

  /// Sorts the middle sites and rejects duplicates.
  static LineWalkSpec make(SphereCoeff left, SphereCoeff right, std::vector<Site> middle);

  // Value at site n; sites not listed in middle take the left tail for n < 0
  // and the right tail for n >= 0.
  SphereCoeff at(std::int64_t n) const;
  // Largest |n| among explicit middle sites, 0 if none.
  std::int64_t support_radius() const;

  friend bool operator==(const LineWalkSpec&, const LineWalkSpec&) = default;
};

LineWalkSpec parse_line_walk(std::string_view json_text);
LineWalkSpec load_line_walk(const std::string& path);
std::string serialize_line_walk(const LineWalkSpec& w);

/// Tails a(-inf) -> a(+inf) with b = sqrt(1 - a^2), linearly interpolated over
/// |n| <= ramp (the explicit middle sites).
LineWalkSpec linear_ramp_walk(double a_left, double a_right, std::int64_t ramp = 5);

}  // namespace treewalk
