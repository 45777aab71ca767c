#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "treewalk/cantor.hpp"
#include "treewalk/walk.hpp"

namespace testing_support {

using treewalk::BitString;
using treewalk::Complex;
using treewalk::Cylinder;
using treewalk::SphereCoeff;
using treewalk::WalkCell;
using treewalk::WalkSpec;

inline SphereCoeff real_coeff(double a) { return SphereCoeff::make(a, {std::sqrt(1.0 - a * a), 0.0}); }

inline Complex unit_phase(double phi) { return std::polar(1.0, phi); }

// Random complete prefix code with leaves at level <= max_level.
inline void random_prefix_code(std::mt19937_64& rng, const BitString& at, std::size_t max_level,
                               std::vector<Cylinder>& out) {
  std::bernoulli_distribution split(at.empty() ? 0.85 : 0.55);
  if (at.size() < max_level && split(rng)) {
    random_prefix_code(rng, at.append(0), max_level, out);
    random_prefix_code(rng, at.append(1), max_level, out);
  } else {
    out.push_back({at});
  }
}

// Coin with |a| <= 0.95 and a random phase on b, kept at least `gap` away
// from |a| == |p|.
inline SphereCoeff random_coeff(std::mt19937_64& rng, double p, double gap) {
  std::uniform_real_distribution<double> ua(-0.95, 0.95);
  std::uniform_real_distribution<double> uphi(-std::numbers::pi, std::numbers::pi);
  double a = ua(rng);
  while (std::abs(std::abs(a) - std::abs(p)) < gap) a = ua(rng);
  return SphereCoeff::make(a, std::sqrt(1.0 - a * a) * unit_phase(uphi(rng)));
}

inline WalkSpec random_walk(std::mt19937_64& rng, double p, std::size_t max_level, double gap = 0.0,
                            bool random_q_phase = true) {
  std::uniform_real_distribution<double> uphi(-std::numbers::pi, std::numbers::pi);
  const double phase = random_q_phase ? uphi(rng) : 0.0;
  const Complex q = std::sqrt(1.0 - p * p) * unit_phase(phase);
  std::vector<Cylinder> cyl;
  random_prefix_code(rng, BitString{}, max_level, cyl);
  std::vector<WalkCell> cells;
  for (const auto& c : cyl) cells.push_back({c, random_coeff(rng, p, gap)});
  return WalkSpec(p, q, std::move(cells));
}

inline WalkSpec random_walk(std::mt19937_64& rng, std::size_t max_level) {
  std::uniform_real_distribution<double> up(-1.0, 1.0);
  return random_walk(rng, up(rng), max_level);
}

// Level-2 example: a = (0.9, 0.9, 0.2, -0.9), p = 0.5.
inline WalkSpec level2_walk() {
  return WalkSpec(0.5, {std::sqrt(0.75), 0.0},
                  {{Cylinder::parse("00"), real_coeff(0.9)},
                   {Cylinder::parse("01"), real_coeff(0.9)},
                   {Cylinder::parse("10"), real_coeff(0.2)},
                   {Cylinder::parse("11"), real_coeff(-0.9)}});
}

// Two cells ("0": a = 0.8), ("1": a = -0.8), p = 0.
inline WalkSpec antisymmetric_walk() {
  return WalkSpec(0.0, {1.0, 0.0},
                  {{Cylinder::parse("0"), real_coeff(0.8)}, {Cylinder::parse("1"), real_coeff(-0.8)}});
}

}  // namespace testing_support
