#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "treewalk/cantor.hpp"
#include "treewalk/walk.hpp"

namespace treewalk {

/// +1 if a > |p|, 0 if |a| < |p|, -1 if a < -|p|. Throws SymbolSingular
/// when |a| == |p|.
int classify_point(double a, double p);

struct CellIndex {
  Cylinder cylinder;
  int winding;
  double measure;
  std::optional<DyadicRational> exact_measure;  // uniform measure only
  std::size_t hits = 0;                          // Monte Carlo samples landing here
};

/// Cell counts of K+ = {a > |p|}, K0 = {|a| < |p|}, K- = {a < -|p|}.
struct ClassificationCounts {
  std::size_t plus = 0;
  std::size_t zero = 0;
  std::size_t minus = 0;
};

struct IndexReport {
  std::string mode;     // "exact" or "mc"
  std::string measure;  // ProductMeasure::str()
  double p = 0.0;
  std::optional<DyadicRational> exact;
  double numeric = 0.0;
  std::vector<CellIndex> per_cell;
  std::optional<double> mc_stderr;
  std::optional<std::size_t> mc_samples;
  std::optional<std::uint64_t> mc_seed;
  ClassificationCounts classification_counts;
};

/// Secondary index tau(chi_+) - tau(chi_-) as the measure-weighted sum of
/// per-cell residue windings. Exact dyadic under the uniform measure.
/// Throws SymbolSingular naming the first degenerate cell.
IndexReport s_index_exact(const WalkSpec& w, const ProductMeasure& m);

/// Monte Carlo estimate: boundary points are drawn bit by bit from the
/// product measure until they land in a cell, and the quadrature winding
/// of that cell's loop is averaged. Samples are grouped in fixed blocks,
/// each with its own RNG stream seeded from (seed, block), so the result
/// does not depend on `workers`.
IndexReport s_index_montecarlo(const WalkSpec& w, const ProductMeasure& m, std::size_t samples,
                               std::uint64_t seed, std::size_t workers = 1,
                               std::size_t quadrature_samples = 4096);

/// Falk pairing of the generator z f + (1 - f), f the indicator of `c`,
/// integrated against the measure.
double falk_measure_pairing(const Cylinder& c, const ProductMeasure& m, std::size_t truncation);

/// JSON document; dyadic values appear as {"num": m, "exp": n}.
std::string report_to_json(const IndexReport& r);

}  // namespace treewalk
