#include "treewalk/index.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "treewalk/errors.hpp"
#include "treewalk/symbolic.hpp"

namespace treewalk {

namespace {

constexpr std::size_t kBlockSize = 256;
constexpr double kIntegerTolerance = 1e-6;

std::string describe_cell(const Cylinder& c) { return "\"" + c.prefix.str() + "\""; }

SymbolLoop cell_loop(const WalkSpec& w, std::size_t k) {
  return SymbolLoop::from(w.cells()[k].coeff, w.p(), w.q());
}

void require_invertible(const WalkSpec& w) {
  for (std::size_t k = 0; k < w.cells().size(); ++k) {
    const SymbolLoop s = cell_loop(w, k);
    if (!is_invertible(s).invertible) {
      const auto& cyl = w.cells()[k].cylinder;
      std::ostringstream os;
      os.precision(17);
      os << "symbol is not invertible on cell " << describe_cell(cyl) << ": |a| = "
         << std::abs(s.a) << " equals |p| = " << std::abs(s.p);
      throw SymbolSingular(os.str(), cyl.prefix.str());
    }
  }
}

void count_class(ClassificationCounts& counts, int cls) {
  if (cls > 0) ++counts.plus;
  else if (cls < 0) ++counts.minus;
  else ++counts.zero;
}

std::uint64_t next_bits(std::mt19937_64& rng) { return rng(); }

// Uniform double in [0, 1) from the top 53 bits.
double next_unit(std::mt19937_64& rng) {
  return static_cast<double>(next_bits(rng) >> 11) * 0x1.0p-53;
}

// Cell index of a boundary point drawn bit by bit from the measure.
std::size_t sample_cell(const WalkSpec& w, const ProductMeasure& m, std::mt19937_64& rng) {
  BitString x;
  while (true) {
    for (std::size_t k = 0; k < w.cells().size(); ++k)
      if (w.cells()[k].cylinder.prefix.is_prefix_of(x)) return k;
    const int bit = next_unit(rng) < m.theta(x.size()) ? 0 : 1;
    x = x.append(bit);
  }
}

std::mt19937_64 block_stream(std::uint64_t seed, std::size_t block) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

int classify_point(double a, double p) {
  if (std::abs(std::abs(a) - std::abs(p)) <= kDegeneracyTolerance)
    throw SymbolSingular("boundary-degenerate point: |a| == |p|");
  if (a > std::abs(p)) return 1;
  if (a < -std::abs(p)) return -1;
  return 0;
}

IndexReport s_index_exact(const WalkSpec& w, const ProductMeasure& m) {
  require_invertible(w);
  IndexReport r;
  r.mode = "exact";
  r.measure = m.str();
  r.p = w.p();
  const bool exact = m.kind() == ProductMeasure::Kind::uniform;
  if (exact) r.exact = DyadicRational{};
  for (std::size_t k = 0; k < w.cells().size(); ++k) {
    const Cylinder& cyl = w.cells()[k].cylinder;
    const int winding = winding_residues(cell_loop(w, k));
    CellIndex cell{cyl, winding, measure(m, cyl), exact_measure(m, cyl)};
    r.numeric += winding * cell.measure;
    if (exact) *r.exact += winding * *cell.exact_measure;
    count_class(r.classification_counts, winding);
    r.per_cell.push_back(cell);
  }
  return r;
}

IndexReport s_index_montecarlo(const WalkSpec& w, const ProductMeasure& m, std::size_t samples,
                               std::uint64_t seed, std::size_t workers,
                               std::size_t quadrature_samples) {
  if (samples == 0) throw InvalidArgument("Monte Carlo needs at least one sample");
  if (workers == 0) throw InvalidArgument("worker count must be positive");
  require_invertible(w);

  IndexReport r;
  r.mode = "mc";
  r.measure = m.str();
  r.p = w.p();
  r.mc_samples = samples;
  r.mc_seed = seed;

  // Winding of each cell's loop, by quadrature.
  std::vector<int> winding(w.cells().size());
  for (std::size_t k = 0; k < w.cells().size(); ++k) {
    const Cylinder& cyl = w.cells()[k].cylinder;
    const double wq = winding_quadrature(cell_loop(w, k), quadrature_samples).winding;
    const double rounded = std::round(wq);
    if (std::abs(wq - rounded) > kIntegerTolerance)
      throw SymbolSingular("quadrature winding on cell " + describe_cell(cyl) +
                               " is not close to an integer; refine the quadrature",
                           cyl.prefix.str());
    winding[k] = static_cast<int>(rounded);
  }

  const std::size_t blocks = (samples + kBlockSize - 1) / kBlockSize;
  std::vector<std::vector<std::size_t>> block_hits(blocks, std::vector<std::size_t>(w.cells().size()));
  auto run_blocks = [&](std::size_t first) {
    for (std::size_t blk = first; blk < blocks; blk += workers) {
      auto rng = block_stream(seed, blk);
      const std::size_t n = std::min(kBlockSize, samples - blk * kBlockSize);
      for (std::size_t i = 0; i < n; ++i) ++block_hits[blk][sample_cell(w, m, rng)];
    }
  };
  if (workers == 1) {
    run_blocks(0);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(run_blocks, t);
  }

  std::vector<std::size_t> hits(w.cells().size());
  for (const auto& bh : block_hits)
    for (std::size_t k = 0; k < hits.size(); ++k) hits[k] += bh[k];

  std::int64_t sum = 0, sum_sq = 0;
  for (std::size_t k = 0; k < hits.size(); ++k) {
    const auto h = static_cast<std::int64_t>(hits[k]);
    sum += winding[k] * h;
    sum_sq += winding[k] * winding[k] * h;
    const Cylinder& cyl = w.cells()[k].cylinder;
    r.per_cell.push_back({cyl, winding[k], measure(m, cyl), exact_measure(m, cyl), hits[k]});
    count_class(r.classification_counts, winding[k]);
  }
  const double n = static_cast<double>(samples);
  r.numeric = static_cast<double>(sum) / n;
  if (samples > 1) {
    const double var = (static_cast<double>(sum_sq) - n * r.numeric * r.numeric) / (n - 1.0);
    r.mc_stderr = std::sqrt(std::max(var, 0.0) / n);
  } else {
    r.mc_stderr = 0.0;
  }
  return r;
}

double falk_measure_pairing(const Cylinder& c, const ProductMeasure& m, std::size_t truncation) {
  const double inside = measure(m, c);
  return falk_pairing(1, truncation) * inside + falk_pairing(0, truncation) * (1.0 - inside);
}

std::string report_to_json(const IndexReport& r) {
  using nlohmann::json;
  auto dyadic = [](const DyadicRational& d) {
    return json{{"num", d.numerator()}, {"exp", d.exponent()}};
  };
  json cells = json::array();
  for (const auto& c : r.per_cell) {
    json jc{{"prefix", c.cylinder.prefix.str()}, {"winding", c.winding}, {"measure", c.measure}};
    if (c.exact_measure) jc["exact_measure"] = dyadic(*c.exact_measure);
    if (r.mode == "mc") jc["hits"] = c.hits;
    cells.push_back(std::move(jc));
  }
  json doc{{"mode", r.mode},
           {"measure", r.measure},
           {"p", r.p},
           {"numeric", r.numeric},
           {"per_cell", std::move(cells)},
           {"classification_counts",
            {{"plus", r.classification_counts.plus},
             {"zero", r.classification_counts.zero},
             {"minus", r.classification_counts.minus}}}};
  doc["exact"] = r.exact ? dyadic(*r.exact) : json(nullptr);
  if (r.mc_stderr) doc["mc_stderr"] = *r.mc_stderr;
  if (r.mc_samples) doc["mc_samples"] = *r.mc_samples;
  if (r.mc_seed) doc["mc_seed"] = *r.mc_seed;
  return doc.dump(2) + "\n";
}

}  // namespace treewalk
