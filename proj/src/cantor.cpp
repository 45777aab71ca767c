#include "treewalk/cantor.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "treewalk/errors.hpp"

namespace treewalk {

namespace {

std::int64_t checked_shift(std::int64_t v, unsigned by) {
  if (by == 0 || v == 0) return v;
  if (by >= 63) throw std::overflow_error("dyadic rational overflow");
  const std::int64_t limit = INT64_MAX >> by;
  if (v > limit || v < -limit) throw std::overflow_error("dyadic rational overflow");
  return v * (std::int64_t{1} << by);
}

}  // namespace

DyadicRational::DyadicRational(std::int64_t numerator, unsigned exponent)
    : num_(numerator), exp_(exponent) {
  if (num_ == 0) {
    exp_ = 0;
    return;
  }
  while (exp_ > 0 && num_ % 2 == 0) {
    num_ /= 2;
    --exp_;
  }
  if (exp_ > kMaxExponent) throw std::overflow_error("dyadic rational exponent above 62");
}

double DyadicRational::to_double() const noexcept {
  return std::ldexp(static_cast<double>(num_), -static_cast<int>(exp_));
}

std::string DyadicRational::str() const {
  if (exp_ == 0) return std::to_string(num_);
  return std::to_string(num_) + "/2^" + std::to_string(exp_);
}

DyadicRational DyadicRational::half() const {
  if (num_ == 0) return {};
  return {num_, exp_ + 1};
}

DyadicRational operator+(const DyadicRational& a, const DyadicRational& b) {
  const unsigned e = std::max(a.exp_, b.exp_);
  const std::int64_t na = checked_shift(a.num_, e - a.exp_);
  const std::int64_t nb = checked_shift(b.num_, e - b.exp_);
  std::int64_t sum = 0;
  if (__builtin_add_overflow(na, nb, &sum)) throw std::overflow_error("dyadic rational overflow");
  return {sum, e};
}

DyadicRational operator-(const DyadicRational& a) {
  if (a.num_ == INT64_MIN) throw std::overflow_error("dyadic rational overflow");
  return {-a.num_, a.exp_};
}

DyadicRational operator-(const DyadicRational& a, const DyadicRational& b) { return a + (-b); }

DyadicRational operator*(std::int64_t k, const DyadicRational& a) {
  std::int64_t prod = 0;
  if (__builtin_mul_overflow(k, a.num_, &prod)) throw std::overflow_error("dyadic rational overflow");
  return {prod, a.exp_};
}

std::strong_ordering operator<=>(const DyadicRational& a, const DyadicRational& b) {
  const DyadicRational d = a - b;
  return d.num_ <=> 0;
}

ProductMeasure::ProductMeasure(Kind kind, std::vector<double> thetas)
    : kind_(kind), thetas_(std::move(thetas)) {
  for (double t : thetas_)
    if (!(t > 0.0 && t < 1.0))
      throw InvalidArgument("product measure weight must lie in (0, 1)");
}

ProductMeasure ProductMeasure::uniform() { return {Kind::uniform, {}}; }

ProductMeasure ProductMeasure::bernoulli(double theta) { return {Kind::bernoulli, {theta}}; }

ProductMeasure ProductMeasure::per_level(std::vector<double> thetas) {
  return {Kind::per_level, std::move(thetas)};
}

namespace {

double parse_double(std::string_view s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw InvalidArgument("not a number: \"" + std::string(s) + "\"");
  return v;
}

// Accepts a decimal or a fraction "n/d".
double parse_weight(std::string_view s) {
  const auto slash = s.find('/');
  if (slash == std::string_view::npos) return parse_double(s);
  return parse_double(s.substr(0, slash)) / parse_double(s.substr(slash + 1));
}

}  // namespace

ProductMeasure ProductMeasure::parse(std::string_view text) {
  if (text == "uniform") return uniform();
  if (text.starts_with("bernoulli:")) return bernoulli(parse_weight(text.substr(10)));
  if (text.starts_with("levels:")) {
    std::vector<double> thetas;
    std::string_view rest = text.substr(7);
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      thetas.push_back(parse_weight(rest.substr(0, comma)));
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
    return per_level(std::move(thetas));
  }
  throw InvalidArgument("unknown measure \"" + std::string(text) +
                        "\" (expected uniform, bernoulli:THETA or levels:T1,...)");
}

double ProductMeasure::theta(std::size_t coordinate) const noexcept {
  switch (kind_) {
    case Kind::bernoulli:
      return thetas_.front();
    case Kind::per_level:
      if (coordinate < thetas_.size()) return thetas_[coordinate];
      return 0.5;
    case Kind::uniform:
      break;
  }
  return 0.5;
}

double ProductMeasure::weight(std::size_t coordinate, int bit) const noexcept {
  const double t = theta(coordinate);
  return bit == 0 ? t : 1.0 - t;
}

std::string ProductMeasure::str() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind_) {
    case Kind::uniform:
      return "uniform";
    case Kind::bernoulli:
      os << "bernoulli:" << thetas_.front();
      return os.str();
    case Kind::per_level:
      os << "levels:";
      for (std::size_t i = 0; i < thetas_.size(); ++i) os << (i ? "," : "") << thetas_[i];
      return os.str();
  }
  return {};
}

double measure(const ProductMeasure& m, const Cylinder& c) {
  if (m.kind() == ProductMeasure::Kind::uniform) return std::ldexp(1.0, -static_cast<int>(c.level()));
  double v = 1.0;
  for (std::size_t i = 0; i < c.level(); ++i) v *= m.weight(i, c.prefix[i]);
  return v;
}

std::optional<DyadicRational> exact_measure(const ProductMeasure& m, const Cylinder& c) {
  if (m.kind() != ProductMeasure::Kind::uniform) return std::nullopt;
  return DyadicRational(1, static_cast<unsigned>(c.level()));
}

double ternary_point(const BitString& prefix) {
  double x = 0.0;
  double scale = 1.0;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    scale /= 3.0;
    if (prefix[i]) x += 2.0 * scale;
  }
  return x;
}

DyadicRational cantor_function(const BitString& prefix) {
  return {static_cast<std::int64_t>(prefix.value()), static_cast<unsigned>(prefix.size())};
}

void validate_prefix_code(std::span<const Cylinder> cells) {
  if (cells.empty()) throw InvalidPartition("empty cell list does not cover the boundary");
  std::vector<Cylinder> sorted(cells.begin(), cells.end());
  std::sort(sorted.begin(), sorted.end());
  // In lexicographic order a cell and any cell it contains are adjacent.
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (sorted[i - 1].contains(sorted[i]))
      throw InvalidPartition("cells \"" + sorted[i - 1].prefix.str() + "\" and \"" +
                             sorted[i].prefix.str() + "\" overlap");
  std::size_t deepest = 0;
  for (const auto& c : sorted) deepest = std::max(deepest, c.level());
  unsigned __int128 total = 0;
  for (const auto& c : sorted) total += static_cast<unsigned __int128>(1) << (deepest - c.level());
  if (total != static_cast<unsigned __int128>(1) << deepest)
    throw InvalidPartition("prefix code is incomplete: the cells do not cover the boundary");
}

std::vector<RefinedCell> refine_partition(std::span<const Cylinder> cells, std::size_t level) {
  validate_prefix_code(cells);
  for (const auto& c : cells)
    if (c.level() > level)
      throw InvalidPartition("cannot refine to level " + std::to_string(level) + ": cell \"" +
                             c.prefix.str() + "\" is deeper");
  if (level > 24) throw InvalidArgument("refinement level above 24");
  std::vector<RefinedCell> out;
  out.reserve(std::size_t{1} << level);
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << level); ++v) {
    const Cylinder c{BitString(v, level)};
    for (std::size_t k = 0; k < cells.size(); ++k)
      if (cells[k].contains(c)) {
        out.push_back({c, k});
        break;
      }
  }
  return out;
}

}  // namespace treewalk
