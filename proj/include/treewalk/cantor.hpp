#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "treewalk/tree.hpp"

namespace treewalk {

/// Exact value numerator / 2^exponent, kept canonical (odd numerator, or
/// zero with exponent 0). Arithmetic throws std::overflow_error instead of
/// wrapping.
class DyadicRational {
 public:
  static constexpr unsigned kMaxExponent = 62;

  DyadicRational() = default;
  DyadicRational(std::int64_t numerator, unsigned exponent);
  static DyadicRational integer(std::int64_t n) { return {n, 0}; }

  std::int64_t numerator() const noexcept { return num_; }
  unsigned exponent() const noexcept { return exp_; }
  double to_double() const noexcept;
  std::string str() const;

  DyadicRational half() const;

  friend DyadicRational operator+(const DyadicRational& a, const DyadicRational& b);
  friend DyadicRational operator-(const DyadicRational& a, const DyadicRational& b);
  friend DyadicRational operator-(const DyadicRational& a);
  DyadicRational& operator+=(const DyadicRational& b) { return *this = *this + b; }
  DyadicRational& operator-=(const DyadicRational& b) { return *this = *this - b; }
  // Multiplication by an integer (winding numbers times cylinder measures).
  friend DyadicRational operator*(std::int64_t k, const DyadicRational& a);

  friend bool operator==(const DyadicRational&, const DyadicRational&) = default;
  friend std::strong_ordering operator<=>(const DyadicRational& a, const DyadicRational& b);

 private:
  std::int64_t num_ = 0;
  unsigned exp_ = 0;
};

/// Clopen subset of K = {0,1}^N: all sequences extending `prefix`. The
/// cylinder with prefix w is the boundary of the subtree below vertex w.
struct Cylinder {
  BitString prefix;

  static Cylinder parse(std::string_view text) { return {BitString::parse(text)}; }
  std::size_t level() const noexcept { return prefix.size(); }
  Cylinder child(int bit) const { return {prefix.append(bit)}; }
  bool contains(const Cylinder& other) const noexcept { return prefix.is_prefix_of(other.prefix); }
  bool disjoint(const Cylinder& other) const noexcept {
    return !contains(other) && !other.contains(*this);
  }

  friend bool operator==(const Cylinder&, const Cylinder&) = default;
  friend auto operator<=>(const Cylinder& a, const Cylinder& b) { return a.prefix <=> b.prefix; }
};

/// Product measure on K. Coordinate i carries weight theta_i on 0 and
/// 1 - theta_i on 1.
class ProductMeasure {
 public:
  enum class Kind { uniform, bernoulli, per_level };

  static ProductMeasure uniform();
  static ProductMeasure bernoulli(double theta);
  // theta_1..theta_k on the first k coordinates, uniform afterwards.
  static ProductMeasure per_level(std::vector<double> thetas);

  // Accepts "uniform", "bernoulli:THETA" and "levels:T1,T2,...".
  static ProductMeasure parse(std::string_view text);

  Kind kind() const noexcept { return kind_; }
  double theta(std::size_t coordinate) const noexcept;
  double weight(std::size_t coordinate, int bit) const noexcept;
  std::string str() const;

 private:
  ProductMeasure(Kind kind, std::vector<double> thetas);
  Kind kind_ = Kind::uniform;
  std::vector<double> thetas_;
};

double measure(const ProductMeasure& m, const Cylinder& c);

/// Exact 1 / 2^level; only defined for the uniform measure.
std::optional<DyadicRational> exact_measure(const ProductMeasure& m, const Cylinder& c);

/// Point of the middle-thirds Cantor set with ternary digits 2*bit_i,
/// followed by an all-zero tail. For reporting only.
double ternary_point(const BitString& prefix);

/// Cantor function at ternary_point(prefix): sum_i bit_i 2^{-i}.
DyadicRational cantor_function(const BitString& prefix);

/// Throws InvalidPartition unless the cylinders partition K.
void validate_prefix_code(std::span<const Cylinder> cells);

struct RefinedCell {
  Cylinder cylinder;
  std::size_t ancestor;  // index into the input cell list
};

/// The 2^level cylinders of the given level in lexicographic order, each
/// tagged with the input cell containing it.
std::vector<RefinedCell> refine_partition(std::span<const Cylinder> cells, std::size_t level);

}  // namespace treewalk
