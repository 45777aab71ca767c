#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace treewalk {

/// Finite 0/1 word, first bit = first step away from the root. Used both as
/// a vertex address and as a cylinder prefix. Capped at 63 bits.
class BitString {
 public:
  static constexpr std::size_t kMaxBits = 63;

  BitString() = default;
  BitString(std::uint64_t value, std::size_t length);

  static BitString parse(std::string_view text);

  std::size_t size() const noexcept { return length_; }
  bool empty() const noexcept { return length_ == 0; }
  int operator[](std::size_t i) const;

  // Big-endian integer value: the first bit is the most significant.
  std::uint64_t value() const noexcept { return value_; }

  BitString append(int bit) const;
  BitString prefix(std::size_t n) const;
  bool is_prefix_of(const BitString& other) const noexcept;

  std::string str() const;

  friend bool operator==(const BitString&, const BitString&) = default;
  // Lexicographic order, with a proper prefix sorting first.
  friend std::strong_ordering operator<=>(const BitString& a, const BitString& b) noexcept;

 private:
  std::uint64_t value_ = 0;
  std::size_t length_ = 0;
};

using VertexAddr = BitString;

inline std::size_t depth(const VertexAddr& v) noexcept { return v.size(); }

VertexAddr parent(const VertexAddr& v);
VertexAddr sibling(const VertexAddr& v);
inline VertexAddr child(const VertexAddr& v, int bit) { return v.append(bit); }

/// Vertices of the rooted binary tree up to depth d, indexed breadth-first:
/// root is 0 and depth k occupies [2^k - 1, 2^{k+1} - 2] in lexicographic order.
class TruncatedTree {
 public:
  static constexpr std::size_t kMaxDepth = 20;

  std::size_t depth() const noexcept { return depth_; }
  std::size_t vertex_count() const noexcept { return (std::size_t{1} << (depth_ + 1)) - 1; }

  std::size_t index_of(const VertexAddr& v) const;
  VertexAddr vertex_at(std::size_t index) const;
  std::size_t depth_of(std::size_t index) const;

  friend TruncatedTree enumerate(std::size_t d);

 private:
  explicit TruncatedTree(std::size_t d) : depth_(d) {}
  std::size_t depth_;
};

TruncatedTree enumerate(std::size_t d);

}  // namespace treewalk
