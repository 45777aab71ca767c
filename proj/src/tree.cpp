#include "treewalk/tree.hpp"

#include <bit>

#include "treewalk/errors.hpp"

namespace treewalk {

BitString::BitString(std::uint64_t value, std::size_t length) : value_(value), length_(length) {
  if (length > kMaxBits) throw InvalidArgument("bit string longer than 63 bits");
  if (length < 64 && (value >> length) != 0)
    throw InvalidArgument("bit string value does not fit its length");
}

BitString BitString::parse(std::string_view text) {
  if (text.size() > kMaxBits) throw InvalidArgument("bit string longer than 63 bits");
  std::uint64_t v = 0;
  for (char c : text) {
    if (c != '0' && c != '1')
      throw InvalidArgument("bit string may only contain '0' and '1': \"" + std::string(text) + "\"");
    v = (v << 1) | static_cast<std::uint64_t>(c - '0');
  }
  return BitString(v, text.size());
}

int BitString::operator[](std::size_t i) const {
  if (i >= length_) throw InvalidArgument("bit index out of range");
  return static_cast<int>((value_ >> (length_ - 1 - i)) & 1U);
}

BitString BitString::append(int bit) const {
  if (bit != 0 && bit != 1) throw InvalidArgument("bit must be 0 or 1");
  return BitString((value_ << 1) | static_cast<std::uint64_t>(bit), length_ + 1);
}

BitString BitString::prefix(std::size_t n) const {
  if (n > length_) throw InvalidArgument("prefix longer than bit string");
  return BitString(value_ >> (length_ - n), n);
}

bool BitString::is_prefix_of(const BitString& other) const noexcept {
  return length_ <= other.length_ && (other.value_ >> (other.length_ - length_)) == value_;
}

std::string BitString::str() const {
  std::string s(length_, '0');
  for (std::size_t i = 0; i < length_; ++i)
    if ((value_ >> (length_ - 1 - i)) & 1U) s[i] = '1';
  return s;
}

std::strong_ordering operator<=>(const BitString& a, const BitString& b) noexcept {
  const std::size_t common = a.length_ < b.length_ ? a.length_ : b.length_;
  const std::uint64_t pa = a.value_ >> (a.length_ - common);
  const std::uint64_t pb = b.value_ >> (b.length_ - common);
  if (pa != pb) return pa <=> pb;
  return a.length_ <=> b.length_;
}

VertexAddr parent(const VertexAddr& v) {
  if (v.empty()) throw NoParentError("the root has no parent");
  return v.prefix(v.size() - 1);
}

VertexAddr sibling(const VertexAddr& v) {
  if (v.empty()) throw NoParentError("the root has no sibling");
  return BitString(v.value() ^ 1U, v.size());
}

TruncatedTree enumerate(std::size_t d) {
  if (d < 1 || d > TruncatedTree::kMaxDepth)
    throw InvalidArgument("tree depth must lie in [1, 20], got " + std::to_string(d));
  return TruncatedTree(d);
}

std::size_t TruncatedTree::index_of(const VertexAddr& v) const {
  if (v.size() > depth_) throw InvalidArgument("vertex " + v.str() + " lies below the truncation");
  return (std::size_t{1} << v.size()) - 1 + static_cast<std::size_t>(v.value());
}

std::size_t TruncatedTree::depth_of(std::size_t index) const {
  if (index >= vertex_count()) throw InvalidArgument("vertex index out of range");
  return static_cast<std::size_t>(std::bit_width(index + 1)) - 1;
}

VertexAddr TruncatedTree::vertex_at(std::size_t index) const {
  const std::size_t k = depth_of(index);
  return BitString(index + 1 - (std::size_t{1} << k), k);
}

}  // namespace treewalk
