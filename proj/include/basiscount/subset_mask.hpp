#pragma once

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace basiscount {

/// A subset of the ground set {0, ..., n-1}, stored as a little-endian
/// array of 64-bit words. Only bits below `universe()` may be set.
class SubsetMask {
 public:
  SubsetMask() = default;

  explicit SubsetMask(std::size_t universe)
      : universe_(universe), words_(word_count(universe), 0) {}

  SubsetMask(std::size_t universe, std::initializer_list<std::size_t> elements)
      : SubsetMask(universe) {
    for (auto e : elements) insert(e);
  }

  static SubsetMask from_elements(std::size_t universe, std::span<const std::size_t> elements) {
    SubsetMask s(universe);
    for (auto e : elements) s.insert(e);
    return s;
  }

  static SubsetMask from_bits(std::size_t universe, std::uint64_t bits) {
    if (universe > 64) throw std::invalid_argument("from_bits: universe exceeds 64");
    if (universe < 64 && (bits >> universe) != 0)
      throw std::out_of_range("from_bits: bit set beyond universe");
    SubsetMask s(universe);
    if (!s.words_.empty()) s.words_[0] = bits;
    return s;
  }

  static SubsetMask full(std::size_t universe) {
    SubsetMask s(universe);
    for (std::size_t i = 0; i < universe; ++i) s.insert(i);
    return s;
  }

  std::size_t universe() const noexcept { return universe_; }

  bool contains(std::size_t e) const {
    check(e);
    return (words_[e / 64] >> (e % 64)) & 1u;
  }

  void insert(std::size_t e) {
    check(e);
    words_[e / 64] |= std::uint64_t{1} << (e % 64);
  }

  void erase(std::size_t e) {
    check(e);
    words_[e / 64] &= ~(std::uint64_t{1} << (e % 64));
  }

  SubsetMask with(std::size_t e) const {
    SubsetMask s = *this;
    s.insert(e);
    return s;
  }

  SubsetMask without(std::size_t e) const {
    SubsetMask s = *this;
    s.erase(e);
    return s;
  }

  std::size_t count() const noexcept {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  bool empty() const noexcept {
    for (auto w : words_)
      if (w) return false;
    return true;
  }

  /// Elements in ascending order.
  std::vector<std::size_t> elements() const {
    std::vector<std::size_t> out;
    out.reserve(count());
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits) {
        out.push_back(w * 64 + static_cast<std::size_t>(std::countr_zero(bits)));
        bits &= bits - 1;
      }
    }
    return out;
  }

  SubsetMask complement() const {
    SubsetMask s(universe_);
    for (std::size_t w = 0; w < words_.size(); ++w) s.words_[w] = ~words_[w];
    s.trim();
    return s;
  }

  bool is_subset_of(const SubsetMask& other) const {
    same_universe(other);
    for (std::size_t w = 0; w < words_.size(); ++w)
      if (words_[w] & ~other.words_[w]) return false;
    return true;
  }

  SubsetMask& operator|=(const SubsetMask& o) {
    same_universe(o);
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] |= o.words_[w];
    return *this;
  }
  SubsetMask& operator&=(const SubsetMask& o) {
    same_universe(o);
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] &= o.words_[w];
    return *this;
  }
  SubsetMask& operator-=(const SubsetMask& o) {
    same_universe(o);
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] &= ~o.words_[w];
    return *this;
  }
  friend SubsetMask operator|(SubsetMask a, const SubsetMask& b) { return a |= b; }
  friend SubsetMask operator&(SubsetMask a, const SubsetMask& b) { return a &= b; }
  friend SubsetMask operator-(SubsetMask a, const SubsetMask& b) { return a -= b; }

  /// Low 64 bits; only meaningful when universe() <= 64.
  std::uint64_t to_bits() const {
    if (universe_ > 64) throw std::invalid_argument("to_bits: universe exceeds 64");
    return words_.empty() ? 0 : words_[0];
  }

  std::span<const std::uint64_t> words() const noexcept { return words_; }

  friend bool operator==(const SubsetMask& a, const SubsetMask& b) noexcept {
    return a.universe_ == b.universe_ && a.words_ == b.words_;
  }

  /// Orders by universe, then by numeric value of the mask.
  friend std::strong_ordering operator<=>(const SubsetMask& a, const SubsetMask& b) noexcept {
    if (auto c = a.universe_ <=> b.universe_; c != 0) return c;
    for (std::size_t w = a.words_.size(); w-- > 0;) {
      if (auto c = a.words_[w] <=> b.words_[w]; c != 0) return c;
    }
    return std::strong_ordering::equal;
  }

  std::string to_string() const {
    std::string out = "{";
    bool first = true;
    for (auto e : elements()) {
      if (!first) out += ",";
      out += std::to_string(e);
      first = false;
    }
    return out + "}";
  }

 private:
  static std::size_t word_count(std::size_t universe) { return (universe + 63) / 64; }

  void check(std::size_t e) const {
    if (e >= universe_)
      throw std::out_of_range("element " + std::to_string(e) + " outside ground set of size " +
                              std::to_string(universe_));
  }

  void same_universe(const SubsetMask& o) const {
    if (o.universe_ != universe_) throw std::invalid_argument("subset masks over different ground sets");
  }

  void trim() {
    if (universe_ % 64 != 0 && !words_.empty())
      words_.back() &= (std::uint64_t{1} << (universe_ % 64)) - 1;
  }

  std::size_t universe_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace basiscount
