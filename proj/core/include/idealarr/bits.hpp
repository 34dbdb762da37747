#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>

namespace idealarr {

// Fixed 128-bit set, wide enough for the 120 positive roots of E8.
struct Bits128 {
  std::uint64_t w0 = 0;
  std::uint64_t w1 = 0;

  static constexpr int capacity = 128;

  constexpr Bits128() = default;
  constexpr Bits128(std::uint64_t lo, std::uint64_t hi) : w0(lo), w1(hi) {}

  static constexpr Bits128 one(int i) {
    Bits128 b;
    b.set(i);
    return b;
  }

  // First n bits set.
  static constexpr Bits128 first_n(int n) {
    Bits128 b;
    if (n >= 128) {
      b.w0 = b.w1 = ~0ull;
    } else if (n >= 64) {
      b.w0 = ~0ull;
      b.w1 = (n == 64) ? 0 : ((1ull << (n - 64)) - 1);
    } else if (n > 0) {
      b.w0 = (1ull << n) - 1;
    }
    return b;
  }

  constexpr void set(int i) {
    if (i < 64)
      w0 |= 1ull << i;
    else
      w1 |= 1ull << (i - 64);
  }
  constexpr void reset(int i) {
    if (i < 64)
      w0 &= ~(1ull << i);
    else
      w1 &= ~(1ull << (i - 64));
  }
  constexpr bool test(int i) const {
    return i < 64 ? (w0 >> i) & 1 : (w1 >> (i - 64)) & 1;
  }

  constexpr int count() const {
    return std::popcount(w0) + std::popcount(w1);
  }
  constexpr bool any() const { return w0 || w1; }
  constexpr bool none() const { return !any(); }

  constexpr Bits128 operator&(const Bits128& o) const { return {w0 & o.w0, w1 & o.w1}; }
  constexpr Bits128 operator|(const Bits128& o) const { return {w0 | o.w0, w1 | o.w1}; }
  constexpr Bits128 operator^(const Bits128& o) const { return {w0 ^ o.w0, w1 ^ o.w1}; }
  constexpr Bits128 operator~() const { return {~w0, ~w1}; }
  constexpr Bits128& operator&=(const Bits128& o) { w0 &= o.w0; w1 &= o.w1; return *this; }
  constexpr Bits128& operator|=(const Bits128& o) { w0 |= o.w0; w1 |= o.w1; return *this; }
  constexpr Bits128& operator^=(const Bits128& o) { w0 ^= o.w0; w1 ^= o.w1; return *this; }

  // Set difference: bits in *this but not in o.
  constexpr Bits128 minus(const Bits128& o) const { return {w0 & ~o.w0, w1 & ~o.w1}; }

  constexpr bool operator==(const Bits128& o) const = default;
  // Lexicographic on the numeric value (w1 = high word); a deterministic
  // total order used for sorting flats and ideals.
  constexpr bool operator<(const Bits128& o) const {
    return w1 != o.w1 ? w1 < o.w1 : w0 < o.w0;
  }

  constexpr bool is_subset_of(const Bits128& o) const {
    return (w0 & ~o.w0) == 0 && (w1 & ~o.w1) == 0;
  }
  constexpr bool intersects(const Bits128& o) const {
    return (w0 & o.w0) || (w1 & o.w1);
  }

  // Index of the lowest set bit; -1 when empty.
  constexpr int lowest() const {
    if (w0) return std::countr_zero(w0);
    if (w1) return 64 + std::countr_zero(w1);
    return -1;
  }

  // Invoke f(i) for every set bit, ascending.
  template <class F>
  void for_each(F&& f) const {
    std::uint64_t m = w0;
    while (m) {
      f(std::countr_zero(m));
      m &= m - 1;
    }
    m = w1;
    while (m) {
      f(64 + std::countr_zero(m));
      m &= m - 1;
    }
  }

  std::string to_string(int n) const {
    std::string s(static_cast<std::size_t>(n), '0');
    for (int i = 0; i < n; ++i)
      if (test(i)) s[static_cast<std::size_t>(i)] = '1';
    return s;
  }
};

struct Bits128Hash {
  std::size_t operator()(const Bits128& b) const {
    std::uint64_t h = b.w0 * 0x9e3779b97f4a7c15ull;
    h ^= b.w1 + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

}  // namespace idealarr
