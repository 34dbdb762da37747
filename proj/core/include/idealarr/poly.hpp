#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace idealarr {

// Dense univariate polynomial with 64-bit integer coefficients,
// coeffs[k] = coefficient of t^k.  Normalized: no trailing zeros
// (the zero polynomial has an empty coefficient vector).
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<long long> coeffs);
  static Poly constant(long long c);
  // Product of (1 + e t) over the given e's.
  static Poly from_linear_factors(const std::vector<int>& es);
  // The t-analogue [n] = 1 + t + ... + t^(n-1); [0] = 0.
  static Poly t_integer(int n);
  // Product of [e + 1] over the given e's (empty product = 1).
  static Poly from_t_numbers(const std::vector<int>& es);

  const std::vector<long long>& coeffs() const { return c_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for 0
  bool is_zero() const { return c_.empty(); }
  long long coeff(int k) const {
    return (k >= 0 && k < static_cast<int>(c_.size())) ? c_[static_cast<std::size_t>(k)] : 0;
  }

  long long eval(long long x) const;

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  bool operator==(const Poly& o) const { return c_ == o.c_; }

  // "1 + 4t + 5t^2" style rendering.
  std::string to_string(const std::string& var = "t") const;

 private:
  void trim();
  std::vector<long long> c_;
};

}  // namespace idealarr
