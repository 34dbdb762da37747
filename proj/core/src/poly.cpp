#include "idealarr/poly.hpp"

#include <stdexcept>

namespace idealarr {

namespace {

long long mulchk(long long a, long long b) {
  long long r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("poly mul");
  return r;
}

long long addchk(long long a, long long b) {
  long long r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("poly add");
  return r;
}

}  // namespace

Poly::Poly(std::vector<long long> coeffs) : c_(std::move(coeffs)) { trim(); }

Poly Poly::constant(long long c) { return Poly(std::vector<long long>{c}); }

Poly Poly::from_linear_factors(const std::vector<int>& es) {
  Poly p = Poly::constant(1);
  for (int e : es) p = p * Poly(std::vector<long long>{1, e});
  return p;
}

Poly Poly::t_integer(int n) {
  if (n < 0) throw std::invalid_argument("t_integer of negative n");
  return Poly(std::vector<long long>(static_cast<std::size_t>(n), 1));
}

Poly Poly::from_t_numbers(const std::vector<int>& es) {
  Poly p = Poly::constant(1);
  for (int e : es) p = p * t_integer(e + 1);
  return p;
}

void Poly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

long long Poly::eval(long long x) const {
  long long r = 0;
  for (std::size_t i = c_.size(); i-- > 0;) r = addchk(mulchk(r, x), c_[i]);
  return r;
}

Poly Poly::operator+(const Poly& o) const {
  std::vector<long long> r(std::max(c_.size(), o.c_.size()), 0);
  for (std::size_t i = 0; i < c_.size(); ++i) r[i] = c_[i];
  for (std::size_t i = 0; i < o.c_.size(); ++i) r[i] = addchk(r[i], o.c_[i]);
  return Poly(std::move(r));
}

Poly Poly::operator-(const Poly& o) const {
  std::vector<long long> r(std::max(c_.size(), o.c_.size()), 0);
  for (std::size_t i = 0; i < c_.size(); ++i) r[i] = c_[i];
  for (std::size_t i = 0; i < o.c_.size(); ++i) r[i] = addchk(r[i], -o.c_[i]);
  return Poly(std::move(r));
}

Poly Poly::operator*(const Poly& o) const {
  if (is_zero() || o.is_zero()) return Poly();
  std::vector<long long> r(c_.size() + o.c_.size() - 1, 0);
  for (std::size_t i = 0; i < c_.size(); ++i)
    for (std::size_t j = 0; j < o.c_.size(); ++j)
      r[i + j] = addchk(r[i + j], mulchk(c_[i], o.c_[j]));
  return Poly(std::move(r));
}

std::string Poly::to_string(const std::string& var) const {
  if (c_.empty()) return "0";
  std::string s;
  for (std::size_t k = 0; k < c_.size(); ++k) {
    long long a = c_[k];
    if (a == 0) continue;
    if (!s.empty()) {
      s += a > 0 ? " + " : " - ";
      if (a < 0) a = -a;
    } else if (a < 0) {
      s += "-";
      a = -a;
    }
    if (k == 0) {
      s += std::to_string(a);
    } else {
      if (a != 1) s += std::to_string(a);
      s += var;
      if (k > 1) s += "^" + std::to_string(k);
    }
  }
  return s.empty() ? "0" : s;
}

}  // namespace idealarr
