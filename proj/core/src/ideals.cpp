#include "idealarr/ideals.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>

namespace idealarr {

Bits128 ideal_closure(const RootSystem& rs, const std::vector<int>& generators) {
  Bits128 m;
  for (int g : generators) {
    if (g < 0 || g >= rs.num_roots) throw std::invalid_argument("bad root index");
    m |= rs.upmask[g];
  }
  return m;
}

bool is_ideal(const RootSystem& rs, const Bits128& set) {
  bool ok = true;
  set.for_each([&](int i) {
    if (!rs.upmask[i].is_subset_of(set)) ok = false;
  });
  return ok;
}

std::vector<int> minimal_generators(const RootSystem& rs, const Bits128& ideal) {
  std::vector<int> gens;
  ideal.for_each([&](int i) {
    if ((ideal & rs.downmask[i]) == Bits128::one(i)) gens.push_back(i);
  });
  return gens;
}

Bits128 ideal_It(const RootSystem& rs, int t) {
  if (t < 1) throw std::invalid_argument("I_t needs t >= 1");
  Bits128 m;
  for (int i = 0; i < rs.num_roots; ++i)
    if (rs.heights[i] >= t) m.set(i);
  return m;
}

std::vector<int> ideal_exponents(const RootSystem& rs, const Bits128& ideal) {
  std::vector<int> hs;
  rs.all_mask.minus(ideal).for_each([&](int i) { hs.push_back(rs.heights[i]); });
  return dual_partition(hs);
}

void for_each_ideal(const RootSystem& rs, const IdealFilter& filter,
                    const std::function<void(const Bits128&)>& fn) {
  // Roots addable under the filter.
  Bits128 allowed = rs.all_mask;
  if (filter.strictly_positive) allowed = allowed.minus(rs.simple_mask);
  if (filter.within_height > 0) allowed &= ideal_It(rs, filter.within_height);

  // Up-covers of each root (indices), used to decide when a root may join.
  std::vector<Bits128> covers(rs.num_roots);
  for (int i = 0; i < rs.num_roots; ++i)
    for (int s = 0; s < rs.rank; ++s) {
      int j = rs.root_sum(i, rs.simple_index[s]);
      if (j >= 0) covers[i].set(j);
    }

  std::vector<int> order;  // descending (height, lex) = descending index
  allowed.for_each([&](int i) { order.push_back(i); });
  std::reverse(order.begin(), order.end());

  // DFS: at position k decide whether root order[k] joins; it may join only
  // if all of its up-covers already did (keeps the set up-closed).
  std::function<void(std::size_t, Bits128)> rec = [&](std::size_t k, Bits128 cur) {
    if (k == order.size()) {
      fn(cur);
      return;
    }
    int i = order[k];
    rec(k + 1, cur);  // exclude
    if (covers[i].is_subset_of(cur)) {
      Bits128 nxt = cur;
      nxt.set(i);
      rec(k + 1, nxt);  // include
    }
  };
  rec(0, Bits128{});
}

std::vector<Bits128> enumerate_ideals(const RootSystem& rs, const IdealFilter& filter) {
  std::vector<Bits128> out;
  for_each_ideal(rs, filter, [&](const Bits128& m) { out.push_back(m); });
  return out;
}

long long count_ideals(const RootSystem& rs, const IdealFilter& filter) {
  long long n = 0;
  for_each_ideal(rs, filter, [&](const Bits128&) { ++n; });
  return n;
}

long long predicted_ideal_count(const RootSystem& rs, bool strictly_positive) {
  int h = rs.coxeter_number();
  __int128 num = 1, den = 1;
  for (int e : rs.weyl_exponents()) {
    num *= (strictly_positive ? e + h - 1 : e + h + 1);
    den *= (e + 1);
  }
  if (num % den != 0) throw std::logic_error("count formula not integral");
  return static_cast<long long>(num / den);
}

std::string serialize_ideal(const RootSystem& rs, const Bits128& ideal) {
  std::ostringstream os;
  os << rs.type << rs.rank << ":[";
  bool first = true;
  for (int g : minimal_generators(rs, ideal)) {
    if (!first) os << ",";
    first = false;
    os << rs.coeff_string(g);
  }
  os << "]";
  return os.str();
}

Bits128 parse_ideal(const RootSystem& rs, const std::string& text) {
  std::string s = text;
  // Strip whitespace.
  s.erase(std::remove_if(s.begin(), s.end(),
                         [](unsigned char c) { return std::isspace(c); }),
          s.end());
  if (s.empty()) return Bits128{};
  // Optional "<Type><rank>:" prefix.
  std::string prefix;
  prefix += rs.type;
  prefix += std::to_string(rs.rank);
  prefix += ":";
  if (s.rfind(prefix, 0) == 0) s = s.substr(prefix.size());
  // Named ideals I_t.
  if (s.size() >= 3 && (s[0] == 'I' || s[0] == 'i') && (s[1] == 't' || s[1] == 'T')) {
    int t = std::stoi(s.substr(2));
    return ideal_It(rs, t);
  }
  if (s == "[]") return Bits128{};
  if (s.front() != '[' || s.back() != ']')
    throw std::invalid_argument("ideal must look like [gen,gen,...]: " + text);
  std::string body = s.substr(1, s.size() - 2);
  std::vector<int> gens;
  std::size_t pos = 0;
  while (pos < body.size()) {
    std::size_t comma = body.find(',', pos);
    if (comma == std::string::npos) comma = body.size();
    std::string tok = body.substr(pos, comma - pos);
    pos = comma + 1;
    if (tok.empty()) continue;
    int idx = rs.index_of_string(tok);
    if (idx < 0) {
      for (int i = 0; i < rs.num_roots && idx < 0; ++i)
        if (rs.ambient_string(i) == tok) idx = i;
    }
    if (idx < 0)
      throw std::invalid_argument("unknown root '" + tok + "' for " + prefix);
    gens.push_back(idx);
  }
  return ideal_closure(rs, gens);
}

}  // namespace idealarr
