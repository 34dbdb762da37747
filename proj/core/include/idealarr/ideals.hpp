#pragma once

#include <functional>
#include <string>
#include <vector>

#include "idealarr/bits.hpp"
#include "idealarr/rootsys.hpp"

namespace idealarr {

// Ideals of the positive-root poset are up-closed subsets, represented as
// bitsets over the root indices of a RootSystem.

// Up-closure of the given roots (indices).
Bits128 ideal_closure(const RootSystem& rs, const std::vector<int>& generators);

// Is the set up-closed?
bool is_ideal(const RootSystem& rs, const Bits128& set);

// Minimal elements of the ideal (its unique minimal generating antichain),
// ascending root indices.
std::vector<int> minimal_generators(const RootSystem& rs, const Bits128& ideal);

// The ideal I_t of all roots of height >= t (t >= 1).
Bits128 ideal_It(const RootSystem& rs, int t);

// Ideal exponents: dual partition of the per-height counts of the
// complement of the ideal, ascending.  Empty for the full ideal.
std::vector<int> ideal_exponents(const RootSystem& rs, const Bits128& ideal);

// Enumeration filters.
struct IdealFilter {
  bool strictly_positive = false;  // ideal must avoid all simple roots
  int within_height = 0;           // if > 0, ideal must lie inside I_t
};

// Calls fn for every ideal matching the filter, in a fixed deterministic
// order.  The empty ideal is always included.
void for_each_ideal(const RootSystem& rs, const IdealFilter& filter,
                    const std::function<void(const Bits128&)>& fn);
std::vector<Bits128> enumerate_ideals(const RootSystem& rs,
                                      const IdealFilter& filter = {});
long long count_ideals(const RootSystem& rs, const IdealFilter& filter = {});

// Closed-form predicted counts (all types): product over the exponents e of
// (e + h + 1)/(e + 1), resp. (e + h - 1)/(e + 1) for strictly positive
// ideals, where h is the Coxeter number.
long long predicted_ideal_count(const RootSystem& rs, bool strictly_positive);

// "<Type><rank>:[<gen>,<gen>,...]" with minimal generators as coefficient
// digit strings, e.g. "F4:[0121]"; the empty ideal serializes to "F4:[]".
std::string serialize_ideal(const RootSystem& rs, const Bits128& ideal);

// Parses an ideal description:
//   ""            or "[]"          -> empty ideal
//   "[0121]"                        -> up-closure of the listed generators
//   "[e1+e2,e1-e3]"                 -> coordinate sugar (classical types)
//   "[122321(2)]"                   -> display form for type E
//   "It4"                           -> the ideal I_4 (case-insensitive "it")
//   "F4:[0121]"                     -> serialized form (prefix must match)
// Throws std::invalid_argument on unknown tokens.
Bits128 parse_ideal(const RootSystem& rs, const std::string& text);

}  // namespace idealarr
