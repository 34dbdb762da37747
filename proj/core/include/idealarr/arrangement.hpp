#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "idealarr/bits.hpp"
#include "idealarr/errors.hpp"
#include "idealarr/linalg.hpp"
#include "idealarr/poly.hpp"
#include "idealarr/rootsys.hpp"

namespace idealarr {

// A central hyperplane arrangement in Z^dim, each hyperplane given by a
// primitive integer normal (sign-normalized: first nonzero entry positive).
// Hyperplanes are indexed 0..num()-1 in construction order.
class Arrangement {
 public:
  Arrangement() = default;

  // Primitivizes, sign-normalizes and deduplicates (parallel normals
  // coincide after normalization; first occurrence wins).  Zero normals are
  // rejected.
  static Arrangement from_normals(int dim, const Mat& raw);
  // One hyperplane per selected root; normals are the scaled root
  // coordinates made primitive.  Root indices are kept as labels.
  static Arrangement from_roots(const RootSystem& rs, const Bits128& roots);

  int dim() const { return dim_; }
  int num() const { return static_cast<int>(normals_.size()); }
  int rank() const { return rank_; }
  const Mat& normals() const { return normals_; }
  const Vec& normal(int i) const { return normals_[static_cast<std::size_t>(i)]; }
  // Root index behind hyperplane i, or -1 when not built from roots.
  const std::vector<int>& root_labels() const { return labels_; }
  Bits128 hyperplane_mask() const { return Bits128::first_n(num()); }

  // Sub-arrangement keeping the flagged hyperplanes (same ambient space).
  // This is the localization when `hyps` is the set of hyperplanes
  // containing a flat.
  Arrangement subarrangement(const Bits128& hyps) const;
  Arrangement deletion(int h) const;
  // Restriction to hyperplane h: the arrangement {H' cap H_h} inside H_h,
  // written in a saturated integer basis of H_h (dimension drops by one).
  Arrangement restriction(int h) const;

  // Canonical description of the essentialized arrangement: normals are
  // rewritten in the Hermite basis of their own integer span, normalized and
  // sorted.  Equal keys imply linearly isomorphic arrangements (same
  // hyperplane multiset up to a lattice change of coordinates).
  std::string canonical_key() const;

  // "dim=<l> n=<count>" followed by one normal per line.
  std::string dump() const;

 private:
  int dim_ = 0;
  int rank_ = 0;
  Mat normals_;
  std::vector<int> labels_;
};

// A flat of the intersection lattice, identified by the set of hyperplanes
// containing it (closure-closed bitset).
struct Flat {
  Bits128 hyps;
  int rank = 0;
  long long mobius = 0;
};

struct Lattice {
  std::vector<Flat> flats;  // ascending rank; flats[0] is the ambient space
  std::unordered_map<Bits128, int, Bits128Hash> index;
  int top_rank = 0;
  const Flat* find(const Bits128& hyps) const {
    auto it = index.find(hyps);
    return it == index.end() ? nullptr : &flats[static_cast<std::size_t>(it->second)];
  }
};

// All hyperplanes whose normals lie in the span of the given subset's
// normals (the closure operator of the underlying matroid).
Bits128 flat_closure(const Arrangement& a, const Bits128& hyps);
int flat_rank(const Arrangement& a, const Bits128& hyps);

// Level-by-level construction of the full intersection lattice with Mobius
// values.  Throws BudgetExceeded when more than budget.max_flats flats
// appear.
Lattice intersection_lattice(const Arrangement& a, const Budget& budget = {});

// Characteristic polynomial chi(t) = sum_X mu(X) t^(dim - rank X).
Poly characteristic_poly(const Arrangement& a, const Lattice& lat);
Poly characteristic_poly(const Arrangement& a, const Budget& budget = {});
// Zaslavsky: number of chambers = (-1)^dim chi(-1).
long long region_count(const Arrangement& a, const Budget& budget = {});

// Modularity of a flat (given as closure-closed hyperplane set) in the
// lattice: X is modular iff rank X + rank Y = rank(X v Y) + rank(X ^ Y) for
// every flat Y.
bool is_modular(const Arrangement& a, const Lattice& lat, const Bits128& flat);
// Fast test for corank-1 flats, no lattice needed: X of rank r(A)-1 is
// modular iff every pair of hyperplanes outside X closes a dependent triple
// with some hyperplane of X.
bool is_modular_coatom(const Arrangement& a, const Bits128& flat);

// Decomposition into irreducible factors of the underlying matroid, plus
// the dimension count of the empty (coordinate) factor.
struct ProductDecomposition {
  std::vector<Arrangement> factors;       // each non-empty, ambient dim kept
  std::vector<Bits128> factor_hyps;       // hyperplane sets behind factors
  int empty_dims = 0;                     // dim - rank
  // Total irreducible pieces: factors plus one per empty dimension.
  int pieces() const { return static_cast<int>(factors.size()) + empty_dims; }
};
ProductDecomposition decompose_product(const Arrangement& a);

}  // namespace idealarr
