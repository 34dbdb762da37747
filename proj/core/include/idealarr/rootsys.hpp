#pragma once

#include <functional>
#include <string>
#include <vector>

#include "idealarr/bits.hpp"
#include "idealarr/linalg.hpp"

namespace idealarr {

// An irreducible crystallographic root system in Bourbaki coordinates.
// Coordinates are scaled by 2 for types E and F so that every root has
// integer coordinates; all arithmetic stays exact.
//
// Positive roots are indexed 0..num_roots-1, sorted by (height, then
// lexicographic order of the coefficient vector).  The coefficient vector
// of a root expresses it in the simple-root basis; its entries are
// non-negative integers and their sum is the height.
class RootSystem {
 public:
  // Returns a cached immutable instance.  Valid inputs: A1..A8, B2..B8,
  // C2..C8, D3..D8, E6..E8, F4, G2.  Throws std::invalid_argument otherwise.
  static const RootSystem& get(char type, int rank);

  char type;                    // 'A'..'G'
  int rank;                     // number of simple roots
  int ambient_dim;              // dimension of the coordinate space
  int scale;                    // 1, or 2 for types E and F
  int num_roots;                // number of positive roots
  Mat simples;                  // rank x ambient_dim, scaled coordinates
  Mat roots;                    // num_roots x ambient_dim, scaled coordinates
  Mat coeffs;                   // num_roots x rank, simple-root coefficients
  std::vector<int> heights;     // heights[i] = sum of coeffs[i]
  std::vector<int> simple_index;  // simple_index[s] = root index of alpha_s
  std::vector<Bits128> upmask;    // upmask[i] = { j : root_j >= root_i }
  std::vector<Bits128> downmask;  // downmask[i] = { j : root_j <= root_i }
  Bits128 all_mask;               // all positive roots
  Bits128 simple_mask;            // the rank simple roots

  // --- lookups -----------------------------------------------------------
  int index_of_coeff(const Vec& c) const;    // -1 if not a positive root
  int height(int i) const { return heights[i]; }
  int highest_root() const { return num_roots - 1; }
  // Index of root_i + root_j if that is a positive root, else -1.
  int root_sum(int i, int j) const { return sum_table_[i * num_roots + j]; }

  // --- invariants --------------------------------------------------------
  std::vector<int> weyl_exponents() const;   // ascending
  long long weyl_order() const;              // product of (e_i + 1)
  int coxeter_number() const;                // height of highest root + 1

  // --- formatting --------------------------------------------------------
  // Plain digit string of the coefficient vector, e.g. "0121".
  std::string coeff_string(int i) const;
  // Display form: for type E the digits are printed in the order
  // c1 c3 c4 ... cn with c2 parenthesised last, e.g. "122321(2)";
  // other types use the plain digit string.
  std::string display_string(int i) const;
  // Coordinate form, e.g. "e1-e2" for unscaled classical roots, otherwise
  // the raw scaled coordinate tuple "(1,-1,0,0)".
  std::string ambient_string(int i) const;
  // Parses either display form back to a root index; -1 if unknown.
  int index_of_string(const std::string& s) const;
  // One line per root: "<coeff string> | <scaled coords> | ht=<h>".
  std::string dump() const;

  // --- parabolic subsystems ----------------------------------------------
  // Roots supported on the given set of simple roots (0-based node indices).
  Bits128 parabolic_mask(const std::vector<int>& nodes) const;
  // Roots whose coefficient at node d vanishes (maximal standard parabolic).
  Bits128 parabolic_drop(int d) const;
  // Dynkin classification label of the parabolic subsystem on `nodes`,
  // e.g. "A2", "D5", "A1+A2".  In E6 the two D5 subsystems obtained by
  // dropping an end node are distinguished as "D5" (node 1 dropped) and
  // "D5'" (node 6 dropped).
  std::string subsystem_label(const std::vector<int>& nodes) const;
  std::string drop_label(int d) const;  // label of parabolic_drop(d)
  // Exponents of the (possibly reducible) parabolic subsystem:
  // dual partition of the height multiset of its positive roots.
  std::vector<int> parabolic_exponents(const Bits128& mask) const;
  long long parabolic_order(const Bits128& mask) const;

  // --- reflections and the Weyl group -------------------------------------
  // Image of positive root i under the reflection in simple root s:
  // the root index, or -1 if the image is negative (only for i == alpha_s).
  int simple_reflect(int i, int s) const { return reflect_[s][i]; }
  // Cartan pairing <root_i, alpha_s^v> (an integer).
  int cartan_pair(int i, int s) const { return pair_[s][i]; }

  // Breadth-first traversal of the Weyl group in right weak order.
  // The visitor receives each element's inversion set N(w) exactly once,
  // together with its length |N(w)|.  Refuses to start if the group order
  // exceeds `cap` (throws BudgetExceeded).
  void traverse_weyl(const std::function<void(const Bits128&, int)>& visit,
                     long long cap = 1'000'000) const;
  // Same, restricted to the standard parabolic subgroup generated by the
  // given simple reflections.  Aborts with BudgetExceeded if more than
  // `cap` elements are discovered.
  void traverse_weyl_parabolic(
      const std::vector<int>& nodes,
      const std::function<void(const Bits128&, int)>& visit,
      long long cap = 1'000'000) const;

 private:
  RootSystem() = default;
  static RootSystem build(char type, int rank);
  std::vector<std::vector<int>> reflect_;  // [s][i]
  std::vector<std::vector<int>> pair_;     // [s][i]
  std::vector<int> sum_table_;             // flattened num_roots^2
};

// Given a multiset of positive heights, forms the partition whose parts are
// the per-height element counts and returns its dual partition, ascending.
// For the full set of positive roots this yields the Weyl exponents.
std::vector<int> dual_partition(const std::vector<int>& heights);

}  // namespace idealarr
