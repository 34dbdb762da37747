#pragma once

#include <optional>
#include <vector>

namespace idealarr {

// Exact integer linear algebra on small dense matrices (dimensions <= ~16,
// entries small).  All computations are fraction-free; intermediate products
// are guarded against overflow and throw std::overflow_error if they would
// wrap, so results are either exact or an exception.

using Int = long long;
using Vec = std::vector<Int>;
using Mat = std::vector<Vec>;

// Dot product with 128-bit accumulation.
__int128 dot(const Vec& a, const Vec& b);

// Rank via Bareiss fraction-free elimination.
int rank_of(const Mat& m);

// gcd of all entries (non-negative; 0 for the zero vector).
Int vec_gcd(const Vec& v);

// Divide by the gcd and flip signs so the first nonzero entry is positive.
// The zero vector is returned unchanged.
Vec primitive(Vec v);

// Basis of the integer kernel {x : r . x = 0 for every row r}.  The result
// spans the kernel lattice saturatedly (it extends to a basis of Z^ncols).
Mat kernel_basis(const Mat& rows, int ncols);

// Canonical Hermite normal form basis of the lattice generated by the rows:
// echelon shape, positive pivots, entries above each pivot reduced into
// [0, pivot).  Unique for a given row lattice.
Mat hnf_rows(Mat rows);

// Integer coordinates of v in the (HNF, echelon) basis, or nullopt when v is
// not in the lattice spanned by the basis rows.
std::optional<Vec> express_in_basis(const Mat& hnf, const Vec& v);

// Rational span membership: v in span_Q(rows)?
bool in_span(const Mat& rows, const Vec& v);

// Connected components of the linear matroid on the given nonzero vectors
// (singleton coloops count as components).  Ground set must be loop-free.
// Returns a component id per vector, ids numbered 0..k-1 in first-occurrence
// order.
std::vector<int> matroid_components(const Mat& vectors);
int matroid_component_count(const Mat& vectors);

}  // namespace idealarr
