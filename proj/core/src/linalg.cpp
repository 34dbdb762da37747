#include "idealarr/linalg.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <stdexcept>

namespace idealarr {

namespace {

using I128 = __int128;

I128 mulchk(I128 a, I128 b) {
  I128 r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("int128 mul");
  return r;
}

I128 subchk(I128 a, I128 b) {
  I128 r;
  if (__builtin_sub_overflow(a, b, &r)) throw std::overflow_error("int128 sub");
  return r;
}

I128 addchk(I128 a, I128 b) {
  I128 r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("int128 add");
  return r;
}

Int narrow(I128 v) {
  if (v > static_cast<I128>(9'000'000'000'000'000'000ll) ||
      v < -static_cast<I128>(9'000'000'000'000'000'000ll))
    throw std::overflow_error("int64 narrow");
  return static_cast<Int>(v);
}

}  // namespace

__int128 dot(const Vec& a, const Vec& b) {
  I128 s = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    s = addchk(s, mulchk(a[i], b[i]));
  return s;
}

int rank_of(const Mat& m) {
  if (m.empty()) return 0;
  const std::size_t rows = m.size(), cols = m[0].size();
  std::vector<std::vector<I128>> a(rows, std::vector<I128>(cols));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) a[i][j] = m[i][j];

  I128 prev = 1;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && a[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(a[piv], a[r]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      for (std::size_t j = c + 1; j < cols; ++j)
        a[i][j] = subchk(mulchk(a[i][j], a[r][c]), mulchk(a[i][c], a[r][j])) / prev;
      a[i][c] = 0;
    }
    prev = a[r][c];
    ++r;
  }
  return static_cast<int>(r);
}

Int vec_gcd(const Vec& v) {
  Int g = 0;
  for (Int x : v) g = std::gcd(g, std::llabs(x));
  return g;
}

Vec primitive(Vec v) {
  Int g = vec_gcd(v);
  if (g == 0) return v;
  for (Int& x : v) x /= g;
  for (Int x : v) {
    if (x > 0) break;
    if (x < 0) {
      for (Int& y : v) y = -y;
      break;
    }
  }
  return v;
}

Mat kernel_basis(const Mat& rows, int ncols) {
  // Column-reduction: maintain candidate columns (initially I_ncols) and for
  // each functional gcd-eliminate its values across the free columns; the
  // column carrying the final nonzero becomes a pivot and is discarded.
  Mat cand(static_cast<std::size_t>(ncols));
  for (int j = 0; j < ncols; ++j) {
    cand[static_cast<std::size_t>(j)].assign(static_cast<std::size_t>(ncols), 0);
    cand[static_cast<std::size_t>(j)][static_cast<std::size_t>(j)] = 1;
  }
  for (const Vec& a : rows) {
    std::vector<I128> val(cand.size());
    for (std::size_t j = 0; j < cand.size(); ++j) val[j] = dot(a, cand[j]);
    for (;;) {
      std::size_t nz = cand.size(), cnt = 0;
      // Pick the nonzero value of least magnitude as the eliminator.
      for (std::size_t j = 0; j < cand.size(); ++j)
        if (val[j] != 0) {
          ++cnt;
          if (nz == cand.size() ||
              (val[j] < 0 ? -val[j] : val[j]) < (val[nz] < 0 ? -val[nz] : val[nz]))
            nz = j;
        }
      if (cnt <= 1) {
        if (cnt == 1) {
          cand.erase(cand.begin() + static_cast<std::ptrdiff_t>(nz));
        }
        break;
      }
      for (std::size_t j = 0; j < cand.size(); ++j) {
        if (j == nz || val[j] == 0) continue;
        I128 q = val[j] / val[nz];
        if (q != 0) {
          for (std::size_t k = 0; k < cand[j].size(); ++k)
            cand[j][k] = narrow(subchk(cand[j][k], mulchk(q, cand[nz][k])));
          val[j] = subchk(val[j], mulchk(q, val[nz]));
        }
      }
    }
  }
  return cand;
}

Mat hnf_rows(Mat rows) {
  if (rows.empty()) return rows;
  const std::size_t cols = rows[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
    // gcd-eliminate column c among rows >= r.
    for (;;) {
      std::size_t best = rows.size();
      std::size_t cnt = 0;
      for (std::size_t i = r; i < rows.size(); ++i)
        if (rows[i][c] != 0) {
          ++cnt;
          if (best == rows.size() || std::llabs(rows[i][c]) < std::llabs(rows[best][c]))
            best = i;
        }
      if (cnt == 0) break;
      std::swap(rows[r], rows[best]);
      bool done = true;
      for (std::size_t i = r + 1; i < rows.size(); ++i) {
        if (rows[i][c] == 0) continue;
        Int q = rows[i][c] / rows[r][c];
        for (std::size_t k = 0; k < cols; ++k)
          rows[i][k] = narrow(subchk(rows[i][k], mulchk(q, rows[r][k])));
        if (rows[i][c] != 0) done = false;
      }
      if (done) {
        if (rows[r][c] < 0)
          for (Int& x : rows[r]) x = -x;
        // Reduce entries above the pivot into [0, pivot).
        for (std::size_t i = 0; i < r; ++i) {
          Int p = rows[r][c];
          Int q = rows[i][c] / p;
          if (rows[i][c] - q * p < 0) --q;  // floor division
          if (q != 0)
            for (std::size_t k = 0; k < cols; ++k)
              rows[i][k] = narrow(subchk(rows[i][k], mulchk(q, rows[r][k])));
        }
        ++r;
        break;
      }
    }
  }
  rows.resize(r);
  return rows;
}

std::optional<Vec> express_in_basis(const Mat& hnf, const Vec& v) {
  Vec w = v;
  Vec coef;
  coef.reserve(hnf.size());
  for (const Vec& row : hnf) {
    std::size_t p = 0;
    while (p < row.size() && row[p] == 0) ++p;
    if (p == row.size()) return std::nullopt;  // malformed basis row
    if (w[p] % row[p] != 0) return std::nullopt;
    Int q = w[p] / row[p];
    for (std::size_t k = 0; k < w.size(); ++k)
      w[k] = narrow(subchk(w[k], mulchk(q, row[k])));
    coef.push_back(q);
  }
  for (Int x : w)
    if (x != 0) return std::nullopt;
  return coef;
}

bool in_span(const Mat& rows, const Vec& v) {
  int r0 = rank_of(rows);
  Mat ext = rows;
  ext.push_back(v);
  return rank_of(ext) == r0;
}

std::vector<int> matroid_components(const Mat& vectors) {
  const std::size_t n = vectors.size();
  std::vector<int> label(n, -1);
  if (n == 0) return label;
  // Greedy basis.
  std::vector<std::size_t> basis;
  Mat bmat;
  for (std::size_t i = 0; i < n; ++i) {
    if (!in_span(bmat, vectors[i])) {
      basis.push_back(i);
      bmat.push_back(vectors[i]);
    }
  }
  std::vector<std::size_t> parent(n);
  for (std::size_t i = 0; i < n; ++i) parent[i] = i;
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto unite = [&](std::size_t a, std::size_t b) { parent[find(a)] = find(b); };

  std::vector<bool> in_basis(n, false);
  for (std::size_t b : basis) in_basis[b] = true;
  for (std::size_t i = 0; i < n; ++i) {
    if (in_basis[i]) continue;
    // Fundamental circuit of i w.r.t. the basis: b participates exactly when
    // i escapes the span of basis \ {b}.
    for (std::size_t bi = 0; bi < basis.size(); ++bi) {
      Mat reduced;
      for (std::size_t bj = 0; bj < basis.size(); ++bj)
        if (bj != bi) reduced.push_back(vectors[basis[bj]]);
      if (!in_span(reduced, vectors[i])) unite(i, basis[bi]);
    }
  }
  int next = 0;
  std::vector<int> root_label(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t r = find(i);
    if (root_label[r] == -1) root_label[r] = next++;
    label[i] = root_label[r];
  }
  return label;
}

int matroid_component_count(const Mat& vectors) {
  if (vectors.empty()) return 0;
  std::vector<int> label = matroid_components(vectors);
  return *std::max_element(label.begin(), label.end()) + 1;
}


}  // namespace idealarr
