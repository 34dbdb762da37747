#include "idealarr/arrangement.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace idealarr {

Arrangement Arrangement::from_normals(int dim, const Mat& raw) {
  Arrangement a;
  a.dim_ = dim;
  for (const Vec& v : raw) {
    if (static_cast<int>(v.size()) != dim)
      throw std::invalid_argument("normal has wrong dimension");
    Vec p = primitive(v);
    if (vec_gcd(p) == 0) throw std::invalid_argument("zero normal");
    bool dup = false;
    for (const Vec& w : a.normals_)
      if (w == p) { dup = true; break; }
    if (!dup) {
      a.normals_.push_back(std::move(p));
      a.labels_.push_back(-1);
    }
  }
  if (a.num() > 128) throw std::invalid_argument("too many hyperplanes");
  a.rank_ = rank_of(a.normals_);
  return a;
}

Arrangement Arrangement::from_roots(const RootSystem& rs, const Bits128& roots) {
  Mat raw;
  std::vector<int> labels;
  roots.for_each([&](int i) {
    raw.push_back(rs.roots[i]);
    labels.push_back(i);
  });
  Arrangement a = from_normals(rs.ambient_dim, raw);
  // Positive roots are pairwise non-parallel, so nothing was deduplicated
  // and labels align one-to-one.
  if (a.num() != static_cast<int>(labels.size()))
    throw std::logic_error("parallel roots in root selection");
  a.labels_ = std::move(labels);
  return a;
}

Arrangement Arrangement::subarrangement(const Bits128& hyps) const {
  Arrangement a;
  a.dim_ = dim_;
  hyps.for_each([&](int i) {
    if (i >= num()) throw std::invalid_argument("hyperplane index out of range");
    a.normals_.push_back(normals_[static_cast<std::size_t>(i)]);
    a.labels_.push_back(labels_[static_cast<std::size_t>(i)]);
  });
  a.rank_ = rank_of(a.normals_);
  return a;
}

Arrangement Arrangement::deletion(int h) const {
  Bits128 keep = hyperplane_mask();
  keep.reset(h);
  return subarrangement(keep);
}

Arrangement Arrangement::restriction(int h) const {
  if (h < 0 || h >= num()) throw std::invalid_argument("bad hyperplane index");
  Mat base = kernel_basis({normals_[static_cast<std::size_t>(h)]}, dim_);
  Mat raw;
  for (int i = 0; i < num(); ++i) {
    if (i == h) continue;
    Vec img(base.size());
    for (std::size_t j = 0; j < base.size(); ++j) {
      __int128 d = dot(normals_[static_cast<std::size_t>(i)], base[j]);
      img[j] = static_cast<Int>(d);
    }
    if (vec_gcd(img) == 0)
      throw std::logic_error("hyperplane collapsed under restriction");
    raw.push_back(std::move(img));
  }
  return from_normals(dim_ - 1, raw);
}

std::string Arrangement::canonical_key() const {
  if (normals_.empty()) return "0:";
  Mat basis = hnf_rows(normals_);
  Mat expressed;
  for (const Vec& n : normals_) {
    auto c = express_in_basis(basis, n);
    if (!c) throw std::logic_error("normal not in its own lattice");
    expressed.push_back(primitive(*c));
  }
  std::sort(expressed.begin(), expressed.end());
  std::ostringstream os;
  os << basis.size() << ":";
  for (const Vec& v : expressed) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) os << ",";
      os << v[i];
    }
    os << ";";
  }
  return os.str();
}

std::string Arrangement::dump() const {
  std::ostringstream os;
  os << "dim=" << dim_ << " n=" << num() << "\n";
  for (const Vec& v : normals_) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) os << ",";
      os << v[i];
    }
    os << "\n";
  }
  return os.str();
}

Bits128 flat_closure(const Arrangement& a, const Bits128& hyps) {
  Mat sel;
  hyps.for_each([&](int i) { sel.push_back(a.normal(i)); });
  Bits128 out;
  for (int i = 0; i < a.num(); ++i) {
    if (hyps.test(i)) {
      out.set(i);
      continue;
    }
    if (in_span(sel, a.normal(i))) out.set(i);
  }
  return out;
}

int flat_rank(const Arrangement& a, const Bits128& hyps) {
  Mat sel;
  hyps.for_each([&](int i) { sel.push_back(a.normal(i)); });
  return rank_of(sel);
}

Lattice intersection_lattice(const Arrangement& a, const Budget& budget) {
  Lattice lat;
  Flat bottom;
  bottom.hyps = Bits128{};
  bottom.rank = 0;
  bottom.mobius = 1;
  lat.flats.push_back(bottom);
  lat.index.emplace(bottom.hyps, 0);

  std::vector<int> level{0};
  int r = 0;
  while (!level.empty()) {
    std::vector<int> next;
    for (int fi : level) {
      Bits128 base = lat.flats[static_cast<std::size_t>(fi)].hyps;
      for (int h = 0; h < a.num(); ++h) {
        if (base.test(h)) continue;
        Bits128 grown = base;
        grown.set(h);
        Bits128 closed = flat_closure(a, grown);
        if (lat.index.count(closed)) continue;
        Flat f;
        f.hyps = closed;
        f.rank = r + 1;
        lat.index.emplace(closed, static_cast<int>(lat.flats.size()));
        next.push_back(static_cast<int>(lat.flats.size()));
        lat.flats.push_back(f);
        if (static_cast<long long>(lat.flats.size()) > budget.max_flats)
          throw BudgetExceeded("intersection lattice flats", budget.max_flats,
                               static_cast<long long>(lat.flats.size()));
      }
    }
    level = std::move(next);
    ++r;
  }
  lat.top_rank = a.rank();

  // Mobius function, by ascending rank: mu(X) = -sum over proper subflats.
  for (std::size_t i = 1; i < lat.flats.size(); ++i) {
    long long acc = 0;
    for (std::size_t j = 0; j < lat.flats.size(); ++j) {
      if (lat.flats[j].rank >= lat.flats[i].rank) continue;
      if (lat.flats[j].hyps.is_subset_of(lat.flats[i].hyps))
        acc += lat.flats[j].mobius;
    }
    lat.flats[i].mobius = -acc;
  }
  return lat;
}

Poly characteristic_poly(const Arrangement& a, const Lattice& lat) {
  std::vector<long long> c(static_cast<std::size_t>(a.dim()) + 1, 0);
  for (const Flat& f : lat.flats)
    c[static_cast<std::size_t>(a.dim() - f.rank)] += f.mobius;
  return Poly(std::move(c));
}

Poly characteristic_poly(const Arrangement& a, const Budget& budget) {
  return characteristic_poly(a, intersection_lattice(a, budget));
}

long long region_count(const Arrangement& a, const Budget& budget) {
  Poly chi = characteristic_poly(a, budget);
  long long v = chi.eval(-1);
  return a.dim() % 2 == 0 ? v : -v;
}

bool is_modular(const Arrangement& a, const Lattice& lat, const Bits128& flat) {
  const Flat* x = lat.find(flat);
  if (!x) throw std::invalid_argument("not a flat of the lattice");
  for (const Flat& y : lat.flats) {
    Bits128 meet = flat & y.hyps;  // intersection of closed sets is closed
    const Flat* m = lat.find(meet);
    if (!m) throw std::logic_error("meet escaped the lattice");
    Bits128 join = flat | y.hyps;
    int rjoin = flat_rank(a, join);
    if (x->rank + y.rank != rjoin + m->rank) return false;
  }
  return true;
}

bool is_modular_coatom(const Arrangement& a, const Bits128& flat) {
  if (flat_rank(a, flat) != a.rank() - 1)
    throw std::invalid_argument("flat is not a coatom");
  std::vector<int> inside, outside;
  for (int i = 0; i < a.num(); ++i)
    (flat.test(i) ? inside : outside).push_back(i);
  // For each pair outside, some inside hyperplane must complete a rank-2
  // dependent triple.
  for (std::size_t p = 0; p < outside.size(); ++p) {
    const Vec& u = a.normal(outside[p]);
    for (std::size_t q = p + 1; q < outside.size(); ++q) {
      const Vec& v = a.normal(outside[q]);
      // Find an invertible 2x2 minor of (u; v).
      int cp = -1, cq = -1;
      Int det = 0;
      for (int i = 0; i < a.dim() && cp < 0; ++i)
        for (int j = i + 1; j < a.dim() && cp < 0; ++j) {
          Int d = u[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(j)] -
                  u[static_cast<std::size_t>(j)] * v[static_cast<std::size_t>(i)];
          if (d != 0) { cp = i; cq = j; det = d; }
        }
      if (cp < 0) throw std::logic_error("parallel normals in arrangement");
      bool found = false;
      for (int t : inside) {
        const Vec& w = a.normal(t);
        // Solve w = x u + y v on the (cp, cq) coordinates, verify the rest.
        Int xnum = w[static_cast<std::size_t>(cp)] * v[static_cast<std::size_t>(cq)] -
                   w[static_cast<std::size_t>(cq)] * v[static_cast<std::size_t>(cp)];
        Int ynum = u[static_cast<std::size_t>(cp)] * w[static_cast<std::size_t>(cq)] -
                   u[static_cast<std::size_t>(cq)] * w[static_cast<std::size_t>(cp)];
        bool ok = true;
        for (int d = 0; d < a.dim() && ok; ++d) {
          __int128 lhs = static_cast<__int128>(det) * w[static_cast<std::size_t>(d)];
          __int128 rhs = static_cast<__int128>(xnum) * u[static_cast<std::size_t>(d)] +
                         static_cast<__int128>(ynum) * v[static_cast<std::size_t>(d)];
          if (lhs != rhs) ok = false;
        }
        if (ok) { found = true; break; }
      }
      if (!found) return false;
    }
  }
  return true;
}

ProductDecomposition decompose_product(const Arrangement& a) {
  ProductDecomposition out;
  out.empty_dims = a.dim() - a.rank();
  if (a.num() == 0) return out;
  std::vector<int> label = matroid_components(a.normals());
  int k = *std::max_element(label.begin(), label.end()) + 1;
  for (int c = 0; c < k; ++c) {
    Bits128 hyps;
    for (int i = 0; i < a.num(); ++i)
      if (label[static_cast<std::size_t>(i)] == c) hyps.set(i);
    out.factor_hyps.push_back(hyps);
    out.factors.push_back(a.subarrangement(hyps));
  }
  return out;
}

}  // namespace idealarr
