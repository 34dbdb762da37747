#include "idealarr/rootsys.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "idealarr/errors.hpp"

namespace idealarr {

namespace {

struct VecHash {
  size_t operator()(const Vec& v) const {
    size_t h = 1469598103934665603ull;
    for (Int x : v) {
      h ^= static_cast<size_t>(x) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
  }
};

Mat simple_roots_for(char type, int rank, int& ambient, int& scale) {
  scale = 1;
  Mat s;
  auto unit = [&](int i, Int val) {
    Vec v(ambient, 0);
    v[i] = val;
    return v;
  };
  switch (type) {
    case 'A': {
      if (rank < 1 || rank > 8) throw std::invalid_argument("type A needs rank 1..8");
      ambient = rank + 1;
      for (int i = 0; i < rank; ++i) {
        Vec v(ambient, 0);
        v[i] = 1;
        v[i + 1] = -1;
        s.push_back(v);
      }
      return s;
    }
    case 'B': {
      if (rank < 2 || rank > 8) throw std::invalid_argument("type B needs rank 2..8");
      ambient = rank;
      for (int i = 0; i + 1 < rank; ++i) {
        Vec v(ambient, 0);
        v[i] = 1;
        v[i + 1] = -1;
        s.push_back(v);
      }
      s.push_back(unit(rank - 1, 1));
      return s;
    }
    case 'C': {
      if (rank < 2 || rank > 8) throw std::invalid_argument("type C needs rank 2..8");
      ambient = rank;
      for (int i = 0; i + 1 < rank; ++i) {
        Vec v(ambient, 0);
        v[i] = 1;
        v[i + 1] = -1;
        s.push_back(v);
      }
      s.push_back(unit(rank - 1, 2));
      return s;
    }
    case 'D': {
      if (rank < 3 || rank > 8) throw std::invalid_argument("type D needs rank 3..8");
      ambient = rank;
      for (int i = 0; i + 1 < rank; ++i) {
        Vec v(ambient, 0);
        v[i] = 1;
        v[i + 1] = -1;
        s.push_back(v);
      }
      Vec v(ambient, 0);
      v[rank - 2] = 1;
      v[rank - 1] = 1;
      s.push_back(v);
      return s;
    }
    case 'E': {
      if (rank < 6 || rank > 8) throw std::invalid_argument("type E needs rank 6..8");
      ambient = 8;
      scale = 2;
      Mat e8 = {
          {1, -1, -1, -1, -1, -1, -1, 1},  // alpha_1 (x2)
          {2, 2, 0, 0, 0, 0, 0, 0},        // alpha_2
          {-2, 2, 0, 0, 0, 0, 0, 0},       // alpha_3
          {0, -2, 2, 0, 0, 0, 0, 0},       // alpha_4
          {0, 0, -2, 2, 0, 0, 0, 0},       // alpha_5
          {0, 0, 0, -2, 2, 0, 0, 0},       // alpha_6
          {0, 0, 0, 0, -2, 2, 0, 0},       // alpha_7
          {0, 0, 0, 0, 0, -2, 2, 0},       // alpha_8
      };
      s.assign(e8.begin(), e8.begin() + rank);
      return s;
    }
    case 'F': {
      if (rank != 4) throw std::invalid_argument("type F needs rank 4");
      ambient = 4;
      scale = 2;
      s = {
          {0, 2, -2, 0},   // alpha_1 (x2)
          {0, 0, 2, -2},   // alpha_2
          {0, 0, 0, 2},    // alpha_3
          {1, -1, -1, -1}, // alpha_4
      };
      return s;
    }
    case 'G': {
      if (rank != 2) throw std::invalid_argument("type G needs rank 2");
      ambient = 3;
      s = {
          {1, -1, 0},   // alpha_1
          {-2, 1, 1},   // alpha_2
      };
      return s;
    }
    default:
      throw std::invalid_argument(std::string("unknown type '") + type + "'");
  }
}

}  // namespace

RootSystem RootSystem::build(char type, int rank) {
  RootSystem rs;
  rs.type = type;
  rs.rank = rank;
  rs.simples = simple_roots_for(type, rank, rs.ambient_dim, rs.scale);

  const int n = rank;
  std::vector<__int128> norm2(n);
  for (int i = 0; i < n; ++i) norm2[i] = dot(rs.simples[i], rs.simples[i]);

  auto ambient_of = [&](const Vec& c) {
    Vec a(rs.ambient_dim, 0);
    for (int i = 0; i < n; ++i)
      for (int d = 0; d < rs.ambient_dim; ++d) a[d] += c[i] * rs.simples[i][d];
    return a;
  };
  // <beta, alpha_i^v> = 2 (beta, alpha_i) / (alpha_i, alpha_i); always exact.
  auto cartan = [&](const Vec& amb, int i) {
    __int128 num = 2 * dot(amb, rs.simples[i]);
    return static_cast<int>(num / norm2[i]);
  };

  // Generate positive roots level by level via root strings.
  std::unordered_set<Vec, VecHash> seen;
  std::vector<Vec> current;  // coefficient vectors at the current height
  std::vector<std::pair<Vec, int>> all;  // (coeff, height)
  for (int i = 0; i < n; ++i) {
    Vec c(n, 0);
    c[i] = 1;
    current.push_back(c);
    seen.insert(c);
    all.emplace_back(c, 1);
  }
  int h = 1;
  while (!current.empty()) {
    std::vector<Vec> next;
    for (const Vec& c : current) {
      Vec amb = ambient_of(c);
      for (int i = 0; i < n; ++i) {
        Vec cand = c;
        cand[i] += 1;
        if (seen.count(cand)) continue;
        // p = largest k with c - k*e_i still a root (known: lower height).
        int p = 0;
        Vec down = c;
        while (down[i] > 0) {
          down[i] -= 1;
          if (!seen.count(down)) break;
          ++p;
        }
        int q = p - cartan(amb, i);
        if (q >= 1) {
          seen.insert(cand);
          next.push_back(cand);
          all.emplace_back(cand, h + 1);
        }
      }
    }
    current = std::move(next);
    ++h;
  }

  std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second < b.second;
    return a.first < b.first;
  });

  rs.num_roots = static_cast<int>(all.size());
  if (rs.num_roots > 128)
    throw std::invalid_argument("root system too large for 128-bit sets");
  rs.coeffs.reserve(all.size());
  rs.roots.reserve(all.size());
  rs.heights.reserve(all.size());
  std::unordered_map<Vec, int, VecHash> index;
  for (int i = 0; i < rs.num_roots; ++i) {
    rs.coeffs.push_back(all[i].first);
    rs.roots.push_back(ambient_of(all[i].first));
    rs.heights.push_back(all[i].second);
    index[all[i].first] = i;
  }
  rs.simple_index.resize(n);
  for (int s = 0; s < n; ++s) {
    Vec c(n, 0);
    c[s] = 1;
    rs.simple_index[s] = index.at(c);
  }

  rs.all_mask = Bits128::first_n(rs.num_roots);
  for (int s = 0; s < n; ++s) rs.simple_mask.set(rs.simple_index[s]);

  // Cover relations -> up/down closure masks.
  rs.upmask.assign(rs.num_roots, Bits128{});
  rs.downmask.assign(rs.num_roots, Bits128{});
  std::vector<std::vector<int>> covers_up(rs.num_roots);
  for (int i = 0; i < rs.num_roots; ++i) {
    for (int s = 0; s < n; ++s) {
      Vec c = rs.coeffs[i];
      c[s] += 1;
      auto it = index.find(c);
      if (it != index.end()) covers_up[i].push_back(it->second);
    }
  }
  for (int i = rs.num_roots - 1; i >= 0; --i) {
    rs.upmask[i].set(i);
    for (int j : covers_up[i]) rs.upmask[i] |= rs.upmask[j];
  }
  for (int i = 0; i < rs.num_roots; ++i) {
    rs.upmask[i].for_each([&](int j) { rs.downmask[j].set(i); });
  }

  // Cartan pairings and simple-reflection permutations.
  rs.pair_.assign(n, std::vector<int>(rs.num_roots, 0));
  rs.reflect_.assign(n, std::vector<int>(rs.num_roots, -1));
  for (int s = 0; s < n; ++s) {
    for (int i = 0; i < rs.num_roots; ++i) {
      int cp = cartan(rs.roots[i], s);
      rs.pair_[s][i] = cp;
      Vec c = rs.coeffs[i];
      c[s] -= cp;
      if (c[s] < 0 && i != rs.simple_index[s])
        throw std::logic_error("reflection produced invalid coefficient");
      if (i == rs.simple_index[s]) {
        rs.reflect_[s][i] = -1;  // image is the negative root
      } else {
        rs.reflect_[s][i] = index.at(c);
      }
    }
  }

  // Pairwise sums.
  rs.sum_table_.assign(static_cast<size_t>(rs.num_roots) * rs.num_roots, -1);
  for (int i = 0; i < rs.num_roots; ++i) {
    for (int j = 0; j < rs.num_roots; ++j) {
      Vec c(n);
      for (int k = 0; k < n; ++k) c[k] = rs.coeffs[i][k] + rs.coeffs[j][k];
      auto it = index.find(c);
      if (it != index.end())
        rs.sum_table_[static_cast<size_t>(i) * rs.num_roots + j] = it->second;
    }
  }
  return rs;
}

const RootSystem& RootSystem::get(char type, int rank) {
  static std::mutex mu;
  static std::map<std::pair<char, int>, std::unique_ptr<RootSystem>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(type, rank);
  auto it = cache.find(key);
  if (it == cache.end()) {
    auto rs = std::make_unique<RootSystem>(build(type, rank));
    it = cache.emplace(key, std::move(rs)).first;
  }
  return *it->second;
}

int RootSystem::index_of_coeff(const Vec& c) const {
  if (static_cast<int>(c.size()) != rank) return -1;
  for (int i = 0; i < num_roots; ++i)
    if (coeffs[i] == c) return i;
  return -1;
}

std::vector<int> dual_partition(const std::vector<int>& heights) {
  if (heights.empty()) return {};
  int maxh = *std::max_element(heights.begin(), heights.end());
  std::vector<int> level(maxh + 1, 0);  // level[t] = # elements of height t
  int maxcount = 0;
  for (int h : heights) {
    level[h] += 1;
    maxcount = std::max(maxcount, level[h]);
  }
  // Dual of the partition (level[1], level[2], ...): part k counts the
  // levels holding at least k elements.  Returned ascending.
  std::vector<int> out;
  for (int k = maxcount; k >= 1; --k) {
    int parts = 0;
    for (int t = 1; t <= maxh; ++t)
      if (level[t] >= k) ++parts;
    out.push_back(parts);
  }
  return out;
}

std::vector<int> RootSystem::weyl_exponents() const {
  return dual_partition(heights);
}

long long RootSystem::weyl_order() const {
  long long o = 1;
  for (int e : weyl_exponents()) o *= (e + 1);
  return o;
}

int RootSystem::coxeter_number() const { return heights[num_roots - 1] + 1; }

std::string RootSystem::coeff_string(int i) const {
  std::string s;
  for (int k = 0; k < rank; ++k) s += static_cast<char>('0' + coeffs[i][k]);
  return s;
}

std::string RootSystem::display_string(int i) const {
  if (type != 'E') return coeff_string(i);
  std::string s;
  s += static_cast<char>('0' + coeffs[i][0]);
  for (int k = 2; k < rank; ++k) s += static_cast<char>('0' + coeffs[i][k]);
  s += '(';
  s += static_cast<char>('0' + coeffs[i][1]);
  s += ')';
  return s;
}

std::string RootSystem::ambient_string(int i) const {
  const Vec& v = roots[i];
  if (scale == 1) {
    // Try the sparse +-e_k form used for classical types.
    std::string out;
    bool ok = true;
    for (int d = 0; d < ambient_dim && ok; ++d) {
      Int c = v[d];
      if (c == 0) continue;
      if (c != 1 && c != -1 && c != 2) { ok = false; break; }
      std::string term = "e" + std::to_string(d + 1);
      if (c == 2) term = "2e" + std::to_string(d + 1);
      if (out.empty()) {
        out = (c < 0 ? "-" : "") + term;
      } else {
        out += (c < 0 ? "-" : "+") + term;
      }
    }
    if (ok && !out.empty()) return out;
  }
  std::string out = "(";
  for (int d = 0; d < ambient_dim; ++d) {
    if (d) out += ",";
    out += std::to_string(v[d]);
  }
  out += ")";
  return out;
}

int RootSystem::index_of_string(const std::string& s) const {
  for (int i = 0; i < num_roots; ++i)
    if (coeff_string(i) == s || display_string(i) == s) return i;
  return -1;
}

std::string RootSystem::dump() const {
  std::ostringstream os;
  for (int i = 0; i < num_roots; ++i) {
    os << coeff_string(i) << " | ";
    for (int d = 0; d < ambient_dim; ++d) {
      if (d) os << ",";
      os << roots[i][d];
    }
    os << " | ht=" << heights[i] << "\n";
  }
  return os.str();
}

Bits128 RootSystem::parabolic_mask(const std::vector<int>& nodes) const {
  std::vector<bool> allowed(rank, false);
  for (int d : nodes) {
    if (d < 0 || d >= rank) throw std::invalid_argument("bad node index");
    allowed[d] = true;
  }
  Bits128 m;
  for (int i = 0; i < num_roots; ++i) {
    bool ok = true;
    for (int k = 0; k < rank && ok; ++k)
      if (coeffs[i][k] != 0 && !allowed[k]) ok = false;
    if (ok) m.set(i);
  }
  return m;
}

Bits128 RootSystem::parabolic_drop(int d) const {
  if (d < 0 || d >= rank) throw std::invalid_argument("bad node index");
  Bits128 m;
  for (int i = 0; i < num_roots; ++i)
    if (coeffs[i][d] == 0) m.set(i);
  return m;
}

std::string RootSystem::subsystem_label(const std::vector<int>& nodes) const {
  if (nodes.empty()) return "empty";
  // Special-case the two D5 subsystems of E6 related by the diagram flip.
  if (type == 'E' && rank == 6 && nodes.size() == 5) {
    std::vector<int> sorted = nodes;
    std::sort(sorted.begin(), sorted.end());
    if (sorted == std::vector<int>{1, 2, 3, 4, 5}) return "D5";
    if (sorted == std::vector<int>{0, 1, 2, 3, 4}) return "D5'";
  }
  // Bond multiplicities between selected nodes.
  int m = static_cast<int>(nodes.size());
  auto bond = [&](int a, int b) {
    __int128 ab = dot(simples[a], simples[b]);
    if (ab == 0) return 0;
    __int128 p = 2 * ab / dot(simples[b], simples[b]);
    __int128 q = 2 * ab / dot(simples[a], simples[a]);
    return static_cast<int>(p * q);  // 1, 2 or 3
  };
  std::vector<std::vector<int>> adj(m);
  std::vector<std::vector<int>> mult(m, std::vector<int>(m, 0));
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      int b = bond(nodes[i], nodes[j]);
      if (b > 0) {
        adj[i].push_back(j);
        adj[j].push_back(i);
        mult[i][j] = mult[j][i] = b;
      }
    }
  // Connected components.
  std::vector<int> comp(m, -1);
  int ncomp = 0;
  for (int i = 0; i < m; ++i) {
    if (comp[i] != -1) continue;
    std::vector<int> stack{i};
    comp[i] = ncomp;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int w : adj[v])
        if (comp[w] == -1) {
          comp[w] = ncomp;
          stack.push_back(w);
        }
    }
    ++ncomp;
  }
  std::vector<std::string> labels;
  for (int c = 0; c < ncomp; ++c) {
    std::vector<int> verts;
    for (int i = 0; i < m; ++i)
      if (comp[i] == c) verts.push_back(i);
    int size = static_cast<int>(verts.size());
    int maxbond = 1;
    int branch = -1;
    for (int v : verts) {
      if (static_cast<int>(adj[v].size()) >= 3) branch = v;
      for (int w : adj[v]) maxbond = std::max(maxbond, mult[v][w]);
    }
    std::string label;
    if (maxbond == 3) {
      label = "G2";
    } else if (maxbond == 2) {
      if (size == 2) {
        label = "B2";
      } else {
        // B: exactly one short simple root; C: exactly one long one.
        int nshort = 0;
        __int128 maxnorm = 0;
        for (int v : verts)
          maxnorm = std::max(maxnorm, dot(simples[nodes[v]], simples[nodes[v]]));
        for (int v : verts)
          if (dot(simples[nodes[v]], simples[nodes[v]]) < maxnorm) ++nshort;
        label = (nshort == 1 ? "B" : "C") + std::to_string(size);
      }
    } else if (branch == -1) {
      label = "A" + std::to_string(size);
    } else {
      // Branch lengths from the trivalent node, ascending.
      std::vector<int> lens;
      for (int start : adj[branch]) {
        int len = 1, prev = branch, cur = start;
        while (true) {
          int nxt = -1;
          for (int w : adj[cur])
            if (w != prev) nxt = w;
          if (nxt == -1) break;
          prev = cur;
          cur = nxt;
          ++len;
        }
        lens.push_back(len);
      }
      std::sort(lens.begin(), lens.end());
      if (lens.size() == 3 && lens[0] == 1 && lens[1] == 1)
        label = "D" + std::to_string(size);
      else if (lens == std::vector<int>{1, 2, 2})
        label = "E6";
      else if (lens == std::vector<int>{1, 2, 3})
        label = "E7";
      else if (lens == std::vector<int>{1, 2, 4})
        label = "E8";
      else
        label = "?" + std::to_string(size);
    }
    labels.push_back(label);
  }
  std::sort(labels.begin(), labels.end(), [](const std::string& a, const std::string& b) {
    return a != b ? a > b : false;  // descending: "D5" before "A1"
  });
  std::string out;
  for (size_t i = 0; i < labels.size(); ++i) {
    if (i) out += "+";
    out += labels[i];
  }
  return out;
}

std::string RootSystem::drop_label(int d) const {
  std::vector<int> nodes;
  for (int k = 0; k < rank; ++k)
    if (k != d) nodes.push_back(k);
  return subsystem_label(nodes);
}

std::vector<int> RootSystem::parabolic_exponents(const Bits128& mask) const {
  std::vector<int> hs;
  mask.for_each([&](int i) { hs.push_back(heights[i]); });
  return dual_partition(hs);
}

long long RootSystem::parabolic_order(const Bits128& mask) const {
  long long o = 1;
  for (int e : parabolic_exponents(mask)) o *= (e + 1);
  return o;
}

void RootSystem::traverse_weyl(
    const std::function<void(const Bits128&, int)>& visit, long long cap) const {
  long long order = weyl_order();
  if (order > cap)
    throw BudgetExceeded("Weyl group order", cap, order);
  std::vector<int> nodes(rank);
  for (int i = 0; i < rank; ++i) nodes[i] = i;
  traverse_weyl_parabolic(nodes, visit, cap);
}

void RootSystem::traverse_weyl_parabolic(
    const std::vector<int>& nodes,
    const std::function<void(const Bits128&, int)>& visit, long long cap) const {
  std::unordered_set<Bits128, Bits128Hash> seen;
  std::queue<std::pair<Bits128, int>> queue;
  Bits128 id;
  seen.insert(id);
  queue.emplace(id, 0);
  long long count = 0;
  while (!queue.empty()) {
    auto [inv, len] = queue.front();
    queue.pop();
    ++count;
    if (count > cap)
      throw BudgetExceeded("Weyl traversal elements", cap, count);
    visit(inv, len);
    for (int s : nodes) {
      int si = simple_index[s];
      if (inv.test(si)) continue;
      // N(w s) = s(N(w)) u {alpha_s}
      Bits128 next;
      bool valid = true;
      inv.for_each([&](int i) {
        int img = reflect_[s][i];
        if (img < 0) { valid = false; return; }
        next.set(img);
      });
      if (!valid) throw std::logic_error("inversion set hit a negative root");
      next.set(si);
      if (seen.insert(next).second) queue.emplace(next, len + 1);
    }
  }
}

}  // namespace idealarr
