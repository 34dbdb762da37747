#include "idealarr/freecert.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"

namespace idealarr {

namespace {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Canonical coordinates
// ---------------------------------------------------------------------------

struct CanonForm {
  Mat expressed;           // per hyperplane: primitive coords in the HNF basis
  std::vector<int> order;  // canonical position -> hyperplane index
  int ess_dim = 0;
  std::string key;
};

CanonForm canon_form(const Arrangement& a) {
  CanonForm c;
  if (a.num() == 0) {
    c.key = "0:";
    return c;
  }
  Mat basis = hnf_rows(a.normals());
  c.ess_dim = static_cast<int>(basis.size());
  for (const Vec& n : a.normals()) {
    auto e = express_in_basis(basis, n);
    if (!e) throw std::logic_error("normal escaped its own lattice");
    c.expressed.push_back(primitive(*e));
  }
  c.order.resize(static_cast<std::size_t>(a.num()));
  std::iota(c.order.begin(), c.order.end(), 0);
  std::sort(c.order.begin(), c.order.end(), [&](int x, int y) {
    return c.expressed[static_cast<std::size_t>(x)] <
           c.expressed[static_cast<std::size_t>(y)];
  });
  std::ostringstream os;
  os << c.ess_dim << ":";
  for (int i : c.order) {
    const Vec& v = c.expressed[static_cast<std::size_t>(i)];
    for (std::size_t k = 0; k < v.size(); ++k) {
      if (k) os << ",";
      os << v[k];
    }
    os << ";";
  }
  c.key = os.str();
  return c;
}

// Exponent multisets, kept sorted ascending and padded with zeros.
std::vector<int> pad_exp(std::vector<int> ess, int len) {
  std::vector<int> out;
  if (static_cast<int>(ess.size()) > len)
    throw std::logic_error("exponent multiset longer than dimension");
  out.assign(static_cast<std::size_t>(len - static_cast<int>(ess.size())), 0);
  std::sort(ess.begin(), ess.end());
  out.insert(out.end(), ess.begin(), ess.end());
  return out;
}

std::vector<int> nonzeros(const std::vector<int>& v) {
  std::vector<int> out;
  for (int x : v)
    if (x != 0) out.push_back(x);
  std::sort(out.begin(), out.end());
  return out;
}

// after = before \ {b-1} u {b} for a single b >= 1?  Returns b or -1.
int addition_step(const std::vector<int>& before, const std::vector<int>& after) {
  if (before.size() != after.size()) return -1;
  std::map<int, int> delta;
  for (int x : before) delta[x] -= 1;
  for (int x : after) delta[x] += 1;
  int lost = -1, gained = -1;
  for (auto& [v, d] : delta) {
    if (d == 0) continue;
    if (d == -1 && lost == -1)
      lost = v;
    else if (d == 1 && gained == -1)
      gained = v;
    else
      return -1;
  }
  if (lost == -1 || gained == -1) return -1;
  if (gained != lost + 1 || gained < 1) return -1;
  return gained;
}

// multiset subtraction big \ small; nullopt if small is not contained.
std::optional<std::vector<int>> multiset_minus(const std::vector<int>& big,
                                               const std::vector<int>& small) {
  std::map<int, int> count;
  for (int x : big) count[x] += 1;
  for (int x : small) {
    if (--count[x] < 0) return std::nullopt;
  }
  std::vector<int> out;
  for (auto& [v, c] : count)
    for (int i = 0; i < c; ++i) out.push_back(v);
  return out;
}

// ---------------------------------------------------------------------------
// Inductive-freeness search with a process-wide memo
// ---------------------------------------------------------------------------

struct IFMemoEntry {
  Status status = Status::unknown;
  std::vector<int> ess_exp;  // ascending, no zeros
  // canonical position of the deleted hyperplane behind the certified step;
  // -1 = generic (rank <= 2), -2 = certified_no
  int chosen = -2;
};

std::mutex g_if_mutex;
std::unordered_map<std::string, IFMemoEntry> g_if_memo;

std::optional<IFMemoEntry> if_memo_get(const std::string& key) {
  std::lock_guard<std::mutex> lock(g_if_mutex);
  auto it = g_if_memo.find(key);
  if (it == g_if_memo.end()) return std::nullopt;
  return it->second;
}

void if_memo_put(const std::string& key, const IFMemoEntry& e) {
  std::lock_guard<std::mutex> lock(g_if_mutex);
  g_if_memo.emplace(key, e);
}

struct SearchCtx {
  const Budget* budget;
  long long nodes = 0;
  void tick(const char* what) {
    if (++nodes > budget->max_nodes)
      throw BudgetExceeded(what, budget->max_nodes, nodes);
  }
};

// Candidate deletion order: hyperplanes labeled by roots of larger height
// first (root indices ascend with height), unlabeled ones from the back.
std::vector<int> deletion_candidates(const Arrangement& a) {
  std::vector<int> idx(static_cast<std::size_t>(a.num()));
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int x, int y) {
    int lx = a.root_labels()[static_cast<std::size_t>(x)];
    int ly = a.root_labels()[static_cast<std::size_t>(y)];
    if (lx != ly) return lx > ly;
    return x > y;
  });
  return idx;
}

IFMemoEntry if_search(const Arrangement& a, SearchCtx& ctx) {
  CanonForm canon = canon_form(a);
  if (auto hit = if_memo_get(canon.key)) return *hit;
  ctx.tick("inductive-freeness search nodes");

  IFMemoEntry result;
  if (a.num() == 0) {
    result.status = Status::certified_yes;
    result.chosen = -1;
  } else if (a.rank() <= 2) {
    result.status = Status::certified_yes;
    result.chosen = -1;
    result.ess_exp = a.rank() == 1 ? std::vector<int>{1}
                                   : std::vector<int>{1, a.num() - 1};
  } else {
    result.status = Status::certified_no;
    for (int h : deletion_candidates(a)) {
      IFMemoEntry del = if_search(a.deletion(h), ctx);
      if (del.status != Status::certified_yes) continue;
      IFMemoEntry res = if_search(a.restriction(h), ctx);
      if (res.status != Status::certified_yes) continue;
      std::vector<int> ep = pad_exp(del.ess_exp, a.dim());
      std::vector<int> er = pad_exp(res.ess_exp, a.dim() - 1);
      auto rest = multiset_minus(ep, er);
      if (!rest || rest->size() != 1) continue;
      int b = (*rest)[0] + 1;
      result.status = Status::certified_yes;
      result.ess_exp = res.ess_exp;
      result.ess_exp.push_back(b);
      std::sort(result.ess_exp.begin(), result.ess_exp.end());
      // canonical position of h
      for (std::size_t p = 0; p < canon.order.size(); ++p)
        if (canon.order[p] == h) result.chosen = static_cast<int>(p);
      break;
    }
  }
  if_memo_put(canon.key, result);
  return result;
}

// Builds the addition order for an arrangement from the memoized decisions:
// unwind chosen deletions, then add the remaining rank<=2 part in index
// order.
std::vector<int> addition_order(const Arrangement& a, SearchCtx& ctx) {
  std::vector<int> removed;  // hyperplane indices of `a`, in deletion order
  Arrangement cur = a;
  std::vector<int> live(static_cast<std::size_t>(a.num()));
  std::iota(live.begin(), live.end(), 0);
  while (cur.num() > 0 && cur.rank() > 2) {
    CanonForm canon = canon_form(cur);
    IFMemoEntry e = if_search(cur, ctx);
    if (e.status != Status::certified_yes)
      throw std::logic_error("addition order requested for uncertified arrangement");
    if (e.chosen < 0) break;
    int h = canon.order[static_cast<std::size_t>(e.chosen)];
    removed.push_back(live[static_cast<std::size_t>(h)]);
    live.erase(live.begin() + h);
    cur = cur.deletion(h);
  }
  std::vector<int> order = live;  // remaining rank<=2 part, index order
  for (auto it = removed.rbegin(); it != removed.rend(); ++it)
    order.push_back(*it);
  return order;
}

// Ensures `pool` has an entry for the canonical key of `b` (and recursively
// for all restriction keys it references).  `forced_order`, when non-null,
// fixes the addition order for this arrangement only.
void ensure_entry(const Arrangement& b, std::map<std::string, IFEntry>& pool,
                  SearchCtx& ctx, const std::vector<int>* forced_order = nullptr) {
  CanonForm canon = canon_form(b);
  if (canon.key == "0:" || pool.count(canon.key)) return;
  IFMemoEntry memo = if_search(b, ctx);
  if (memo.status != Status::certified_yes)
    throw std::logic_error("cannot emit certificate for uncertified arrangement");

  std::vector<int> order =
      forced_order ? *forced_order : addition_order(b, ctx);
  if (static_cast<int>(order.size()) != b.num())
    throw std::logic_error("addition order has wrong length");

  IFEntry entry;
  Mat prefix_normals;
  std::vector<int> exp_before = pad_exp({}, canon.ess_dim);
  struct Todo { Arrangement arr; };
  std::vector<Arrangement> todo;
  for (std::size_t i = 0; i < order.size(); ++i) {
    int h = order[i];
    IFRow row;
    row.add = canon.expressed[static_cast<std::size_t>(h)];
    prefix_normals.push_back(row.add);
    Arrangement prefix = Arrangement::from_normals(canon.ess_dim, prefix_normals);
    if (prefix.num() != static_cast<int>(i) + 1)
      throw std::logic_error("duplicate hyperplane during emission");
    Arrangement restr = prefix.restriction(static_cast<int>(i));
    row.restriction_key = restr.canonical_key();
    IFMemoEntry rmemo = if_search(restr, ctx);
    if (rmemo.status != Status::certified_yes)
      throw std::logic_error("restriction not certified during emission");
    int bval = static_cast<int>(i) + 1 -
               std::accumulate(rmemo.ess_exp.begin(), rmemo.ess_exp.end(), 0);
    std::vector<int> after = rmemo.ess_exp;
    after.push_back(bval);
    row.exp_after = pad_exp(after, canon.ess_dim);
    if (addition_step(exp_before, row.exp_after) != bval)
      throw std::logic_error("exponent pattern violated during emission");
    exp_before = row.exp_after;
    entry.rows.push_back(row);
    todo.push_back(restr);
  }
  pool.emplace(canon.key, std::move(entry));
  for (const Arrangement& r : todo) ensure_entry(r, pool, ctx);
}

IFCertificate emit_if_certificate(const Arrangement& a, SearchCtx& ctx,
                                  const std::vector<int>* forced_order = nullptr) {
  IFCertificate cert;
  CanonForm canon = canon_form(a);
  cert.target_key = canon.key;
  IFMemoEntry memo = if_search(a, ctx);
  cert.exponents = pad_exp(memo.ess_exp, a.dim());
  ensure_entry(a, cert.pool, ctx, forced_order);
  return cert;
}

}  // namespace

std::vector<int> canonical_order(const Arrangement& a) {
  return canon_form(a).order;
}

IFVerdict inductively_free(const Arrangement& a, const Budget& budget) {
  IFVerdict v;
  SearchCtx ctx{&budget};
  try {
    IFMemoEntry e = if_search(a, ctx);
    v.nodes = ctx.nodes;
    if (e.status == Status::certified_yes) {
      v.status = Status::certified_yes;
      v.exponents = pad_exp(e.ess_exp, a.dim());
      v.certificate = emit_if_certificate(a, ctx);
      // Sanity: the certificate must replay.
      std::string why;
      if (!verify_if_certificate(a, *v.certificate, &why))
        throw std::logic_error("emitted certificate failed to verify: " + why);
    } else {
      v.status = Status::certified_no;
      v.note = "exhausted all deletion orders";
    }
  } catch (const BudgetExceeded& e) {
    v.status = Status::unknown;
    v.note = e.what();
    v.nodes = ctx.nodes;
  }
  return v;
}

bool verify_if_certificate(const Arrangement& a, const IFCertificate& cert,
                           std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  std::set<std::string> verified;

  std::function<bool(const Arrangement&)> check =
      [&](const Arrangement& arr) -> bool {
    CanonForm canon = canon_form(arr);
    if (arr.num() == 0) return true;
    if (verified.count(canon.key)) return true;
    auto it = cert.pool.find(canon.key);
    if (it == cert.pool.end()) return fail("missing table for key " + canon.key);
    const IFEntry& entry = it->second;
    if (static_cast<int>(entry.rows.size()) != arr.num())
      return fail("row count mismatch for key " + canon.key);
    // The added normals must be exactly the canonical normal multiset.
    Mat want;
    for (int i : canon.order) want.push_back(canon.expressed[static_cast<std::size_t>(i)]);
    Mat got;
    for (const IFRow& r : entry.rows) got.push_back(r.add);
    std::sort(got.begin(), got.end());
    if (got != want) return fail("table normals differ from arrangement for key " + canon.key);

    Mat prefix_normals;
    std::vector<int> exp_before = pad_exp({}, canon.ess_dim);
    for (std::size_t i = 0; i < entry.rows.size(); ++i) {
      const IFRow& row = entry.rows[i];
      if (static_cast<int>(row.add.size()) != canon.ess_dim)
        return fail("bad normal size in table " + canon.key);
      prefix_normals.push_back(row.add);
      Arrangement prefix;
      try {
        prefix = Arrangement::from_normals(canon.ess_dim, prefix_normals);
      } catch (const std::exception& e) {
        return fail(std::string("bad normal in table: ") + e.what());
      }
      if (prefix.num() != static_cast<int>(i) + 1)
        return fail("duplicate hyperplane in table " + canon.key);
      if (static_cast<int>(row.exp_after.size()) != canon.ess_dim)
        return fail("bad exponent length in table " + canon.key);
      std::vector<int> after = row.exp_after;
      std::sort(after.begin(), after.end());
      int b = addition_step(exp_before, after);
      if (b < 1) return fail("exponent pattern broken in table " + canon.key);
      Arrangement restr = prefix.restriction(static_cast<int>(i));
      CanonForm rc = canon_form(restr);
      if (rc.key != row.restriction_key)
        return fail("restriction key mismatch in table " + canon.key);
      // Restriction exponents from its own table.
      std::vector<int> ress;
      if (rc.key != "0:") {
        auto rit = cert.pool.find(rc.key);
        if (rit == cert.pool.end())
          return fail("missing restriction table " + rc.key);
        if (rit->second.rows.empty())
          return fail("empty restriction table " + rc.key);
        ress = nonzeros(rit->second.rows.back().exp_after);
      }
      if (static_cast<int>(ress.size()) > canon.ess_dim - 1)
        return fail("restriction exponents too long in table " + canon.key);
      auto want_res = multiset_minus(after, {b});
      std::vector<int> have = pad_exp(ress, canon.ess_dim - 1);
      std::vector<int> wantv = pad_exp(nonzeros(*want_res), canon.ess_dim - 1);
      if (have != wantv)
        return fail("restriction exponents mismatch in table " + canon.key);
      if (!check(restr)) return false;
      exp_before = after;
    }
    verified.insert(canon.key);
    return true;
  };

  CanonForm canon = canon_form(a);
  if (cert.target_key != canon.key)
    return fail("certificate targets a different arrangement");
  if (!check(a)) return false;
  // Final exponents.
  std::vector<int> ess;
  if (a.num() > 0) {
    const IFEntry& entry = cert.pool.at(canon.key);
    ess = nonzeros(entry.rows.back().exp_after);
  }
  if (pad_exp(ess, a.dim()) != cert.exponents)
    return fail("claimed exponents do not match the table");
  return true;
}

IFCertificate lift_by_modular_coatom(const Arrangement& a, const Bits128& flat,
                                     const IFCertificate& base,
                                     const Budget& budget) {
  if (flat_closure(a, flat) != flat)
    throw std::invalid_argument("flat is not closure-closed");
  if (flat_rank(a, flat) != a.rank() - 1)
    throw std::invalid_argument("flat is not a coatom");
  if (!is_modular_coatom(a, flat))
    throw std::invalid_argument("flat is not modular");
  Arrangement ax = a.subarrangement(flat);
  std::string why;
  if (!verify_if_certificate(ax, base, &why))
    throw std::invalid_argument("base certificate invalid: " + why);
  // Addition order: the localization first (its hyperplanes in index order),
  // then the complement in index order.
  std::vector<int> order;
  flat.for_each([&](int i) { order.push_back(i); });
  a.hyperplane_mask().minus(flat).for_each([&](int i) { order.push_back(i); });
  SearchCtx ctx{&budget};
  IFCertificate cert = emit_if_certificate(a, ctx, &order);
  if (!verify_if_certificate(a, cert, &why))
    throw std::logic_error("lifted certificate failed to verify: " + why);
  return cert;
}

// ---------------------------------------------------------------------------
// JSON serialization
// ---------------------------------------------------------------------------

std::string if_certificate_to_json(const IFCertificate& cert) {
  json pool = json::object();
  for (const auto& [key, entry] : cert.pool) {
    json rows = json::array();
    for (const IFRow& r : entry.rows)
      rows.push_back(json{{"add", r.add},
                          {"exp_after", r.exp_after},
                          {"restriction", r.restriction_key}});
    pool[key] = json{{"rows", rows}};
  }
  json j{{"kind", "inductive-freeness"},
         {"base", "empty"},
         {"target", cert.target_key},
         {"exponents", cert.exponents},
         {"pool", pool}};
  return j.dump(2);
}

IFCertificate if_certificate_from_json(const std::string& text) {
  json j = json::parse(text);
  if (j.at("kind").get<std::string>() != "inductive-freeness")
    throw std::invalid_argument("not an inductive-freeness certificate");
  IFCertificate cert;
  cert.target_key = j.at("target").get<std::string>();
  cert.exponents = j.at("exponents").get<std::vector<int>>();
  for (auto& [key, val] : j.at("pool").items()) {
    IFEntry entry;
    for (auto& r : val.at("rows")) {
      IFRow row;
      row.add = r.at("add").get<Vec>();
      row.exp_after = r.at("exp_after").get<std::vector<int>>();
      row.restriction_key = r.at("restriction").get<std::string>();
      entry.rows.push_back(std::move(row));
    }
    cert.pool.emplace(key, std::move(entry));
  }
  return cert;
}

// ---------------------------------------------------------------------------
// Supersolvability
// ---------------------------------------------------------------------------

namespace {

struct SSMemoEntry {
  Status status = Status::unknown;
  // chain in canonical positions (each flat a list of positions)
  std::vector<std::vector<int>> chain;
};

std::mutex g_ss_mutex;
std::unordered_map<std::string, SSMemoEntry> g_ss_memo;

std::optional<SSMemoEntry> ss_memo_get(const std::string& key) {
  std::lock_guard<std::mutex> lock(g_ss_mutex);
  auto it = g_ss_memo.find(key);
  return it == g_ss_memo.end() ? std::nullopt
                               : std::optional<SSMemoEntry>(it->second);
}

void ss_memo_put(const std::string& key, const SSMemoEntry& e) {
  std::lock_guard<std::mutex> lock(g_ss_mutex);
  g_ss_memo.emplace(key, e);
}

// chain given in concrete indices of `a`; convert to canonical positions.
std::vector<std::vector<int>> to_canonical_chain(
    const CanonForm& canon, const std::vector<std::vector<int>>& chain) {
  std::vector<int> pos(canon.order.size());
  for (std::size_t p = 0; p < canon.order.size(); ++p)
    pos[static_cast<std::size_t>(canon.order[p])] = static_cast<int>(p);
  std::vector<std::vector<int>> out;
  for (const auto& f : chain) {
    std::vector<int> g;
    for (int h : f) g.push_back(pos[static_cast<std::size_t>(h)]);
    std::sort(g.begin(), g.end());
    out.push_back(g);
  }
  return out;
}

std::vector<std::vector<int>> from_canonical_chain(
    const CanonForm& canon, const std::vector<std::vector<int>>& chain) {
  std::vector<std::vector<int>> out;
  for (const auto& f : chain) {
    std::vector<int> g;
    for (int p : f) g.push_back(canon.order[static_cast<std::size_t>(p)]);
    std::sort(g.begin(), g.end());
    out.push_back(g);
  }
  return out;
}

SSMemoEntry ss_search(const Arrangement& a, SearchCtx& ctx, const Budget& budget) {
  CanonForm canon = canon_form(a);
  if (auto hit = ss_memo_get(canon.key)) return *hit;
  ctx.tick("supersolvability search nodes");

  SSMemoEntry result;
  int r = a.rank();
  if (r <= 2) {
    result.status = Status::certified_yes;
    std::vector<int> all(static_cast<std::size_t>(a.num()));
    std::iota(all.begin(), all.end(), 0);
    result.chain.push_back({});
    if (r >= 1) {
      if (r == 2) result.chain.push_back({canon.order[0]});
      result.chain.push_back(all);
    }
    result.chain = to_canonical_chain(canon, result.chain);
  } else {
    result.status = Status::certified_no;
    Lattice lat = intersection_lattice(a, budget);
    for (const Flat& f : lat.flats) {
      if (f.rank != r - 1) continue;
      if (!is_modular_coatom(a, f.hyps)) continue;
      Arrangement sub = a.subarrangement(f.hyps);
      SSMemoEntry rec = ss_search(sub, ctx, budget);
      if (rec.status != Status::certified_yes) continue;
      // translate: sub index -> a index
      std::vector<int> subidx;
      f.hyps.for_each([&](int i) { subidx.push_back(i); });
      CanonForm subcanon = canon_form(sub);
      std::vector<std::vector<int>> chain =
          from_canonical_chain(subcanon, rec.chain);
      std::vector<std::vector<int>> lifted;
      for (const auto& fl : chain) {
        std::vector<int> g;
        for (int i : fl) g.push_back(subidx[static_cast<std::size_t>(i)]);
        lifted.push_back(g);
      }
      std::vector<int> all(static_cast<std::size_t>(a.num()));
      std::iota(all.begin(), all.end(), 0);
      lifted.push_back(all);
      result.status = Status::certified_yes;
      result.chain = to_canonical_chain(canon, lifted);
      break;
    }
  }
  ss_memo_put(canon.key, result);
  return result;
}

}  // namespace

SSVerdict supersolvable(const Arrangement& a, const Budget& budget) {
  SSVerdict v;
  SearchCtx ctx{&budget};
  try {
    SSMemoEntry e = ss_search(a, ctx, budget);
    v.nodes = ctx.nodes;
    if (e.status == Status::certified_yes) {
      CanonForm canon = canon_form(a);
      SSChain chain;
      chain.chain = from_canonical_chain(canon, e.chain);
      for (std::size_t k = 1; k < chain.chain.size(); ++k)
        chain.exponents.push_back(static_cast<int>(chain.chain[k].size()) -
                                  static_cast<int>(chain.chain[k - 1].size()));
      v.status = Status::certified_yes;
      v.exponents = chain.exponents;
      std::sort(v.exponents.begin(), v.exponents.end());
      v.chain = chain;
      std::string why;
      if (!verify_ss_chain(a, chain, &why))
        throw std::logic_error("emitted chain failed to verify: " + why);
    } else {
      v.status = Status::certified_no;
      v.note = "no modular coatom admits a supersolvable localization";
    }
  } catch (const BudgetExceeded& e) {
    v.status = Status::unknown;
    v.note = e.what();
    v.nodes = ctx.nodes;
  }
  return v;
}

bool verify_ss_chain(const Arrangement& a, const SSChain& chain,
                     std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  int r = a.rank();
  if (static_cast<int>(chain.chain.size()) != r + 1)
    return fail("chain length must be rank+1");
  std::vector<Bits128> flats;
  for (const auto& f : chain.chain) {
    Bits128 m;
    for (int h : f) {
      if (h < 0 || h >= a.num()) return fail("bad hyperplane index in chain");
      m.set(h);
    }
    flats.push_back(m);
  }
  if (flats.front() != Bits128{}) return fail("chain must start at the ambient space");
  if (flats.back() != a.hyperplane_mask()) return fail("chain must end at the center");
  for (int k = 0; k <= r; ++k) {
    if (flat_closure(a, flats[static_cast<std::size_t>(k)]) != flats[static_cast<std::size_t>(k)])
      return fail("chain member is not a flat");
    if (flat_rank(a, flats[static_cast<std::size_t>(k)]) != k)
      return fail("chain member has wrong rank");
    if (k > 0 && !flats[static_cast<std::size_t>(k - 1)].is_subset_of(flats[static_cast<std::size_t>(k)]))
      return fail("chain is not increasing");
  }
  // Each member must be a modular coatom of the localization at its
  // successor; this recursively certifies supersolvability.
  for (int k = r - 1; k >= 0; --k) {
    Arrangement local = a.subarrangement(flats[static_cast<std::size_t>(k + 1)]);
    // translate flat k into local indices
    std::vector<int> idx;
    flats[static_cast<std::size_t>(k + 1)].for_each([&](int i) { idx.push_back(i); });
    Bits128 inner;
    for (std::size_t p = 0; p < idx.size(); ++p)
      if (flats[static_cast<std::size_t>(k)].test(idx[p])) inner.set(static_cast<int>(p));
    if (local.rank() != k + 1) return fail("localization rank unexpected");
    if (k + 1 >= 2) {
      if (!is_modular_coatom(local, inner))
        return fail("chain member is not modular in its successor");
    }
  }
  // Exponents: sizes along the chain.
  std::vector<int> exps;
  for (std::size_t k = 1; k < flats.size(); ++k)
    exps.push_back(static_cast<int>(chain.chain[k].size()) -
                   static_cast<int>(chain.chain[k - 1].size()));
  if (exps != chain.exponents) return fail("chain exponents mismatch");
  return true;
}

std::string ss_chain_to_json(const SSChain& chain) {
  json j{{"kind", "modular-chain"},
         {"chain", chain.chain},
         {"exponents", chain.exponents}};
  return j.dump(2);
}

SSChain ss_chain_from_json(const std::string& text) {
  json j = json::parse(text);
  if (j.at("kind").get<std::string>() != "modular-chain")
    throw std::invalid_argument("not a modular-chain certificate");
  SSChain chain;
  chain.chain = j.at("chain").get<std::vector<std::vector<int>>>();
  chain.exponents = j.at("exponents").get<std::vector<int>>();
  return chain;
}

// ---------------------------------------------------------------------------
// Nice partitions
// ---------------------------------------------------------------------------

namespace {

bool valid_partition(const Arrangement& a, const std::vector<std::vector<int>>& blocks,
                     std::string* why) {
  Bits128 seen;
  for (const auto& blk : blocks) {
    if (blk.empty()) {
      if (why) *why = "empty block";
      return false;
    }
    for (int h : blk) {
      if (h < 0 || h >= a.num() || seen.test(h)) {
        if (why) *why = "blocks are not a partition";
        return false;
      }
      seen.set(h);
    }
  }
  if (seen != a.hyperplane_mask()) {
    if (why) *why = "blocks do not cover the arrangement";
    return false;
  }
  return true;
}

bool independent_partition(const Arrangement& a,
                           const std::vector<std::vector<int>>& blocks,
                           SearchCtx& ctx) {
  // DFS over transversals with incremental rank pruning.
  std::function<bool(std::size_t, Mat&)> rec = [&](std::size_t k, Mat& sel) -> bool {
    if (k == blocks.size()) return true;
    for (int h : blocks[k]) {
      ctx.tick("transversal independence checks");
      sel.push_back(a.normal(h));
      bool ok = rank_of(sel) == static_cast<int>(sel.size());
      if (ok && !rec(k + 1, sel)) ok = false;
      sel.pop_back();
      if (!ok) return false;
    }
    return true;
  };
  Mat sel;
  return rec(0, sel);
}

bool singleton_condition(const Lattice& lat,
                         const std::vector<std::vector<int>>& blocks) {
  std::vector<Bits128> bm(blocks.size());
  for (std::size_t i = 0; i < blocks.size(); ++i)
    for (int h : blocks[i]) bm[i].set(h);
  for (const Flat& f : lat.flats) {
    if (f.rank == 0) continue;
    bool has = false;
    for (const Bits128& b : bm)
      if ((b & f.hyps).count() == 1) {
        has = true;
        break;
      }
    if (!has) return false;
  }
  return true;
}

}  // namespace

bool nice_partition(const Arrangement& a, const HPartition& pi, const Budget& budget) {
  std::string why;
  if (!valid_partition(a, pi.blocks, &why))
    throw std::invalid_argument("invalid partition: " + why);
  if (a.num() == 0) return pi.blocks.empty();
  SearchCtx ctx{&budget};
  if (!independent_partition(a, pi.blocks, ctx)) return false;
  Lattice lat = intersection_lattice(a, budget);
  return singleton_condition(lat, pi.blocks);
}

// ---------------------------------------------------------------------------
// Inductive factorization
// ---------------------------------------------------------------------------

namespace {

std::string pair_key(const CanonForm& canon,
                     const std::vector<std::vector<int>>& blocks) {
  // block id per hyperplane, renumbered along the canonical order
  std::vector<int> block_of(canon.order.size(), -1);
  for (std::size_t b = 0; b < blocks.size(); ++b)
    for (int h : blocks[b]) block_of[static_cast<std::size_t>(h)] = static_cast<int>(b);
  std::vector<int> renum(blocks.size(), -1);
  int next = 0;
  std::string suffix;
  for (int pos = 0; pos < static_cast<int>(canon.order.size()); ++pos) {
    int b = block_of[static_cast<std::size_t>(canon.order[static_cast<std::size_t>(pos)])];
    if (renum[static_cast<std::size_t>(b)] == -1) renum[static_cast<std::size_t>(b)] = next++;
    suffix += static_cast<char>('a' + renum[static_cast<std::size_t>(b)]);
  }
  return canon.key + "#" + suffix;
}

struct IFacCtx {
  SearchCtx* search = nullptr;
  std::unordered_map<std::string, Status>* memo = nullptr;
  std::map<std::string, int>* decisions = nullptr;  // pair key -> canonical H0 pos
};

// The induction step data for a chosen H0.
struct IFacStepData {
  Arrangement del;
  std::vector<std::vector<int>> del_blocks;
  Arrangement res;
  std::vector<std::vector<int>> res_blocks;
};

// Computes the triple data; returns false when the restriction map fails to
// be a bijection from A \ pi_b onto A''.
bool ifac_step(const Arrangement& a, const std::vector<std::vector<int>>& blocks,
               std::size_t b, int h0, IFacStepData& out) {
  // Deletion: indices shift down past h0.
  out.del = a.deletion(h0);
  out.del_blocks.clear();
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    std::vector<int> blk;
    for (int h : blocks[i]) {
      if (h == h0) continue;
      blk.push_back(h > h0 ? h - 1 : h);
    }
    if (!blk.empty()) out.del_blocks.push_back(std::move(blk));
  }
  // Restriction and the map H -> H cap H0.
  out.res = a.restriction(h0);
  Mat base = kernel_basis({a.normal(h0)}, a.dim());
  auto image_of = [&](int h) {
    Vec img(base.size());
    for (std::size_t j = 0; j < base.size(); ++j)
      img[j] = static_cast<Int>(dot(a.normal(h), base[j]));
    img = primitive(img);
    for (int k = 0; k < out.res.num(); ++k)
      if (out.res.normal(k) == img) return k;
    return -1;
  };
  // Injectivity on A minus the block of H0four; onto by counting.
  int outside = 0;
  std::vector<int> hit(static_cast<std::size_t>(out.res.num()), 0);
  out.res_blocks.clear();
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (i == b) continue;
    std::vector<int> blk;
    for (int h : blocks[i]) {
      int k = image_of(h);
      if (k < 0) throw std::logic_error("restriction image missing");
      hit[static_cast<std::size_t>(k)] += 1;
      if (hit[static_cast<std::size_t>(k)] > 1) return false;  // not injective
      blk.push_back(k);
      ++outside;
    }
    if (!blk.empty()) out.res_blocks.push_back(std::move(blk));
  }
  if (outside != out.res.num()) return false;  // not onto
  return true;
}

bool ifac_search(const Arrangement& a, const std::vector<std::vector<int>>& blocks,
                 IFacCtx& ctx) {
  if (a.num() == 0) return blocks.empty();
  CanonForm canon = canon_form(a);
  std::string key = pair_key(canon, blocks);
  auto hit = ctx.memo->find(key);
  if (hit != ctx.memo->end()) return hit->second == Status::certified_yes;
  ctx.search->tick("inductive factorization search nodes");

  for (std::size_t b = 0; b < blocks.size(); ++b) {
    for (int h0 : blocks[b]) {
      IFacStepData step;
      if (!ifac_step(a, blocks, b, h0, step)) continue;
      if (ifac_search(step.del, step.del_blocks, ctx) &&
          ifac_search(step.res, step.res_blocks, ctx)) {
        // canonical position of h0
        int pos = -1;
        for (std::size_t p = 0; p < canon.order.size(); ++p)
          if (canon.order[p] == h0) pos = static_cast<int>(p);
        (*ctx.decisions)[key] = pos;
        ctx.memo->emplace(key, Status::certified_yes);
        return true;
      }
    }
  }
  ctx.memo->emplace(key, Status::certified_no);
  return false;
}

// Collects the pool entries along the certified path.
void ifac_collect(const Arrangement& a, const std::vector<std::vector<int>>& blocks,
                  const std::map<std::string, int>& decisions,
                  std::map<std::string, int>& pool) {
  if (a.num() == 0) return;
  CanonForm canon = canon_form(a);
  std::string key = pair_key(canon, blocks);
  if (pool.count(key)) return;
  int pos = decisions.at(key);
  pool[key] = pos;
  int h0 = canon.order[static_cast<std::size_t>(pos)];
  std::size_t b = 0;
  for (std::size_t i = 0; i < blocks.size(); ++i)
    for (int h : blocks[i])
      if (h == h0) b = i;
  IFacStepData step;
  if (!ifac_step(a, blocks, b, h0, step))
    throw std::logic_error("recorded factorization step failed to replay");
  ifac_collect(step.del, step.del_blocks, decisions, pool);
  ifac_collect(step.res, step.res_blocks, decisions, pool);
}

// Integer roots of the essential characteristic polynomial, or nullopt when
// it does not split over Z.  Roots are the candidate block sizes.
std::optional<std::vector<int>> chi_roots(const Arrangement& a, const Budget& budget) {
  Poly chi = characteristic_poly(a, budget);
  // strip t^(dim-rank)
  std::vector<long long> c(chi.coeffs().begin() + (a.dim() - a.rank()),
                           chi.coeffs().end());
  std::vector<int> roots;
  for (int e = 1; e <= a.num(); ++e) {
    while (true) {
      // synthetic division by (t - e); remainder = value at e
      std::vector<long long> q(c.size() > 0 ? c.size() - 1 : 0, 0);
      long long carry = 0;
      for (std::size_t k = c.size(); k-- > 1;) {
        carry = carry * e + c[k];
        q[k - 1] = carry;
      }
      long long rem = carry * e + (c.empty() ? 0 : c[0]);
      if (rem != 0 || c.size() <= 1) break;
      roots.push_back(e);
      c = q;
    }
  }
  if (c.size() != 1) return std::nullopt;  // leftover nonlinear factor
  std::sort(roots.begin(), roots.end());
  return roots;
}

}  // namespace

IFacVerdict inductively_factored_with(const Arrangement& a, const HPartition& pi,
                                      const Budget& budget) {
  IFacVerdict v;
  std::string why;
  if (!valid_partition(a, pi.blocks, &why)) {
    v.status = Status::certified_no;
    v.note = why;
    return v;
  }
  SearchCtx sctx{&budget};
  std::unordered_map<std::string, Status> memo;
  std::map<std::string, int> decisions;
  IFacCtx ctx{&sctx, &memo, &decisions};
  try {
    if (ifac_search(a, pi.blocks, ctx)) {
      v.status = Status::certified_yes;
      IFacCertificate cert;
      cert.blocks = pi.blocks;
      ifac_collect(a, pi.blocks, decisions, cert.pool);
      v.certificate = cert;
      if (!verify_ifac_certificate(a, cert, &why))
        throw std::logic_error("emitted factorization certificate invalid: " + why);
    } else {
      v.status = Status::certified_no;
      v.note = "partition admits no induction order";
    }
    v.nodes = sctx.nodes;
  } catch (const BudgetExceeded& e) {
    v.status = Status::unknown;
    v.note = e.what();
    v.nodes = sctx.nodes;
  }
  return v;
}

IFacVerdict inductively_factored(const Arrangement& a, const Budget& budget) {
  IFacVerdict v;
  if (a.num() == 0) {
    v.status = Status::certified_yes;
    v.certificate = IFacCertificate{};
    return v;
  }
  SearchCtx sctx{&budget};
  try {
    auto sizes = chi_roots(a, budget);
    if (!sizes) {
      v.status = Status::certified_no;
      v.note = "characteristic polynomial does not split over the integers";
      return v;
    }
    // Candidate block sizes (descending for the assignment DFS).
    std::vector<int> caps = *sizes;
    std::sort(caps.rbegin(), caps.rend());
    if (std::accumulate(caps.begin(), caps.end(), 0) != a.num()) {
      v.status = Status::certified_no;
      v.note = "exponent sum does not match the hyperplane count";
      return v;
    }
    Lattice lat = intersection_lattice(a, budget);

    std::unordered_map<std::string, Status> memo;
    std::map<std::string, int> decisions;
    IFacCtx ctx{&sctx, &memo, &decisions};

    const std::size_t s = caps.size();
    std::vector<std::vector<int>> blocks(s);
    bool found = false;
    IFacCertificate cert;

    // Assign hyperplanes to capacity-bounded blocks; equal-capacity blocks
    // are de-duplicated by first-use order.
    std::function<void(int)> assign = [&](int h) {
      if (found) return;
      if (h == a.num()) {
        sctx.tick("factorization candidates");
        std::vector<std::vector<int>> nb;
        for (auto& blk : blocks)
          if (!blk.empty()) nb.push_back(blk);
        if (!singleton_condition(lat, nb)) return;
        SearchCtx ictx{&budget};
        ictx.nodes = sctx.nodes;
        if (!independent_partition(a, nb, ictx)) return;
        std::unordered_map<std::string, Status> imemo;
        std::map<std::string, int> idecisions;
        IFacCtx ic{&ictx, &imemo, &idecisions};
        if (ifac_search(a, nb, ic)) {
          found = true;
          cert.blocks = nb;
          ifac_collect(a, nb, idecisions, cert.pool);
        }
        return;
      }
      for (std::size_t b = 0; b < s; ++b) {
        if (found) return;
        if (static_cast<int>(blocks[b].size()) >= caps[b]) continue;
        // fresh-block symmetry: skip a second empty block of the same size
        if (blocks[b].empty()) {
          bool skip = false;
          for (std::size_t b2 = 0; b2 < b; ++b2)
            if (caps[b2] == caps[b] && blocks[b2].empty()) skip = true;
          if (skip) continue;
          // also avoid permutations of equal-size blocks: require increasing
          // first elements among equal sizes
          for (std::size_t b2 = 0; b2 < b; ++b2)
            if (caps[b2] == caps[b] && !blocks[b2].empty() &&
                blocks[b2].front() > h)
              skip = true;
          if (skip) continue;
        }
        blocks[b].push_back(h);
        assign(h + 1);
        blocks[b].pop_back();
      }
    };
    assign(0);
    v.nodes = sctx.nodes;
    if (found) {
      v.status = Status::certified_yes;
      v.certificate = cert;
      std::string why;
      if (!verify_ifac_certificate(a, cert, &why))
        throw std::logic_error("emitted factorization certificate invalid: " + why);
    } else {
      v.status = Status::certified_no;
      v.note = "no nice partition admits an induction order";
    }
  } catch (const BudgetExceeded& e) {
    v.status = Status::unknown;
    v.note = e.what();
    v.nodes = sctx.nodes;
  }
  return v;
}

bool verify_ifac_certificate(const Arrangement& a, const IFacCertificate& cert,
                             std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  std::string vw;
  if (a.num() == 0) {
    if (!cert.blocks.empty()) return fail("empty arrangement with blocks");
    return true;
  }
  if (!valid_partition(a, cert.blocks, &vw)) return fail(vw);

  std::set<std::string> verified;
  std::function<bool(const Arrangement&, const std::vector<std::vector<int>>&)>
      check = [&](const Arrangement& arr,
                  const std::vector<std::vector<int>>& blocks) -> bool {
    if (arr.num() == 0) return blocks.empty() ? true : fail("leftover blocks");
    CanonForm canon = canon_form(arr);
    std::string key = pair_key(canon, blocks);
    if (verified.count(key)) return true;
    auto it = cert.pool.find(key);
    if (it == cert.pool.end()) return fail("missing step for key " + key);
    int pos = it->second;
    if (pos < 0 || pos >= arr.num()) return fail("bad H0 position");
    int h0 = canon.order[static_cast<std::size_t>(pos)];
    std::size_t b = blocks.size();
    for (std::size_t i = 0; i < blocks.size(); ++i)
      for (int h : blocks[i])
        if (h == h0) b = i;
    if (b == blocks.size()) return fail("H0 not in any block");
    IFacStepData step;
    bool ok;
    try {
      ok = ifac_step(arr, blocks, b, h0, step);
    } catch (const std::exception& e) {
      return fail(std::string("step replay failed: ") + e.what());
    }
    if (!ok) return fail("restriction map is not bijective for key " + key);
    verified.insert(key);
    return check(step.del, step.del_blocks) && check(step.res, step.res_blocks);
  };
  return check(a, cert.blocks);
}

std::string ifac_certificate_to_json(const IFacCertificate& cert) {
  json pool = json::object();
  for (const auto& [key, pos] : cert.pool) pool[key] = pos;
  json j{{"kind", "inductive-factorization"},
         {"blocks", cert.blocks},
         {"pool", pool}};
  return j.dump(2);
}

IFacCertificate ifac_certificate_from_json(const std::string& text) {
  json j = json::parse(text);
  if (j.at("kind").get<std::string>() != "inductive-factorization")
    throw std::invalid_argument("not an inductive-factorization certificate");
  IFacCertificate cert;
  cert.blocks = j.at("blocks").get<std::vector<std::vector<int>>>();
  for (auto& [key, val] : j.at("pool").items()) cert.pool[key] = val.get<int>();
  return cert;
}

}  // namespace idealarr
