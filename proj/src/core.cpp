#include "hplt/core.hpp"

#include <algorithm>
#include <sstream>

namespace hplt {

void vec_add(Vec& a, const Vec& b, const Rat& c) {
  if (c == 0) return;
  for (auto& [l, x] : b) {
    auto it = a.find(l);
    if (it == a.end()) {
      Rat v = x * c;
      if (v != 0) a.emplace(l, v);
    } else {
      it->second += x * c;
      if (it->second == 0) a.erase(it);
    }
  }
}

void vec_insert(Vec& v, const std::string& label, const Rat& c) {
  if (c == 0) return;
  auto it = v.find(label);
  if (it == v.end())
    v.emplace(label, c);
  else {
    it->second += c;
    if (it->second == 0) v.erase(it);
  }
}

void GradedSpace::add(const std::string& label, int deg) {
  if (degree.count(label)) throw std::runtime_error("duplicate basis label: " + label);
  order.push_back(label);
  degree[label] = deg;
}

int GradedSpace::deg(const std::string& label) const {
  auto it = degree.find(label);
  if (it == degree.end()) throw std::runtime_error("unknown basis label: " + label);
  return it->second;
}

int GradedSpace::dim_in_degree(int d) const {
  int n = 0;
  for (auto& [l, dd] : degree)
    if (dd == d) ++n;
  return n;
}

std::vector<std::string> GradedSpace::labels_in_degree(int d) const {
  std::vector<std::string> out;
  for (auto& l : order)
    if (degree.at(l) == d) out.push_back(l);
  return out;
}

int GradedSpace::degree_of_vec(const Vec& v) const {
  std::optional<int> d;
  for (auto& [l, c] : v) {
    int dl = deg(l);
    if (d && *d != dl) throw std::runtime_error("inhomogeneous vector");
    d = dl;
  }
  if (!d) throw std::runtime_error("degree of zero vector undefined");
  return *d;
}

void LinearBlockMap::set(const std::string& src, const Vec& img) {
  if (!source->has(src)) throw std::runtime_error("set: label not in source: " + src);
  int ds = source->deg(src);
  for (auto& [t, c] : img) {
    if (!target->has(t)) throw std::runtime_error("set: label not in target: " + t);
    if (target->deg(t) != ds + map_degree)
      throw std::runtime_error("set: degree violation at " + src + " -> " + t);
  }
  if (img.empty())
    cols.erase(src);
  else
    cols[src] = img;
}

void LinearBlockMap::add(const std::string& src, const std::string& tgt, const Rat& c) {
  if (!source->has(src) || !target->has(tgt))
    throw std::runtime_error("add: unknown label " + src + " -> " + tgt);
  if (target->deg(tgt) != source->deg(src) + map_degree)
    throw std::runtime_error("add: degree violation at " + src + " -> " + tgt);
  vec_insert(cols[src], tgt, c);
  if (cols[src].empty()) cols.erase(src);
}

Vec LinearBlockMap::apply_label(const std::string& src) const {
  auto it = cols.find(src);
  return it == cols.end() ? Vec{} : it->second;
}

Vec LinearBlockMap::apply(const Vec& v) const {
  Vec out;
  for (auto& [l, c] : v) {
    auto it = cols.find(l);
    if (it != cols.end()) vec_add(out, it->second, c);
  }
  return out;
}

bool LinearBlockMap::is_zero() const {
  for (auto& [l, col] : cols)
    if (!col.empty()) return false;
  return true;
}

LinearBlockMap LinearBlockMap::scaled(const Rat& c) const {
  LinearBlockMap out(source, target, map_degree);
  if (c == 0) return out;
  for (auto& [l, col] : cols) {
    Vec v;
    for (auto& [t, x] : col) v[t] = x * c;
    out.cols[l] = v;
  }
  return out;
}

LinearBlockMap identity_map(SpacePtr s) {
  LinearBlockMap m(s, s, 0);
  for (auto& l : s->order) m.cols[l] = Vec{{l, Rat(1)}};
  return m;
}

LinearBlockMap zero_map(SpacePtr s, SpacePtr t, int d) { return LinearBlockMap(s, t, d); }

LinearBlockMap compose(const LinearBlockMap& f, const LinearBlockMap& g) {
  if (f.source.get() != g.target.get())
    throw std::runtime_error("compose: space mismatch");
  LinearBlockMap out(g.source, f.target, f.map_degree + g.map_degree);
  for (auto& [l, col] : g.cols) {
    Vec img = f.apply(col);
    if (!img.empty()) out.cols[l] = img;
  }
  return out;
}

LinearBlockMap map_sum(const LinearBlockMap& f, const LinearBlockMap& g, const Rat& cg) {
  if (f.source.get() != g.source.get() || f.target.get() != g.target.get() ||
      f.map_degree != g.map_degree)
    throw std::runtime_error("map_sum: incompatible maps");
  LinearBlockMap out = f;
  for (auto& [l, col] : g.cols) {
    Vec v = out.apply_label(l);
    vec_add(v, col, cg);
    if (v.empty())
      out.cols.erase(l);
    else
      out.cols[l] = v;
  }
  return out;
}

bool map_equal(const LinearBlockMap& f, const LinearBlockMap& g) {
  if (f.map_degree != g.map_degree) return false;
  for (auto& l : f.source->order) {
    if (f.apply_label(l) != g.apply_label(l)) return false;
  }
  return true;
}

std::vector<std::string> split_label(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else
      cur.push_back(c);
  }
  out.push_back(cur);
  return out;
}

std::string join_label(const std::vector<std::string>& parts, char sep) {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) out.push_back(sep);
    out += parts[i];
  }
  return out;
}

SpacePtr tensor_space(SpacePtr a, SpacePtr b) {
  auto t = std::make_shared<GradedSpace>();
  for (auto& la : a->order)
    for (auto& lb : b->order) t->add(la + "&" + lb, a->deg(la) + b->deg(lb));
  return t;
}

LinearBlockMap tensor_map(const LinearBlockMap& f, const LinearBlockMap& g) {
  SpacePtr src = tensor_space(f.source, g.source);
  SpacePtr tgt = tensor_space(f.target, g.target);
  LinearBlockMap out(src, tgt, f.map_degree + g.map_degree);
  for (auto& lx : f.source->order) {
    Vec fx = f.apply_label(lx);
    if (fx.empty()) continue;
    int sgn_exp = g.map_degree * f.source->deg(lx);
    for (auto& ly : g.source->order) {
      Vec gy = g.apply_label(ly);
      if (gy.empty()) continue;
      Vec img;
      for (auto& [tf, cf] : fx)
        for (auto& [tg, cg] : gy)
          vec_insert(img, tf + "&" + tg, cf * cg * sign_pow(sgn_exp));
      out.cols[lx + "&" + ly] = img;
    }
  }
  return out;
}

namespace {

// Koszul sign of sorting `idx` (positions into base order) by stable sort,
// counting transpositions of odd-degree pairs.
int sort_sign(std::vector<int>& idx, const std::vector<int>& degs) {
  int s = 1;
  for (size_t i = 1; i < idx.size(); ++i)
    for (size_t j = i; j > 0 && idx[j] < idx[j - 1]; --j) {
      if (degs[idx[j]] % 2 != 0 && degs[idx[j - 1]] % 2 != 0) s = -s;
      std::swap(idx[j], idx[j - 1]);
    }
  return s;
}

void multisets(int n, int k, int start, std::vector<int>& cur,
               const std::vector<int>& degs, std::vector<std::vector<int>>& out) {
  if ((int)cur.size() == k) {
    out.push_back(cur);
    return;
  }
  for (int i = start; i < n; ++i) {
    if (!cur.empty() && cur.back() == i && degs[i] % 2 != 0) continue;  // odd square
    cur.push_back(i);
    multisets(n, k, i, cur, degs, out);
    cur.pop_back();
  }
}

}  // namespace

SymPower symmetric_power(SpacePtr base, int k) {
  if (k < 0) throw std::runtime_error("symmetric_power: k < 0");
  SymPower sp;
  sp.base = base;
  sp.k = k;
  std::vector<int> degs;
  for (auto& l : base->order) degs.push_back(base->deg(l));

  auto sym = std::make_shared<GradedSpace>();
  std::vector<std::vector<int>> mss;
  if (k == 0) {
    sym->add("1", 0);
    mss.push_back({});
  } else {
    std::vector<int> cur;
    multisets(base->dim(), k, 0, cur, degs, mss);
    for (auto& ms : mss) {
      std::vector<std::string> parts;
      int d = 0;
      for (int i : ms) {
        parts.push_back(base->order[i]);
        d += degs[i];
      }
      sym->add(join_label(parts, '*'), d);
    }
  }
  sp.space = sym;

  // tensor power
  auto tp = std::make_shared<GradedSpace>();
  {
    std::vector<int> tup(k, 0);
    if (k == 0)
      tp->add("1", 0);
    else {
      // all tuples in lexicographic order
      while (true) {
        std::vector<std::string> parts;
        int d = 0;
        for (int i : tup) {
          parts.push_back(base->order[i]);
          d += degs[i];
        }
        tp->add(join_label(parts, '&'), d);
        int p = k - 1;
        while (p >= 0 && tup[p] == base->dim() - 1) tup[p--] = 0;
        if (p < 0) break;
        ++tup[p];
      }
    }
  }
  sp.tensor = tp;

  LinearBlockMap inc(sym, tp, 0), prj(tp, sym, 0);
  if (k == 0) {
    inc.add("1", "1", 1);
    prj.add("1", "1", 1);
  } else {
    for (auto& ms : mss) {
      std::vector<std::string> parts;
      for (int i : ms) parts.push_back(base->order[i]);
      std::string sym_label = join_label(parts, '*');
      // distinct arrangements of ms with Koszul signs
      std::vector<int> perm = ms;
      std::sort(perm.begin(), perm.end());
      std::vector<std::vector<int>> arr;
      do arr.push_back(perm);
      while (std::next_permutation(perm.begin(), perm.end()));
      Rat norm(1, (long)arr.size());
      for (auto& a : arr) {
        std::vector<int> tmp = a;
        int sgn = sort_sign(tmp, degs);
        std::vector<std::string> tparts;
        for (int i : a) tparts.push_back(base->order[i]);
        std::string tl = join_label(tparts, '&');
        inc.add(sym_label, tl, Rat(sgn) * norm);
        prj.add(tl, sym_label, Rat(sgn));
      }
    }
  }
  sp.inclusion = inc;
  sp.projection = prj;
  return sp;
}

void CochainComplex::check() const {
  if (d.map_degree != 1) throw std::runtime_error("differential degree != +1");
  for (auto& l : space->order) {
    Vec dd = d.apply(d.apply_label(l));
    if (!dd.empty()) throw std::runtime_error("d^2 != 0 on basis vector " + l);
  }
}

int sparse_rank(std::vector<std::map<int, Rat>> rows) {
  int rank = 0;
  std::map<int, int> pivot_row;  // column -> row index in `rows`
  for (auto& row : rows) {
    // eliminate with existing pivots
    while (!row.empty()) {
      int c = row.begin()->first;
      auto it = pivot_row.find(c);
      if (it == pivot_row.end()) break;
      Rat f = row.begin()->second;
      auto& pr = rows[it->second];
      Rat p = pr.begin()->second;
      // row -= (f/p) * pr
      Rat k = f / p;
      for (auto& [cc, vv] : pr) {
        auto jt = row.find(cc);
        if (jt == row.end())
          row[cc] = -k * vv;
        else {
          jt->second -= k * vv;
          if (jt->second == 0) row.erase(jt);
        }
      }
    }
    if (!row.empty()) {
      pivot_row[row.begin()->first] = (int)(&row - rows.data());
      ++rank;
    }
  }
  return rank;
}

std::map<int, int> cohomology_dims(const CochainComplex& c) {
  // rank of d per degree
  std::map<int, std::vector<std::map<int, Rat>>> rows_by_deg;
  std::map<std::string, int> pos;
  for (size_t i = 0; i < c.space->order.size(); ++i) pos[c.space->order[i]] = (int)i;
  std::map<int, int> dims;
  for (auto& l : c.space->order) dims[c.space->deg(l)]++;
  std::map<int, int> rank_d;
  for (auto& [deg, n] : dims) {
    std::vector<std::map<int, Rat>> rows;
    for (auto& l : c.space->labels_in_degree(deg)) {
      std::map<int, Rat> row;
      for (auto& [t, v] : c.d.apply_label(l)) row[pos[t]] = v;
      rows.push_back(row);
    }
    rank_d[deg] = sparse_rank(std::move(rows));
  }
  std::map<int, int> h;
  for (auto& [deg, n] : dims) {
    int rk = rank_d.count(deg) ? rank_d[deg] : 0;
    int rk_prev = rank_d.count(deg - 1) ? rank_d[deg - 1] : 0;
    h[deg] = n - rk - rk_prev;
  }
  return h;
}

}  // namespace hplt
