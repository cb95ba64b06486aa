#include "hplt/symalg.hpp"

#include <algorithm>

namespace hplt {

int SymGens::add(const std::string& label, int deg, bool w0) {
  if (index.count(label)) throw std::runtime_error("duplicate generator: " + label);
  int id = (int)labels.size();
  labels.push_back(label);
  degs.push_back(deg);
  is_w0.push_back(w0 ? 1 : 0);
  index[label] = id;
  return id;
}

std::string mono_label(const SymGens& g, const Mono& m) {
  if (m.empty()) return "1";
  std::vector<std::string> parts;
  for (int i : m) parts.push_back(g.labels[i]);
  return join_label(parts, '*');
}

Mono mono_parse(const SymGens& g, const std::string& label) {
  Mono m;
  if (label == "1") return m;
  for (auto& p : split_label(label, '*')) {
    auto it = g.index.find(p);
    if (it == g.index.end()) throw std::runtime_error("unknown generator: " + p);
    m.push_back(it->second);
  }
  return m;
}

int mono_degree(const SymGens& g, const Mono& m) {
  int d = 0;
  for (int i : m) d += g.degs[i];
  return d;
}

int mono_sort(const SymGens& g, Mono& ids) {
  int s = 1;
  for (size_t i = 1; i < ids.size(); ++i)
    for (size_t j = i; j > 0 && ids[j] < ids[j - 1]; --j) {
      if (g.degs[ids[j]] % 2 != 0 && g.degs[ids[j - 1]] % 2 != 0) s = -s;
      std::swap(ids[j], ids[j - 1]);
    }
  for (size_t i = 1; i < ids.size(); ++i)
    if (ids[i] == ids[i - 1] && g.degs[ids[i]] % 2 != 0) return 0;
  return s;
}

void sym_insert(const SymGens& g, SymVec& v, Mono ids, const Rat& c) {
  if (c == 0) return;
  int s = mono_sort(g, ids);
  if (s == 0) return;
  vec_insert(v, mono_label(g, ids), Rat(s) * c);
}

SymVec sym_mul(const SymGens& g, const SymVec& a, const SymVec& b) {
  SymVec out;
  for (auto& [la, ca] : a) {
    Mono ma = mono_parse(g, la);
    for (auto& [lb, cb] : b) {
      Mono m = ma;
      Mono mb = mono_parse(g, lb);
      m.insert(m.end(), mb.begin(), mb.end());
      sym_insert(g, out, std::move(m), ca * cb);
    }
  }
  return out;
}

SymVec derivation_apply(const SymGens& g, const GenMap& f, int /*op_parity*/, const Mono& m) {
  // front form: F(x1..xn) = sum_i (-1)^{|xi| sum_{j<i} |xj|} F(xi) * (m \ xi);
  // the operator parity cancels when the image is moved to the front.
  SymVec out;
  int pre = 0;
  for (size_t i = 0; i < m.size(); ++i) {
    int di = g.degs[m[i]];
    SymVec img = f(m[i]);
    if (!img.empty()) {
      int s = sign_pow((long)di * pre);
      Mono rest;
      for (size_t j = 0; j < m.size(); ++j)
        if (j != i) rest.push_back(m[j]);
      SymVec rv;
      rv[mono_label(g, rest)] = Rat(s);
      vec_add(out, sym_mul(g, img, rv));
    }
    pre += di;
  }
  return out;
}

SymVec algebra_map_apply(const SymGens& src, const SymGens& tgt,
                         const std::function<SymVec(int)>& on_gen, const Mono& m) {
  SymVec out;
  out["1"] = 1;
  for (int id : m) {
    out = sym_mul(tgt, out, on_gen(id));
    if (out.empty()) break;
  }
  return out;
}

SymVec sym_homotopy(const SymGens& g, const GenMap& eta_gen, const Mono& m) {
  SymVec acc;
  if (m.empty()) return acc;
  Mono arr = m;  // sorted; next_permutation enumerates distinct arrangements
  long n_arr = 0;
  do {
    ++n_arr;
    // Koszul sign of this arrangement relative to the sorted monomial
    Mono tmp = arr;
    int s_arr = mono_sort(g, tmp);
    if (s_arr == 0) continue;
    int pre_deg = 0;
    bool prefix_w0 = true;
    for (size_t i = 0; i < arr.size(); ++i) {
      if (!prefix_w0) break;
      // P on slots < i (identity on w0 gens, zero otherwise), eta on slot i
      SymVec img = eta_gen(arr[i]);
      if (!img.empty()) {
        int s_eta = sign_pow(pre_deg);  // eta is odd
        for (auto& [tl, tc] : img) {
          Mono out = arr;
          auto rep = mono_parse(g, tl);
          if (rep.size() != 1) throw std::runtime_error("sym_homotopy: eta_gen must be linear");
          out[i] = rep[0];
          Mono sorted = out;
          int s_sort = mono_sort(g, sorted);
          if (s_sort == 0) continue;
          vec_insert(acc, mono_label(g, sorted), Rat(s_arr * s_eta * s_sort) * tc);
        }
      }
      if (!g.is_w0[arr[i]]) prefix_w0 = false;
      pre_deg += g.degs[arr[i]];
    }
  } while (std::next_permutation(arr.begin(), arr.end()));
  SymVec out;
  for (auto& [l, c] : acc) {
    Rat v = c / Rat(n_arr);
    if (v != 0) out[l] = v;
  }
  return out;
}

static void enum_rec(const SymGens& g, int K, int start, Mono& cur, std::vector<Mono>& out) {
  out.push_back(cur);
  if ((int)cur.size() == K) return;
  for (int i = start; i < g.dim(); ++i) {
    if (!cur.empty() && cur.back() == i && g.degs[i] % 2 != 0) continue;
    cur.push_back(i);
    enum_rec(g, K, i, cur, out);
    cur.pop_back();
  }
}

std::vector<Mono> enumerate_monos(const SymGens& g, int K) {
  std::vector<Mono> out;
  Mono cur;
  enum_rec(g, K, 0, cur, out);
  return out;
}

SymVec sym_bracket(const SymGens& g, const GenPairing& kappa, const Mono& a, const Mono& b) {
  SymVec out;
  int deg_a = mono_degree(g, a);
  for (size_t i = 0; i < a.size(); ++i) {
    int da = g.degs[a[i]];
    int tail = 0;
    for (size_t k = i + 1; k < a.size(); ++k) tail += g.degs[a[k]];
    int pre_b = 0;
    for (size_t j = 0; j < b.size(); ++j) {
      int db = g.degs[b[j]];
      Rat kv = kappa(a[i], b[j]);
      if (kv != 0) {
        // move a_i to the end of a, b_j to the front of b, contract the
        // adjacent pair with the odd pairing (which passes a \ a_i)
        int s = sign_pow((long)da * tail + (long)db * pre_b + (deg_a - da));
        Mono rest;
        for (size_t k = 0; k < a.size(); ++k)
          if (k != i) rest.push_back(a[k]);
        for (size_t k = 0; k < b.size(); ++k)
          if (k != j) rest.push_back(b[k]);
        sym_insert(g, out, std::move(rest), Rat(s) * kv);
      }
      pre_b += db;
    }
  }
  return out;
}

SymVec sym_bracket_gen(const SymGens& g, const GenBracket& B, const Mono& a, const Mono& b) {
  SymVec out;
  int deg_a = mono_degree(g, a);
  for (size_t i = 0; i < a.size(); ++i) {
    int da = g.degs[a[i]];
    int tail = 0;
    for (size_t k = i + 1; k < a.size(); ++k) tail += g.degs[a[k]];
    int pre_b = 0;
    for (size_t j = 0; j < b.size(); ++j) {
      int db = g.degs[b[j]];
      SymVec bv = B(a[i], b[j]);
      if (!bv.empty()) {
        int s = sign_pow((long)da * tail + (long)db * pre_b + (deg_a - da));
        Mono ra, rb;
        for (size_t k = 0; k < a.size(); ++k)
          if (k != i) ra.push_back(a[k]);
        for (size_t k = 0; k < b.size(); ++k)
          if (k != j) rb.push_back(b[k]);
        // (a/ai) * B(ai,bj) * (b/bj); sym_mul handles the sorting signs
        SymVec left;
        sym_insert(g, left, Mono(ra), Rat(s));
        SymVec mid = sym_mul(g, left, bv);
        SymVec right;
        sym_insert(g, right, Mono(rb), Rat(1));
        SymVec term = sym_mul(g, mid, right);
        for (auto& [lab, c] : term) sym_insert(g, out, mono_parse(g, lab), c);
      }
      pre_b += db;
    }
  }
  return out;
}

}  // namespace hplt
