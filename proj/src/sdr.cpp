#include "hplt/sdr.hpp"

#include <algorithm>

#include "hplt/symalg.hpp"

namespace hplt {

bool SdrReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const SdrCheck& c) { return c.pass; });
}

static SdrCheck check_map_zero(const std::string& name, const LinearBlockMap& m) {
  for (auto& l : m.source->order) {
    if (!m.apply_label(l).empty()) return {name, false, l};
  }
  return {name, true, ""};
}

SdrReport verify_sdr(const Sdr& s) {
  SdrReport r;
  {
    SdrCheck c{"pi iota = id", true, ""};
    for (auto& l : s.small.space->order) {
      Vec v = s.pi.apply(s.iota.apply_label(l));
      Vec e{{l, Rat(1)}};
      if (v != e) {
        c = {"pi iota = id", false, l};
        break;
      }
    }
    r.checks.push_back(c);
  }
  {
    SdrCheck c{"d eta + eta d = id - iota pi", true, ""};
    for (auto& l : s.big.space->order) {
      Vec v = s.big.d.apply(s.eta.apply_label(l));
      vec_add(v, s.eta.apply(s.big.d.apply_label(l)));
      vec_add(v, s.iota.apply(s.pi.apply_label(l)));
      Vec e{{l, Rat(1)}};
      if (v != e) {
        c = {"d eta + eta d = id - iota pi", false, l};
        break;
      }
    }
    r.checks.push_back(c);
  }
  r.checks.push_back(check_map_zero("eta eta = 0", compose(s.eta, s.eta)));
  r.checks.push_back(check_map_zero("pi eta = 0", compose(s.pi, s.eta)));
  r.checks.push_back(check_map_zero("eta iota = 0", compose(s.eta, s.iota)));
  // chain-map compatibilities come along for free and catch sign mistakes
  r.checks.push_back(
      check_map_zero("d iota = iota d", map_sum(compose(s.big.d, s.iota),
                                               compose(s.iota, s.small.d), Rat(-1))));
  r.checks.push_back(
      check_map_zero("pi d = d pi", map_sum(compose(s.pi, s.big.d),
                                            compose(s.small.d, s.pi), Rat(-1))));
  return r;
}

SmallnessCertificate check_smallness(const Sdr& s, const Perturbation& p) {
  SmallnessCertificate cert;
  std::map<std::pair<int, int>, std::vector<std::string>> pieces;
  for (auto& l : s.big.space->order) pieces[p.grading(l)].push_back(l);
  auto bound = p.nilpotence_bound ? p.nilpotence_bound
                                  : [](int k, int l) { return k + 2 * l + 1; };
  for (auto& [kl, labels] : pieces) {
    int worst = 0;
    for (auto& l : labels) {
      Vec v{{l, Rat(1)}};
      int q = 0;
      int cap = bound(kl.first, kl.second);
      while (!v.empty()) {
        v = s.eta.apply(p.delta.apply(v));
        if (v.empty()) break;
        ++q;
        if (q > cap)
          throw std::runtime_error("smallness violation at bidegree (" +
                                   std::to_string(kl.first) + "," +
                                   std::to_string(kl.second) + "), label " + l);
      }
      worst = std::max(worst, q == 0 ? 0 : q + 1);
    }
    cert.exponents[kl] = worst;  // (delta eta)^worst = 0 on the piece
  }
  return cert;
}

namespace {

int global_bound(const Sdr& s, const Perturbation& p) {
  auto bound = p.nilpotence_bound ? p.nilpotence_bound
                                  : [](int k, int l) { return k + 2 * l + 1; };
  int b = 1;
  for (auto& l : s.big.space->order) {
    auto [k, ll] = p.grading(l);
    b = std::max(b, bound(k, ll));
  }
  return b + 1;
}

// sum_p (-A B)^p v with nilpotence guard
Vec geom(const LinearBlockMap& a, const LinearBlockMap& b, Vec v, int cap) {
  Vec acc = v;
  int q = 0;
  while (!v.empty()) {
    v = a.apply(b.apply(v));
    for (auto& [l, c] : v) c = -c;
    vec_add(acc, v);
    if (++q > cap) throw std::runtime_error("perturbation series failed to terminate");
  }
  return acc;
}

}  // namespace

Perturbed perturb(const Sdr& s, const Perturbation& p) {
  Perturbed out;
  out.certificate = check_smallness(s, p);
  int cap = global_bound(s, p);

  // (d + delta)^2 = 0 on big
  LinearBlockMap dd = map_sum(s.big.d, p.delta);
  if (!compose(dd, dd).is_zero())
    throw std::runtime_error("perturb: (d + delta)^2 != 0 on big");

  SpacePtr big = s.big.space, small = s.small.space;
  LinearBlockMap iota_p(small, big, 0), pi_p(big, small, 0), eta_p(big, big, -1),
      delta_b(small, small, 1);
  for (auto& l : small->order) {
    // iota' = sum (-eta delta)^p iota
    Vec v = geom(s.eta, p.delta, s.iota.apply_label(l), cap);
    if (!v.empty()) iota_p.cols[l] = v;
    // delta_B = pi sum (-delta eta)^p delta iota
    Vec w = s.pi.apply(geom(p.delta, s.eta, p.delta.apply(s.iota.apply_label(l)), cap));
    if (!w.empty()) delta_b.cols[l] = w;
  }
  for (auto& l : big->order) {
    Vec series = geom(p.delta, s.eta, Vec{{l, Rat(1)}}, cap);
    Vec vp = s.pi.apply(series);
    if (!vp.empty()) pi_p.cols[l] = vp;
    Vec ve = s.eta.apply(series);
    if (!ve.empty()) eta_p.cols[l] = ve;
  }

  out.sdr.big = {big, dd};
  out.sdr.small = {small, map_sum(s.small.d, delta_b)};
  out.sdr.iota = iota_p;
  out.sdr.pi = pi_p;
  out.sdr.eta = eta_p;
  out.delta_small = delta_b;
  out.sdr.big.check();
  out.sdr.small.check();
  SdrReport rep = verify_sdr(out.sdr);
  if (!rep.all_pass()) {
    for (auto& c : rep.checks)
      if (!c.pass)
        throw std::runtime_error("perturb: output SDR fails '" + c.identity +
                                 "' at " + c.witness);
  }
  return out;
}

namespace {

SpacePtr dual_space(SpacePtr v) {
  auto d = std::make_shared<GradedSpace>();
  for (auto& l : v->order) d->add(l + "'", -v->deg(l));
  return d;
}

// (A^T phi)(x) = (-1)^{|A| |phi|} phi(A x)
LinearBlockMap dual_map(const LinearBlockMap& a, SpacePtr src_dual, SpacePtr tgt_dual) {
  LinearBlockMap t(tgt_dual, src_dual, a.map_degree);
  for (auto& [v, col] : a.cols) {
    for (auto& [w, c] : col) {
      int s = sign_pow((long)a.map_degree * tgt_dual->deg(w + "'"));
      t.add(w + "'", v + "'", Rat(s) * c);
    }
  }
  return t;
}

}  // namespace

Sdr sym_extend(const Sdr& s, int K) {
  if (K < 0) throw std::runtime_error("sym_extend: K < 0");
  SpacePtr bigd = dual_space(s.big.space);
  SpacePtr smalld = dual_space(s.small.space);
  // dual SDR: d* = d^T, iota* = pi^T, pi* = iota^T, eta* = -eta^T
  LinearBlockMap dT = dual_map(s.big.d, bigd, bigd);
  LinearBlockMap dsT = dual_map(s.small.d, smalld, smalld);
  LinearBlockMap iota_s = dual_map(s.pi, bigd, smalld);   // small* -> big*
  LinearBlockMap pi_s = dual_map(s.iota, smalld, bigd);   // big* -> small*
  LinearBlockMap eta_s = dual_map(s.eta, bigd, bigd).scaled(Rat(-1));

  // adapted basis of big*: image of iota* (w0) + a complement of it inside
  // ker pi* picked from (1 - iota* pi*) columns by exact elimination
  std::vector<std::pair<std::string, Vec>> adapted;  // label -> vector in big*
  std::vector<char> w0flag;
  for (auto& l : smalld->order) {
    adapted.push_back({"q0:" + l, iota_s.apply_label(l)});
    w0flag.push_back(1);
  }
  {
    std::map<std::string, int> pos;
    for (size_t i = 0; i < bigd->order.size(); ++i) pos[bigd->order[i]] = (int)i;
    std::vector<std::map<int, Rat>> rows;
    auto to_row = [&](const Vec& v) {
      std::map<int, Rat> r;
      for (auto& [t, c] : v) r[pos[t]] = c;
      return r;
    };
    for (auto& [lab, v] : adapted) rows.push_back(to_row(v));
    int base_rank = sparse_rank(rows);
    int q1 = 0;
    for (auto& l : bigd->order) {
      Vec v{{l, Rat(1)}};
      vec_add(v, iota_s.apply(pi_s.apply_label(l)), Rat(-1));
      if (v.empty()) continue;
      rows.push_back(to_row(v));
      int rk = sparse_rank(rows);
      if (rk > base_rank) {
        base_rank = rk;
        adapted.push_back({"q1:" + std::to_string(q1++), v});
        w0flag.push_back(0);
      } else
        rows.pop_back();
    }
  }

  // change of basis: big* coordinates of adapted gens, and its inverse
  int n = (int)adapted.size();
  if (n != bigd->dim()) throw std::runtime_error("sym_extend: adapted basis incomplete");
  // solve for inverse by Gaussian elimination on the n x n matrix
  std::map<std::string, int> bpos;
  for (int i = 0; i < n; ++i) bpos[bigd->order[i]] = i;
  std::vector<std::vector<Rat>> M(n, std::vector<Rat>(n, Rat(0))),
      Inv(n, std::vector<Rat>(n, Rat(0)));
  for (int j = 0; j < n; ++j) {
    for (auto& [t, c] : adapted[j].second) M[bpos[t]][j] = c;
    Inv[j][j] = 1;
  }
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    for (int r = col; r < n; ++r)
      if (M[r][col] != 0) {
        piv = r;
        break;
      }
    if (piv < 0) throw std::runtime_error("sym_extend: singular change of basis");
    std::swap(M[piv], M[col]);
    std::swap(Inv[piv], Inv[col]);
    Rat p = M[col][col];
    for (int c = 0; c < n; ++c) {
      M[col][c] /= p;
      Inv[col][c] /= p;
    }
    for (int r = 0; r < n; ++r)
      if (r != col && M[r][col] != 0) {
        Rat f = M[r][col];
        for (int c = 0; c < n; ++c) {
          M[r][c] -= f * M[col][c];
          Inv[r][c] -= f * Inv[col][c];
        }
      }
  }
  // Inv rows now express adapted coordinates of big* basis vectors:
  // adapted_coord[i] of big* basis j = Inv[i][j]
  auto to_adapted = [&](const Vec& v) {
    std::vector<Rat> out(n, Rat(0));
    for (auto& [t, c] : v) {
      int j = bpos[t];
      for (int i = 0; i < n; ++i)
        if (Inv[i][j] != 0) out[i] += Inv[i][j] * c;
    }
    return out;
  };

  SymGens gens;
  for (int i = 0; i < n; ++i) {
    int d = bigd->deg(adapted[i].second.begin()->first);
    gens.add(adapted[i].first, d, w0flag[i]);
  }

  // generator-level operators in adapted coordinates
  auto gen_op = [&](const LinearBlockMap& op) {
    std::vector<SymVec> img(n);
    for (int i = 0; i < n; ++i) {
      Vec v = op.apply(adapted[i].second);
      auto co = to_adapted(v);
      for (int j = 0; j < n; ++j)
        if (co[j] != 0) img[i][gens.labels[j]] = co[j];
    }
    return img;
  };
  auto dT_gen = gen_op(dT);
  auto eta_gen_img = gen_op(eta_s);
  auto pi_gen_img = [&] {
    std::vector<SymVec> img(n);
    for (int i = 0; i < n; ++i) {
      Vec v = pi_s.apply(adapted[i].second);
      for (auto& [t, c] : v) img[i][t] = c;  // labels in small*
    }
    return img;
  }();

  SymGens sgens;
  for (auto& l : smalld->order) sgens.add(l, smalld->deg(l), true);

  // spaces
  auto big_space = std::make_shared<GradedSpace>();
  auto big_monos = enumerate_monos(gens, K);
  for (auto& m : big_monos) big_space->add(mono_label(gens, m), mono_degree(gens, m));
  auto small_space = std::make_shared<GradedSpace>();
  auto small_monos = enumerate_monos(sgens, K);
  for (auto& m : small_monos)
    small_space->add(mono_label(sgens, m), mono_degree(sgens, m));

  auto clip = [&](const SymVec& v, SpacePtr sp) {
    for (auto& [l, c] : v)
      if (!sp->has(l))
        throw std::runtime_error("sym_extend: symmetric-degree overflow at " + l);
    return v;
  };

  Sdr out;
  LinearBlockMap D(big_space, big_space, 1), Ds(small_space, small_space, 1),
      I(small_space, big_space, 0), P(big_space, small_space, 0),
      E(big_space, big_space, -1);
  GenMap dmap = [&](int i) { return dT_gen[i]; };
  GenMap emap = [&](int i) { return eta_gen_img[i]; };
  GenMap dsmap = [&](int i) {
    SymVec v;
    Vec w = dsT.apply_label(sgens.labels[i]);
    for (auto& [t, c] : w) v[t] = c;
    return v;
  };
  for (auto& m : big_monos) {
    std::string l = mono_label(gens, m);
    Vec v = clip(derivation_apply(gens, dmap, 1, m), big_space);
    if (!v.empty()) D.cols[l] = v;
    Vec e = clip(sym_homotopy(gens, emap, m), big_space);
    if (!e.empty()) E.cols[l] = e;
    Vec p = clip(algebra_map_apply(gens, sgens,
                                   [&](int i) { return pi_gen_img[i]; }, m),
                 small_space);
    if (!p.empty()) P.cols[l] = p;
  }
  for (auto& m : small_monos) {
    std::string l = mono_label(sgens, m);
    Vec v = clip(derivation_apply(sgens, dsmap, 1, m), small_space);
    if (!v.empty()) Ds.cols[l] = v;
    Vec im = clip(algebra_map_apply(sgens, gens,
                                    [&](int i) {
                                      SymVec w;
                                      w[gens.labels[i]] = 1;  // q0 gens align
                                      return w;
                                    },
                                    m),
                  big_space);
    if (!im.empty()) I.cols[l] = im;
  }
  out.big = {big_space, D};
  out.small = {small_space, Ds};
  out.iota = I;
  out.pi = P;
  out.eta = E;
  return out;
}

}  // namespace hplt
