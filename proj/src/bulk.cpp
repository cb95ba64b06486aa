#include "hplt/bulk.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace hplt {

static int form_deg(const PolyForm& f) { return f.p.zero() ? 1 : 0; }

BulkAlg::BulkAlg(const PbvModel& model, Open u, int M_, Poly alpha)
    : m(&model), open(std::move(u)), M(M_), alpha_q(std::move(alpha)), bdy_(model, open) {
  if (alpha_q.zero()) alpha_q = Poly{Rat(1)};
  if (definite_integral(alpha_q) != 1)
    throw std::runtime_error("alpha must have integral 1 over the interval");

  for (size_t sp = 0; sp < open.size(); ++sp) {
    int site = open[sp];
    std::string pre = "s" + std::to_string(site) + ":";
    // fields: base (L x Omega), then fiber (L^! x Omega_D)
    for (auto& v : m->L) {
      for (int j = 0; j <= M; ++j) {
        fid_index_[{site, true, v.label, 0, j}] = (int)fields.size();
        fields.push_back({site, true, v.label, PolyForm{Poly::monomial(j), Poly{}}, v.degree});
      }
      for (int j = 0; j < M; ++j) {
        fid_index_[{site, true, v.label, 1, j}] = (int)fields.size();
        fields.push_back({site, true, v.label, PolyForm{Poly{}, Poly::monomial(j)}, v.degree + 1});
      }
    }
    for (auto& s : m->Ldual) {
      for (int j = 1; j <= M; ++j) {
        fid_index_[{site, false, s.label, 0, j}] = (int)fields.size();
        fields.push_back({site, false, s.label, PolyForm{Poly::monomial(j), Poly{}}, s.degree});
      }
      for (int j = 0; j < M; ++j) {
        fid_index_[{site, false, s.label, 1, j}] = (int)fields.size();
        fields.push_back({site, false, s.label, PolyForm{Poly{}, Poly::monomial(j)}, s.degree + 1});
      }
    }
    // generators: duals of the capped fields, by representative class
    for (auto& s : m->Ldual) {
      int g = gens.add(pre + s.label + ":A", s.degree, true);
      ginfo.push_back({site, true, s.label, PolyForm{Poly{}, alpha_q}, 'A', 0});
      a_gen_[{site, s.label}] = g;
      for (int j = 1; j <= M; ++j) {
        Rat c(1, j + 1);  // integral of t^j
        gens.add(pre + s.label + ":Q" + std::to_string(j), s.degree, false);
        ginfo.push_back({site, true, s.label,
                         PolyForm{Poly{}, Poly::monomial(j) + (-c) * alpha_q}, 'Q', 0});
      }
      for (int j = 0; j < M; ++j) {
        gens.add(pre + s.label + ":P" + std::to_string(j), s.degree - 1, false);
        ginfo.push_back({site, true, s.label,
                         PolyForm{Poly::monomial(j + 1) - Poly::monomial(j + 2), Poly{}}, 'P', 1});
      }
    }
    for (auto& v : m->L) {
      for (int j = 0; j < M; ++j) {
        gens.add(pre + v.label + ":R" + std::to_string(j), v.degree - 1, false);
        ginfo.push_back({site, false, v.label,
                         PolyForm{Poly::monomial(j) - Poly::monomial(j + 1), Poly{}}, 'R', 1});
      }
      for (int j = 0; j < M; ++j) {
        gens.add(pre + v.label + ":S" + std::to_string(j), v.degree, false);
        ginfo.push_back({site, false, v.label, PolyForm{Poly{}, Poly::monomial(j)}, 'S', 0});
      }
    }
  }
  ng_site_ = gens.dim() / (int)open.size();
  nf_site_ = (int)fields.size() / (int)open.size();
  if (ng_site_ != nf_site_)
    throw std::runtime_error("generator/field count mismatch per site");

  // per-site Gram (identical across sites); dual basis of delta-functionals
  int n = nf_site_;
  std::vector<std::vector<Rat>> A(n, std::vector<Rat>(2 * n, Rat(0)));
  for (int b = 0; b < n; ++b) {
    for (int a = 0; a < n; ++a) A[b][a] = gen_on_field(a, b);  // (G^T)[b][a]
    A[b][n + b] = 1;
  }
  for (int col = 0; col < n; ++col) {
    int piv = col;
    while (piv < n && A[piv][col] == 0) ++piv;
    if (piv == n) throw std::runtime_error("degenerate Gram pairing between duals and fields");
    std::swap(A[piv], A[col]);
    Rat p = A[col][col];
    for (int c = 0; c < 2 * n; ++c) A[col][c] /= p;
    for (int r = 0; r < n; ++r)
      if (r != col && A[r][col] != 0) {
        Rat f = A[r][col];
        for (int c = 0; c < 2 * n; ++c) A[r][c] -= f * A[col][c];
      }
  }
  field_dual_.assign(n, std::vector<Rat>(n, Rat(0)));
  // solve (G^T) x = e_b: x = column b of the inverse
  for (int b = 0; b < n; ++b)
    for (int a = 0; a < n; ++a) field_dual_[b][a] = A[a][n + b];
}

int BulkAlg::site_pos(int site) const {
  for (size_t i = 0; i < open.size(); ++i)
    if (open[i] == site) return (int)i;
  throw std::runtime_error("site not in open");
}

int BulkAlg::fid(int site, bool base, const std::string& partner, int fd, int j) const {
  auto it = fid_index_.find({site, base, partner, fd, j});
  if (it == fid_index_.end()) throw std::runtime_error("no such field");
  return it->second;
}

int BulkAlg::a_gen(int site, const std::string& dual) const {
  auto it = a_gen_.find({site, dual});
  if (it == a_gen_.end()) throw std::runtime_error("no A-generator for that site/dual");
  return it->second;
}

Rat BulkAlg::gen_on_poly(int g, bool out_base, const std::string& bdy_label, int bdeg,
                         const PolyForm& form) const {
  auto& gi = ginfo[g];
  if (gi.base != out_base) return Rat(0);
  Rat p = gi.base ? m->pair(gi.partner, bdy_label) : m->pair(bdy_label, gi.partner);
  if (p == 0) return Rat(0);
  Rat ip = dual_pair(SmoothDual{gi.rep}, form);
  if (ip == 0) return Rat(0);
  return Rat(sign_pow((long)form_deg(gi.rep) * bdeg)) * p * ip;
}

Rat BulkAlg::gen_on_field(int g, int f) const {
  auto& gi = ginfo[g];
  auto& fx = fields[f];
  if (fx.site != gi.site) return Rat(0);
  int bdeg = fx.base ? m->deg_L(fx.partner) : m->deg_Ldual(fx.partner);
  return gen_on_poly(g, fx.base, fx.partner, bdeg, fx.form);
}

Rat BulkAlg::eval_list(const std::vector<int>& gen_list, const std::vector<int>& fids) const {
  if (gen_list.size() != fids.size()) return Rat(0);
  if (gen_list.empty()) return Rat(1);
  Rat out(0);
  std::vector<int> rest_g(gen_list.begin() + 1, gen_list.end());
  for (size_t j = 0; j < fids.size(); ++j) {
    Rat p = gen_on_field(gen_list[0], fids[j]);
    if (p == 0) continue;
    long cross = 0;
    for (size_t i = 0; i < j; ++i) cross += (long)fields[fids[i]].deg * fields[fids[j]].deg;
    std::vector<int> rest_f;
    for (size_t i = 0; i < fids.size(); ++i)
      if (i != j) rest_f.push_back(fids[i]);
    out += Rat(sign_pow(cross)) * p * eval_list(rest_g, rest_f);
  }
  return out;
}

Rat BulkAlg::eval(const SymVec& v, const std::vector<int>& fids) const {
  Rat out(0);
  for (auto& [lab, c] : v) out += c * eval_list(mono_parse(gens, lab), fids);
  return out;
}

std::array<int, 3> BulkAlg::grade(const Mono& mono) const {
  std::array<int, 3> out{0, 0, 0};
  for (int id : mono) {
    (ginfo[id].base ? out[0] : out[1])++;
    out[2] += ginfo[id].D;
  }
  return out;
}

// ---- field-level operators ----

// fields are partner (x) form; operators 1 (x) d and 1 (x) I pick up the
// Koszul sign of the partner's internal degree, which makes them anticommute
// with the ell / Pi pieces acting on the partner factor alone
int BulkAlg::partner_sign(int f) const {
  auto& fb = fields[f];
  return sign_pow(fb.base ? m->deg_L(fb.partner) : m->deg_Ldual(fb.partner));
}

PolyForm BulkAlg::d_field(int f) const {
  return Rat(partner_sign(f)) * de_rham(fields[f].form);
}

PolyForm BulkAlg::eta_field(int f) const {
  auto& fb = fields[f];
  if (form_deg(fb.form) == 0) return PolyForm{};
  Poly a0 = antider0(fb.form.q);
  PolyForm out;
  if (fb.base) {
    Rat c = definite_integral(alpha_q * a0);
    out = PolyForm{a0 + Poly::constant(-c), Poly{}};
  } else {
    out = PolyForm{a0, Poly{}};
  }
  return Rat(partner_sign(f)) * out;
}

Vec BulkAlg::transpose_op(int g, const std::function<PolyForm(int)>& op) const {
  auto& gi = ginfo[g];
  int sp = site_pos(gi.site);
  int goff = sp * ng_site_, foff = sp * nf_site_;
  int ts = sign_pow(gens.degs[g]);
  std::vector<Rat> val(nf_site_, Rat(0));
  for (int b = 0; b < nf_site_; ++b) {
    PolyForm im = op(foff + b);
    if (im.zero()) continue;
    auto& fb = fields[foff + b];
    int bdeg = fb.base ? m->deg_L(fb.partner) : m->deg_Ldual(fb.partner);
    val[b] = Rat(ts) * gen_on_poly(g, fb.base, fb.partner, bdeg, im);
  }
  Vec out;
  for (int a = 0; a < ng_site_; ++a) {
    Rat c(0);
    for (int b = 0; b < nf_site_; ++b)
      if (val[b] != 0) c += val[b] * field_dual_[b][a];
    if (c != 0) out[gens.labels[goff + a]] = c;
  }
  return out;
}

Vec BulkAlg::ddr_gen(int g) const {
  auto it = ddr_cache_.find(g);
  if (it != ddr_cache_.end()) return it->second;
  Vec out = transpose_op(g, [this](int f) { return d_field(f); });
  ddr_cache_[g] = out;
  return out;
}

Vec BulkAlg::eta_gen(int g) const {
  auto it = eta_cache_.find(g);
  if (it != eta_cache_.end()) return it->second;
  // minus the transpose: the homotopy of the dual complex is -eta^T, which
  // is what [d^T, .] = id - iota pi pins down
  Vec out = transpose_op(g, [this](int f) { return eta_field(f); });
  for (auto& [l, c] : out) c = -c;
  if (corrupt_eta && ginfo[g].cls == 'A') {
    // spoil a side condition: give eta a spurious component on iota's image
    int sp = site_pos(ginfo[g].site);
    for (int a = 0; a < ng_site_; ++a) {
      int id = sp * ng_site_ + a;
      if (ginfo[id].cls == 'P' && ginfo[id].partner == ginfo[g].partner) {
        out[gens.labels[id]] += 1;
        break;
      }
    }
  }
  eta_cache_[g] = out;
  return out;
}

// ---- multilinear engine ----

std::vector<std::vector<int>> BulkAlg::tuples_for(
    int site, const std::vector<std::pair<bool, std::string>>& slots, int total_fd) const {
  std::vector<std::vector<int>> out;
  if (total_fd < 0 || total_fd > (int)slots.size()) return out;
  // choose which slots carry the one-form parts
  std::vector<int> pick(slots.size(), 0);
  std::fill(pick.begin(), pick.begin() + total_fd, 1);
  std::sort(pick.begin(), pick.end());
  do {
    std::vector<std::vector<int>> partial{{}};
    for (size_t i = 0; i < slots.size(); ++i) {
      int fd = pick[i];
      int jlo = (fd == 1) ? 0 : (slots[i].first ? 0 : 1);
      int jhi = (fd == 1) ? M - 1 : M;
      std::vector<std::vector<int>> next;
      for (auto& t : partial)
        for (int j = jlo; j <= jhi; ++j) {
          auto t2 = t;
          t2.push_back(fid(site, slots[i].first, slots[i].second, fd, j));
          next.push_back(std::move(t2));
        }
      partial = std::move(next);
    }
    for (auto& t : partial) out.push_back(std::move(t));
  } while (std::next_permutation(pick.begin(), pick.end()));
  return out;
}

SymVec BulkAlg::expand(const std::function<Rat(const std::vector<int>&)>& G,
                       const std::vector<std::vector<int>>& candidates) const {
  SymVec acc;
  std::set<std::vector<int>> seen;
  for (auto cand : candidates) {
    std::sort(cand.begin(), cand.end());
    bool dead = false;
    for (size_t i = 0; i + 1 < cand.size(); ++i)
      if (cand[i] == cand[i + 1] && (fields[cand[i]].deg & 1)) dead = true;
    if (dead || !seen.insert(cand).second) continue;
    Rat val = G(cand);
    if (val == 0) continue;
    SymVec d;
    sym_insert(gens, d, Mono{}, Rat(1));
    for (int f : cand) {
      int sp = f / nf_site_, b = f % nf_site_;
      SymVec df;
      for (int a = 0; a < ng_site_; ++a)
        if (field_dual_[b][a] != 0)
          sym_insert(gens, df, Mono{sp * ng_site_ + a}, field_dual_[b][a]);
      d = sym_mul(gens, d, df);
    }
    Rat den(0);
    for (auto& [lab, c] : d) den += c * eval_list(mono_parse(gens, lab), cand);
    if (den == 0) throw std::runtime_error("degenerate dual functional in bulk expansion");
    Rat cc = val / den;
    for (auto& [lab, c] : d) sym_insert(gens, acc, mono_parse(gens, lab), cc * c);
  }
  return acc;
}

// flatten a field tuple into (boundary labels) x (wedge of forms): the sign of
// moving each form past the later boundary elements
static long flatten_sign(const PbvModel* m, const std::vector<const BulkAlg::FieldB*>& t) {
  long s = 0;
  for (size_t i = 0; i < t.size(); ++i) {
    int fd = form_deg(t[i]->form);
    if (!fd) continue;
    for (size_t j = i + 1; j < t.size(); ++j)
      s += (long)fd * (t[j]->base ? m->deg_L(t[j]->partner) : m->deg_Ldual(t[j]->partner));
  }
  return s;
}

SymVec BulkAlg::d1_gen(int g, int k) const {
  auto key = std::make_pair(g, k);
  auto it = d1_cache_.find(key);
  if (it != d1_cache_.end()) return it->second;
  SymVec out;
  auto& gi = ginfo[g];
  auto eit = m->ell.find(k);
  if (eit != m->ell.end() && !eit->second.empty()) {
    int ts = sign_pow(gens.degs[g]);
    int rfd = form_deg(gi.rep);
    std::vector<std::vector<int>> cands;
    if (gi.base) {
      for (auto& c : eit->second) {
        std::vector<std::pair<bool, std::string>> slots;
        for (auto& in : c.inputs) slots.emplace_back(true, in);
        auto tt = tuples_for(gi.site, slots, 1 - rfd);
        cands.insert(cands.end(), tt.begin(), tt.end());
      }
      out = expand(
          [&](const std::vector<int>& fids) {
            std::vector<const FieldB*> t;
            std::vector<std::string> labels;
            PolyForm w{Poly{Rat(1)}, Poly{}};
            for (int f : fids) {
              t.push_back(&fields[f]);
              labels.push_back(fields[f].partner);
              w = wedge(w, fields[f].form);
            }
            if (w.zero()) return Rat(0);
            long s1 = flatten_sign(m, t);
            int outdeg = 1;
            for (auto& l : labels) outdeg += m->deg_L(l);
            Rat val(0);
            for (auto& [o, c] : m->eval_ell(k, labels))
              val += c * gen_on_poly(g, true, o, outdeg, w);
            return Rat(Rat(ts) * Rat(sign_pow(s1)) * val);
          },
          cands);
    } else {
      // coadjoint piece: (k-1) base fields and one fiber field -> fiber
      for (auto& c : eit->second) {
        for (size_t drop = 0; drop < c.inputs.size(); ++drop)
          for (auto& s : m->Ldual) {
            if (m->pair(s.label, c.output) == 0) continue;
            std::vector<std::pair<bool, std::string>> slots;
            for (size_t j = 0; j < c.inputs.size(); ++j)
              if (j != drop) slots.emplace_back(true, c.inputs[j]);
            slots.emplace_back(false, s.label);
            auto tt = tuples_for(gi.site, slots, 1 - rfd);
            cands.insert(cands.end(), tt.begin(), tt.end());
          }
      }
      out = expand(
          [&](const std::vector<int>& fids) {
            std::vector<const FieldB*> t;
            PolyForm w{Poly{Rat(1)}, Poly{}};
            int nfib = 0;
            long basefd = 0;
            for (int f : fids) {
              t.push_back(&fields[f]);
              if (!fields[f].base)
                ++nfib;
              else
                basefd += form_deg(fields[f].form);
              w = wedge(w, fields[f].form);
            }
            if (nfib != 1 || w.zero()) return Rat(0);
            long s1 = flatten_sign(m, t);
            // move the fiber boundary element to the last slot
            long s2 = 0;
            std::vector<std::string> base_labels;
            std::string fib;
            int fibdeg = 0;
            long after = 0;
            for (size_t i = 0; i < t.size(); ++i)
              if (!t[i]->base) {
                fib = t[i]->partner;
                fibdeg = m->deg_Ldual(fib);
                for (size_t j = i + 1; j < t.size(); ++j)
                  after += t[j]->base ? m->deg_L(t[j]->partner) : 0;
              } else
                base_labels.push_back(t[i]->partner);
            s2 = (long)fibdeg * (after + basefd);  // the fiber pairing also passes the base one-forms
            long sumb = 0;
            for (auto& l : base_labels) sumb += m->deg_L(l);
            // <coad(v..; s'), v_w> = eps <s', ell_k(v.., v_w)>
            std::vector<std::string> full = base_labels;
            full.push_back(gi.partner);
            Rat val(0);
            for (auto& [o, c] : m->eval_ell(k, full)) val += c * m->pair(fib, o);
            val *= Rat(sign_pow((long)fibdeg * (1 + sumb)));
            if (val == 0) return Rat(0);
            int outdeg = (int)sumb + 1 + fibdeg;
            Rat ip = dual_pair(SmoothDual{gi.rep}, w);
            Rat orient = Rat(sign_pow((long)rfd * outdeg));
            // pairing the coadjoint output against w's partner
            Rat vw = val;  // already contracted with gi.partner
            return Rat(Rat(ts) * Rat(sign_pow(s1 + s2)) * orient * ip * vw);
          },
          cands);
    }
  }
  d1_cache_[key] = out;
  return out;
}

SymVec BulkAlg::d2_gen(int g, int r) const {
  auto key = std::make_pair(g, r);
  auto it = d2_cache_.find(key);
  if (it != d2_cache_.end()) return it->second;
  SymVec out;
  auto& gi = ginfo[g];
  auto pit = m->pi.find(r);
  if (pit != m->pi.end() && !pit->second.empty()) {
    int ts = sign_pow(gens.degs[g]);
    int rfd = form_deg(gi.rep);
    std::vector<std::vector<int>> cands;
    if (gi.base) {
      for (auto& c : pit->second) {
        std::vector<std::pair<bool, std::string>> slots;
        for (auto& in : c.inputs) slots.emplace_back(true, in);
        slots.emplace_back(false, c.dual_input);
        auto tt = tuples_for(gi.site, slots, 1 - rfd);
        cands.insert(cands.end(), tt.begin(), tt.end());
      }
      out = expand(
          [&](const std::vector<int>& fids) {
            std::vector<const FieldB*> t;
            PolyForm w{Poly{Rat(1)}, Poly{}};
            int nfib = 0;
            long basefd = 0;
            for (int f : fids) {
              t.push_back(&fields[f]);
              if (!fields[f].base)
                ++nfib;
              else
                basefd += form_deg(fields[f].form);
              w = wedge(w, fields[f].form);
            }
            if (nfib != 1 || w.zero()) return Rat(0);
            long s1 = flatten_sign(m, t);
            long s2 = 0;
            std::vector<std::string> base_labels;
            std::string fib;
            for (size_t i = 0; i < t.size(); ++i)
              if (!t[i]->base) {
                long after = 0;
                for (size_t j = i + 1; j < t.size(); ++j)
                  after += t[j]->base ? m->deg_L(t[j]->partner) : 0;
                s2 = (long)m->deg_Ldual(t[i]->partner) * (after + basefd);
                fib = t[i]->partner;
              } else
                base_labels.push_back(t[i]->partner);
            int outdeg = 1 + m->deg_Ldual(fib);
            for (auto& l : base_labels) outdeg += m->deg_L(l);
            Rat val(0);
            for (auto& [o, c] : m->eval_pi(r, base_labels, fib))
              val += c * gen_on_poly(g, true, o, outdeg, w);
            return Rat(Rat(ts) * Rat(sign_pow(s1 + s2)) * val);
          },
          cands);
    } else if (r >= 1) {
      // quadratic-in-fiber adjoint piece of Pi^(r): (r-1) base + 2 fiber -> fiber
      for (auto& c : pit->second) {
        for (size_t drop = 0; drop < c.inputs.size(); ++drop)
          for (auto& s : m->Ldual) {
            if (m->pair(s.label, c.output) == 0) continue;
            std::vector<std::pair<bool, std::string>> slots;
            for (size_t j = 0; j < c.inputs.size(); ++j)
              if (j != drop) slots.emplace_back(true, c.inputs[j]);
            slots.emplace_back(false, s.label);
            slots.emplace_back(false, c.dual_input);
            auto tt = tuples_for(gi.site, slots, 1 - rfd);
            cands.insert(cands.end(), tt.begin(), tt.end());
          }
      }
      out = expand(
          [&](const std::vector<int>& fids) {
            std::vector<const FieldB*> t;
            PolyForm w{Poly{Rat(1)}, Poly{}};
            int nfib = 0;
            long basefd = 0;
            for (int f : fids) {
              t.push_back(&fields[f]);
              if (!fields[f].base)
                ++nfib;
              else
                basefd += form_deg(fields[f].form);
              w = wedge(w, fields[f].form);
            }
            if (nfib != 2 || w.zero()) return Rat(0);
            long s1 = flatten_sign(m, t);
            // move the two fiber elements to the end, preserving their order
            long s2 = 0;
            std::vector<std::string> base_labels, fibs;
            std::vector<int> fibdegs;
            for (size_t i = 0; i < t.size(); ++i)
              if (!t[i]->base) {
                long after = 0;
                for (size_t j = i + 1; j < t.size(); ++j)
                  after += t[j]->base ? m->deg_L(t[j]->partner) : 0;
                s2 += (long)m->deg_Ldual(t[i]->partner) * (after + basefd);
                fibs.push_back(t[i]->partner);
                fibdegs.push_back(m->deg_Ldual(t[i]->partner));
              } else
                base_labels.push_back(t[i]->partner);
            std::vector<std::string> full = base_labels;
            full.push_back(gi.partner);
            Rat v1(0), v2(0);
            for (auto& [o, c] : m->eval_pi(r, full, fibs[1])) v1 += c * m->pair(fibs[0], o);
            for (auto& [o, c] : m->eval_pi(r, full, fibs[0])) v2 += c * m->pair(fibs[1], o);
            Rat val = Rat(1, 2) * (v1 + Rat(sign_pow((long)fibdegs[0] * fibdegs[1])) * v2);
            if (val == 0) return Rat(0);
            long sumb = 0;
            for (auto& l : base_labels) sumb += m->deg_L(l);
            int outdeg = (int)sumb + fibdegs[0] + fibdegs[1] + 1;
            Rat ip = dual_pair(SmoothDual{gi.rep}, w);
            Rat orient = Rat(sign_pow((long)rfd * outdeg));
            return Rat(Rat(ts) * Rat(sign_pow(s1 + s2)) * orient * ip * val);
          },
          cands);
    }
  }
  d2_cache_[key] = out;
  return out;
}

static void add_vec_as_sym(const SymGens& g, SymVec& out, const Vec& v) {
  for (auto& [lab, c] : v) sym_insert(g, out, Mono{g.index.at(lab)}, c);
}

SymVec BulkAlg::d0_gen(int g) const {
  auto it = d0_cache_.find(g);
  if (it != d0_cache_.end()) return it->second;
  SymVec out;
  add_vec_as_sym(gens, out, ddr_gen(g));
  for (auto& [lab, c] : d1_gen(g, 1)) sym_insert(gens, out, mono_parse(gens, lab), c);
  d0_cache_[g] = out;
  return out;
}

SymVec BulkAlg::delta_gen(int g) const {
  auto it = delta_cache_.find(g);
  if (it != delta_cache_.end()) return it->second;
  SymVec out;
  for (int k = 2; k <= m->max_ell_arity(); ++k)
    for (auto& [lab, c] : d1_gen(g, k)) sym_insert(gens, out, mono_parse(gens, lab), c);
  for (int r = 0; r <= m->max_pi_r(); ++r)
    for (auto& [lab, c] : d2_gen(g, r)) sym_insert(gens, out, mono_parse(gens, lab), c);
  delta_cache_[g] = out;
  return out;
}

// ---- Sym-level operators ----

SymVec BulkAlg::truncate(SymVec v) const {
  if (trunc_K < 0) return v;
  for (auto it = v.begin(); it != v.end();) {
    if ((int)mono_parse(gens, it->first).size() > trunc_K)
      it = v.erase(it);
    else
      ++it;
  }
  return v;
}

static SymVec apply_derivation(const SymGens& g, const std::function<SymVec(int)>& f,
                               const SymVec& v) {
  SymVec out;
  for (auto& [lab, c] : v) {
    SymVec t = derivation_apply(g, f, 1, mono_parse(g, lab));
    for (auto& [l2, c2] : t) sym_insert(g, out, mono_parse(g, l2), c * c2);
  }
  return out;
}

SymVec BulkAlg::d0(const SymVec& v) const {
  return truncate(apply_derivation(gens, [this](int g) { return d0_gen(g); }, v));
}

SymVec BulkAlg::delta(const SymVec& v) const {
  return truncate(apply_derivation(gens, [this](int g) { return delta_gen(g); }, v));
}

SymVec BulkAlg::d2(const SymVec& v) const {
  return truncate(apply_derivation(
      gens,
      [this](int g) {
        SymVec out;
        for (int r = 0; r <= m->max_pi_r(); ++r)
          for (auto& [lab, c] : d2_gen(g, r)) sym_insert(gens, out, mono_parse(gens, lab), c);
        return out;
      },
      v));
}

SymVec BulkAlg::dtot(const SymVec& v) const {
  SymVec out = d0(v);
  for (auto& [lab, c] : delta(v)) sym_insert(gens, out, mono_parse(gens, lab), c);
  return out;
}

SymVec BulkAlg::eta(const SymVec& v) const {
  SymVec out;
  for (auto& [lab, c] : v) {
    SymVec t = sym_homotopy(
        gens,
        [this](int g) {
          SymVec e;
          add_vec_as_sym(gens, e, eta_gen(g));
          return e;
        },
        mono_parse(gens, lab));
    for (auto& [l2, c2] : t) sym_insert(gens, out, mono_parse(gens, l2), c * c2);
  }
  return out;
}

SymVec BulkAlg::iota(const SymVec& bv) const {
  SymVec out;
  for (auto& [lab, c] : bv) {
    SymVec t = algebra_map_apply(bdy_.gens, gens,
                                 [this](int bg) {
                                   SymVec e;
                                   auto& [site, dual] = bdy_.info[bg];
                                   sym_insert(gens, e, Mono{a_gen(site, dual)}, Rat(1));
                                   return e;
                                 },
                                 mono_parse(bdy_.gens, lab));
    for (auto& [l2, c2] : t) sym_insert(gens, out, mono_parse(gens, l2), c * c2);
  }
  return truncate(out);
}

SymVec BulkAlg::pi(const SymVec& av) const {
  SymVec out;
  for (auto& [lab, c] : av) {
    SymVec t = algebra_map_apply(gens, bdy_.gens,
                                 [this](int g) {
                                   SymVec e;
                                   if (ginfo[g].cls == 'A')
                                     sym_insert(bdy_.gens, e,
                                                Mono{bdy_.gid(ginfo[g].site, ginfo[g].partner)},
                                                Rat(1));
                                   return e;
                                 },
                                 mono_parse(gens, lab));
    for (auto& [l2, c2] : t) sym_insert(bdy_.gens, out, mono_parse(bdy_.gens, l2), c * c2);
  }
  return out;
}

Rat BulkAlg::kappa(int i, int j) const {
  auto &gi = ginfo[i], &gj = ginfo[j];
  if (gi.site != gj.site || gi.base == gj.base) return Rat(0);
  // the pairing is odd, so it is graded antisymmetric with a shifted sign
  if (!gi.base) return Rat(-sign_pow((long)gens.degs[i] * gens.degs[j])) * kappa(j, i);
  Rat p = m->pair(gi.partner, gj.partner);
  if (p == 0) return Rat(0);
  Rat ip = dual_pair(SmoothDual{gi.rep}, gj.rep);
  return p * ip;
}

SymVec BulkAlg::bracket(const SymVec& a, const SymVec& b) const {
  SymVec out;
  for (auto& [la, ca] : a)
    for (auto& [lb, cb] : b) {
      SymVec t = sym_bracket(
          gens, [this](int i, int j) { return kappa(i, j); }, mono_parse(gens, la),
          mono_parse(gens, lb));
      for (auto& [l2, c2] : t) sym_insert(gens, out, mono_parse(gens, l2), ca * cb * c2);
    }
  return truncate(out);
}

// ---- perturbation series ----

static void acc_into(const SymGens& g, SymVec& acc, const SymVec& v) {
  for (auto& [lab, c] : v) sym_insert(g, acc, mono_parse(g, lab), c);
}

static SymVec neg(SymVec v) {
  for (auto& [lab, c] : v) c = -c;
  return v;
}

// the perturbed maps are geometric series in (-eta delta) / (-delta eta):
// iota' = sum (-eta delta)^p iota, pi' = pi sum (-delta eta)^p,
// eta' = eta sum (-delta eta)^p, delta_B = pi sum (-1)^p (delta eta)^p delta iota

SymVec BulkAlg::iota_p(const SymVec& bv) const {
  SymVec x = iota(bv), acc = x;
  for (int p = 0; !x.empty(); ++p) {
    if (p >= max_series) throw std::runtime_error("perturbation series failed to terminate");
    x = neg(eta(delta(x)));
    acc_into(gens, acc, x);
  }
  return acc;
}

SymVec BulkAlg::pi_p(const SymVec& av) const {
  SymVec x = truncate(av), acc;
  for (int p = 0; !x.empty(); ++p) {
    if (p >= max_series) throw std::runtime_error("perturbation series failed to terminate");
    acc_into(bdy_.gens, acc, pi(x));
    x = neg(delta(eta(x)));
  }
  return acc;
}

SymVec BulkAlg::eta_p(const SymVec& av) const {
  SymVec x = eta(truncate(av)), acc = x;
  for (int p = 0; !x.empty(); ++p) {
    if (p >= max_series) throw std::runtime_error("perturbation series failed to terminate");
    x = neg(eta(delta(x)));
    acc_into(gens, acc, x);
  }
  return acc;
}

SymVec BulkAlg::delta_b(const SymVec& bv) const {
  SymVec y = iota(bv), acc;
  for (int p = 0; !y.empty(); ++p) {
    if (p >= max_series) throw std::runtime_error("perturbation series failed to terminate");
    acc_into(bdy_.gens, acc, pi(delta(y)));
    y = neg(eta(delta(y)));
  }
  return acc;
}

SymVec BulkAlg::d_small0(const SymVec& bv) const { return pi(d0(iota(bv))); }

}  // namespace hplt
