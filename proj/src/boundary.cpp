#include "hplt/boundary.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace hplt {

BoundaryAlg::BoundaryAlg(const PbvModel& model, Open u) : m(&model), open(std::move(u)) {
  for (int s : open)
    for (auto& e : m->Ldual) {
      info.emplace_back(s, e.label);
      gens.add("s" + std::to_string(s) + ":" + e.label, e.degree, true);
    }
}

int BoundaryAlg::gid(int site, const std::string& dual) const {
  auto it = gens.index.find("s" + std::to_string(site) + ":" + dual);
  if (it == gens.index.end()) throw std::runtime_error("no boundary generator at that site");
  return it->second;
}

Rat BoundaryAlg::eval_list(const std::vector<int>& gen_list, const FieldTuple& t) const {
  if (gen_list.size() != t.size()) return Rat(0);
  if (gen_list.empty()) return Rat(1);
  // pair the first generator with each field, Koszul sign for moving that
  // field to the front past the unused earlier ones
  Rat out(0);
  auto& [site, dual] = info[gen_list[0]];
  std::vector<int> rest_g(gen_list.begin() + 1, gen_list.end());
  for (size_t j = 0; j < t.size(); ++j) {
    if (t[j].first != site) continue;
    Rat p = m->pair(dual, t[j].second);
    if (p == 0) continue;
    long cross = 0;
    for (size_t i = 0; i < j; ++i) cross += (long)m->deg_L(t[i].second) * m->deg_L(t[j].second);
    FieldTuple rest_t;
    for (size_t i = 0; i < t.size(); ++i)
      if (i != j) rest_t.push_back(t[i]);
    out += Rat(sign_pow(cross)) * p * eval_list(rest_g, rest_t);
  }
  return out;
}

Rat BoundaryAlg::eval(const SymVec& v, const FieldTuple& t) const {
  Rat out(0);
  for (auto& [lab, c] : v) {
    Mono mo = mono_parse(gens, lab);
    out += c * eval_list(mo, t);
  }
  return out;
}

SymVec BoundaryAlg::expand(int site, const std::function<Rat(const FieldTuple&)>& G,
                           const std::vector<FieldTuple>& candidates) const {
  (void)site;
  SymVec acc;
  std::set<FieldTuple> seen;
  for (auto cand : candidates) {
    std::sort(cand.begin(), cand.end(), [this](const Field& a, const Field& b) {
      return std::make_pair(a.first, m->pos_L(a.second)) <
             std::make_pair(b.first, m->pos_L(b.second));
    });
    // a repeated odd field kills the symmetric value
    bool dead = false;
    for (size_t i = 0; i + 1 < cand.size(); ++i)
      if (cand[i] == cand[i + 1] && (m->deg_L(cand[i].second) & 1)) dead = true;
    if (dead || !seen.insert(cand).second) continue;
    Rat val = G(cand);
    if (val == 0) continue;
    // delta-functional dual to this tuple
    SymVec d;
    sym_insert(gens, d, Mono{}, Rat(1));
    for (auto& f : cand) {
      SymVec df;
      for (auto& [dl, c] : m->dual_of_field(f.second)) sym_insert(gens, df, Mono{gid(f.first, dl)}, c);
      d = sym_mul(gens, d, df);
    }
    Rat den(0);
    for (auto& [lab, c] : d) den += c * eval_list(mono_parse(gens, lab), cand);
    if (den == 0) throw std::runtime_error("degenerate dual functional in expansion");
    Rat cc = val / den;
    for (auto& [lab, c] : d) sym_insert(gens, acc, mono_parse(gens, lab), cc * c);
  }
  return acc;
}

SymVec BoundaryAlg::dce_gen(int g) const {
  auto it = dce_cache_.find(g);
  if (it != dce_cache_.end()) return it->second;
  auto& [site, nu] = info[g];
  std::vector<FieldTuple> cands;
  for (auto& [k, comps] : m->ell)
    for (auto& c : comps) {
      FieldTuple t;
      for (auto& in : c.inputs) t.emplace_back(site, in);
      cands.push_back(std::move(t));
    }
  SymVec out = expand(site,
                      [&](const FieldTuple& t) {
                        std::vector<std::string> labels;
                        for (auto& f : t) labels.push_back(f.second);
                        Rat v(0);
                        for (auto& [o, c] : m->eval_ell((int)labels.size(), labels))
                          v += m->pair(nu, o) * c;
                        return v;
                      },
                      cands);
  dce_cache_[g] = out;
  return out;
}

SymVec BoundaryAlg::d_ce(const SymVec& v) const {
  SymVec out;
  for (auto& [lab, c] : v) {
    SymVec t = derivation_apply(
        gens, [this](int g) { return dce_gen(g); }, 1, mono_parse(gens, lab));
    for (auto& [l2, c2] : t) sym_insert(gens, out, mono_parse(gens, l2), c * c2);
  }
  return out;
}

SymVec BoundaryAlg::mul(const SymVec& a, const SymVec& b) const { return sym_mul(gens, a, b); }

Rat BoundaryAlg::pair_eff(const std::string& dual, const std::string& field) const {
  return Rat(pairing_sign) * m->pair(dual, field);
}

Rat BoundaryAlg::pair_pi_sym(int r, const std::string& nu, const std::vector<std::string>& labels,
                             const std::string& nu2) const {
  Rat t1(0), t2(0);
  for (auto& [o, c] : m->eval_pi_scaled(r, labels, nu2, pi_scale_r, pi_scale_idx, pi_scale))
    t1 += pair_eff(nu, o) * c;
  for (auto& [o, c] : m->eval_pi_scaled(r, labels, nu, pi_scale_r, pi_scale_idx, pi_scale))
    t2 += pair_eff(nu2, o) * c;
  long s = (long)m->deg_Ldual(nu) * m->deg_Ldual(nu2) + 1;
  // the overall orientation matches the homotopy-transferred bracket, whose
  // leading term is -pi varpi(eta delta iota , iota) under the alternating series
  return Rat(-half * (t1 + Rat(sign_pow(s)) * t2));
}

SymVec BoundaryAlg::bracket_gen(int i, int j) const {
  auto key = std::make_pair(i, j);
  auto it = br_cache_.find(key);
  if (it != br_cache_.end()) return it->second;
  SymVec out;
  auto& [si, nui] = info[i];
  auto& [sj, nuj] = info[j];
  if (si == sj) {
    std::vector<FieldTuple> cands;
    for (auto& [r, comps] : m->pi)
      for (auto& c : comps) {
        FieldTuple t;
        for (auto& in : c.inputs) t.emplace_back(si, in);
        cands.push_back(std::move(t));
      }
    out = expand(si,
                 [&](const FieldTuple& t) {
                   std::vector<std::string> labels;
                   for (auto& f : t) labels.push_back(f.second);
                   return pair_pi_sym((int)labels.size(), nui, labels, nuj);
                 },
                 cands);
  }
  br_cache_[key] = out;
  return out;
}

SymVec BoundaryAlg::bracket(const SymVec& a, const SymVec& b) const {
  SymVec out;
  for (auto& [la, ca] : a)
    for (auto& [lb, cb] : b) {
      SymVec t = sym_bracket_gen(
          gens, [this](int i, int j) { return bracket_gen(i, j); }, mono_parse(gens, la),
          mono_parse(gens, lb));
      for (auto& [l2, c2] : t) sym_insert(gens, out, mono_parse(gens, l2), ca * cb * c2);
    }
  return out;
}

Rat BoundaryAlg::bracket_value(const Mono& a, const Mono& b, const FieldTuple& t) const {
  Rat out(0);
  int deg_a = mono_degree(gens, a);
  std::vector<int> fdeg(t.size());
  for (size_t i = 0; i < t.size(); ++i) fdeg[i] = m->deg_L(t[i].second);
  for (size_t i = 0; i < a.size(); ++i) {
    int da = gens.degs[a[i]];
    int tail = 0;
    for (size_t k = i + 1; k < a.size(); ++k) tail += gens.degs[a[k]];
    int pre_b = 0;
    for (size_t j = 0; j < b.size(); ++j) {
      int db = gens.degs[b[j]];
      int pref = sign_pow((long)da * tail + (long)db * pre_b + (deg_a - da));
      pre_b += db;
      std::vector<int> ra, rb;
      for (size_t k = 0; k < a.size(); ++k)
        if (k != i) ra.push_back(a[k]);
      for (size_t k = 0; k < b.size(); ++k)
        if (k != j) rb.push_back(b[k]);
      auto& [si, nui] = info[a[i]];
      auto& [sj, nuj] = info[b[j]];
      if (si != sj) continue;
      for (auto& [r, comps] : m->pi) {
        if (comps.empty()) continue;
        if (ra.size() + rb.size() + r != t.size()) continue;
        // split t into (a-part, Pi-part, b-part); tags 0/1/2, unshuffle sign
        std::vector<int> tags;
        tags.insert(tags.end(), ra.size(), 0);
        tags.insert(tags.end(), (size_t)r, 1);
        tags.insert(tags.end(), rb.size(), 2);
        std::sort(tags.begin(), tags.end());
        do {
          long usign = 0;
          for (size_t p = 0; p < t.size(); ++p)
            for (size_t q = p + 1; q < t.size(); ++q)
              if (tags[p] > tags[q]) usign += (long)fdeg[p] * fdeg[q];
          FieldTuple t0, t1, t2;
          for (size_t p = 0; p < t.size(); ++p)
            (tags[p] == 0 ? t0 : tags[p] == 1 ? t1 : t2).push_back(t[p]);
          Rat va = eval_list(ra, t0);
          if (va == 0) continue;
          Rat vb = eval_list(rb, t2);
          if (vb == 0) continue;
          std::vector<std::string> labels;
          bool offsite = false;
          for (auto& f : t1) {
            if (f.first != si) offsite = true;
            labels.push_back(f.second);
          }
          if (offsite) continue;
          Rat g = pair_pi_sym(r, nui, labels, nuj);
          if (g == 0) continue;
          out += Rat(pref) * Rat(sign_pow(usign)) * va * g * vb;
        } while (std::next_permutation(tags.begin(), tags.end()));
      }
    }
  }
  return out;
}

}  // namespace hplt
