#pragma once

// Bulk observables over an open: functionals on TA = L x Omega(I) (+) L^! x
// Omega_D(I), with interval forms capped at polynomial degree M.  Generators
// are smooth-dual functionals with polynomial representatives; every linear
// structure map is the mechanical transpose of the corresponding field-level
// operator (computed by exact Gram solves), and the multilinear pieces of the
// differential are expanded into Sym powers through delta-functional dual
// bases.  Carries the unperturbed SDR onto the boundary algebra and the lazy
// perturbation series of the homological perturbation lemma.

#include <array>

#include "hplt/boundary.hpp"
#include "hplt/interval.hpp"
#include "hplt/model.hpp"
#include "hplt/symalg.hpp"

namespace hplt {

struct BulkAlg {
  const PbvModel* m;
  Open open;
  int M;        // interval polynomial cap for fields
  Poly alpha_q; // alpha = alpha_q dt, with integral 1

  // negative-control knob: add a spurious term to the linear homotopy
  bool corrupt_eta = false;

  // symmetric-degree truncation; ops drop monomials above this (<0 = none).
  // The span of high monomials is stable under all operators, so this is a
  // quotient complex and every identity descends.
  int trunc_K = -1;

  // series guard for the perturbation sums
  int max_series = 64;

  SymGens gens;
  struct GenInfo {
    int site;
    bool base;            // base-type (pairs L x Omega fields) or fiber-type
    std::string partner;  // L^! label (base) / L label (fiber)
    PolyForm rep;
    char cls;             // 'A','P','Q' (base) / 'R','S' (fiber)
    int D;                // D-degree contribution
  };
  std::vector<GenInfo> ginfo;

  struct FieldB {
    int site;
    bool base;
    std::string partner;  // L label (base) / L^! label (fiber)
    PolyForm form;
    int deg;
  };
  std::vector<FieldB> fields;

  BulkAlg(const PbvModel& model, Open u, int M_ = 2, Poly alpha = Poly{});

  const BoundaryAlg& bdy() const { return bdy_; }
  BoundaryAlg& bdy() { return bdy_; }

  // ---- pairing and evaluation ----
  Rat gen_on_field(int g, int f) const;
  // generator against a raw (boundary label, form) pair; `bdeg` is the degree
  // of the boundary element
  Rat gen_on_poly(int g, bool out_base, const std::string& bdy_label, int bdeg,
                  const PolyForm& form) const;
  Rat eval_list(const std::vector<int>& gen_list, const std::vector<int>& fids) const;
  Rat eval(const SymVec& v, const std::vector<int>& fids) const;

  // (k, l, D) of a monomial
  std::array<int, 3> grade(const Mono& mono) const;

  // ---- generator-level structure maps (cached) ----
  Vec ddr_gen(int g) const;        // transpose of the interval de Rham operator
  Vec eta_gen(int g) const;        // transpose of the field-level homotopy
  SymVec d1_gen(int g, int k) const;  // ell_k piece (base + coadjoint)
  SymVec d2_gen(int g, int r) const;  // Pi^(r) piece (base + quadratic fiber)
  SymVec d0_gen(int g) const;      // ddr + d1(k=1): the unperturbed differential
  SymVec delta_gen(int g) const;   // sum_{k>=2} d1 + sum_{r>=0} d2

  // ---- Sym-level operators ----
  SymVec truncate(SymVec v) const;
  SymVec d0(const SymVec& v) const;
  SymVec delta(const SymVec& v) const;
  SymVec d2(const SymVec& v) const;  // the Pi-induced piece alone, all r
  SymVec dtot(const SymVec& v) const;
  SymVec eta(const SymVec& v) const;
  SymVec mul(const SymVec& a, const SymVec& b) const { return truncate(sym_mul(gens, a, b)); }

  // unperturbed SDR against the boundary algebra
  SymVec iota(const SymVec& bv) const;  // algebra map B -> A
  SymVec pi(const SymVec& av) const;    // algebra map A -> B
  int a_gen(int site, const std::string& dual) const;

  // odd pairing kappa and the bulk bracket (biderivation extension)
  Rat kappa(int i, int j) const;
  SymVec bracket(const SymVec& a, const SymVec& b) const;

  // ---- perturbation series (lazy; throw if max_series is exceeded) ----
  SymVec iota_p(const SymVec& bv) const;   // sum (eta delta)^p iota
  SymVec pi_p(const SymVec& av) const;     // pi sum (delta eta)^p
  SymVec eta_p(const SymVec& av) const;    // eta sum (delta eta)^p
  SymVec delta_b(const SymVec& bv) const;  // pi sum (delta eta)^p delta iota
  SymVec d_small0(const SymVec& bv) const; // pi d0 iota (linear CE part)

 private:
  BoundaryAlg bdy_;
  int ng_site_ = 0, nf_site_ = 0;  // per-site counts (identical across sites)
  // per-site-local dual basis: field local index -> coeffs over local gens
  std::vector<std::vector<Rat>> field_dual_;
  std::map<std::tuple<int, bool, std::string, int, int>, int> fid_index_;
  std::map<std::pair<int, std::string>, int> a_gen_;

  int site_pos(int site) const;          // position of site in `open`
  int fid(int site, bool base, const std::string& partner, int fd, int j) const;

  // field-level operators on basis fields (exact within the cap)
  int partner_sign(int f) const;
  PolyForm d_field(int f) const;
  PolyForm eta_field(int f) const;

  // transpose of a linear field-level operator (per-site Gram solve)
  Vec transpose_op(int g, const std::function<PolyForm(int)>& op) const;

  // expansion of a site-local multilinear functional into Sym^n over W
  SymVec expand(const std::function<Rat(const std::vector<int>&)>& G,
                const std::vector<std::vector<int>>& candidates) const;

  // candidate tuples for slot descriptors (base?, partner) at a site with
  // total form degree `total_fd`
  std::vector<std::vector<int>> tuples_for(int site,
                                           const std::vector<std::pair<bool, std::string>>& slots,
                                           int total_fd) const;

  // boundary-level helpers for the multilinear engine
  Rat pair_out(int g, const std::map<std::string, Rat>& out, int out_deg,
               const PolyForm& form) const;

  mutable std::map<int, Vec> ddr_cache_, eta_cache_;
  mutable std::map<std::pair<int, int>, SymVec> d1_cache_, d2_cache_;
  mutable std::map<int, SymVec> d0_cache_, delta_cache_;
};

}  // namespace hplt
