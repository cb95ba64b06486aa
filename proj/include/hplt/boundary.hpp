#pragma once

// Boundary observables of a Poisson BV model over an open: the free
// graded-symmetric algebra on one copy of L^! per site, carrying the
// Chevalley-Eilenberg differential dual to the ell_k and the strict P0
// bracket built from the Taylor components Pi^(r).

#include "hplt/model.hpp"
#include "hplt/symalg.hpp"

namespace hplt {

struct BoundaryAlg {
  const PbvModel* m;
  Open open;
  SymGens gens;                                   // label "s<site>:<dual>"
  std::vector<std::pair<int, std::string>> info;  // gen id -> (site, dual label)

  // negative-control knobs (defaults give the honest structure)
  Rat half{1, 2};        // prefactor of each of the two pairing terms
  int pairing_sign = 1;  // sign of the boundary pairing inside the bracket
  int pi_scale_r = -1;   // scale one Pi component: which r / which component
  size_t pi_scale_idx = 0;
  Rat pi_scale{1};

  BoundaryAlg(const PbvModel& model, Open u);

  int gid(int site, const std::string& dual) const;
  int gen_degree(int g) const { return gens.degs[g]; }

  // boundary fields: (site, L label)
  using Field = std::pair<int, std::string>;
  using FieldTuple = std::vector<Field>;

  // value of a monomial (any ordered generator list) on a field tuple
  Rat eval_list(const std::vector<int>& gen_list, const FieldTuple& t) const;
  Rat eval(const SymVec& v, const FieldTuple& t) const;

  // Chevalley-Eilenberg differential
  SymVec dce_gen(int g) const;
  SymVec d_ce(const SymVec& v) const;

  SymVec mul(const SymVec& a, const SymVec& b) const;

  // generator-level bracket varpi(nu, nu') as an element of Sym^r per r, and
  // its biderivation extension
  SymVec bracket_gen(int i, int j) const;
  SymVec bracket(const SymVec& a, const SymVec& b) const;

  // value-level evaluator of the bracket formula on a field tuple, bypassing
  // the Sym expansion machinery entirely (dual bases, products, sorting)
  Rat bracket_value(const Mono& a, const Mono& b, const FieldTuple& t) const;

  // expansion of a site-local symmetric multilinear functional into Sym^n:
  // candidates lists ordered tuples that cover the support of G
  SymVec expand(int site, const std::function<Rat(const FieldTuple&)>& G,
                const std::vector<FieldTuple>& candidates) const;

  // <nu, Pi^(r)(labels..., nu2)> + (-1)^{|nu||nu2|} <nu2, Pi^(r)(..., nu)>,
  // each weighted by `half`, with the corruption knobs applied
  Rat pair_pi_sym(int r, const std::string& nu, const std::vector<std::string>& labels,
                  const std::string& nu2) const;

 private:
  Rat pair_eff(const std::string& dual, const std::string& field) const;
  mutable std::map<int, SymVec> dce_cache_;
  mutable std::map<std::pair<int, int>, SymVec> br_cache_;
};

}  // namespace hplt
