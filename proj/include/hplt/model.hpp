#pragma once

// Finite-dimensional Poisson BV model over a finite site set: fields L with
// degree-(+1) brackets ell_k, Taylor components Pi^(r) of the bivector, and a
// perfect degree-0 pairing between L^! and L.  All sites carry the same data.

#include <map>
#include <string>
#include <vector>

#include "hplt/rational.hpp"

namespace hplt {

struct BasisElt {
  std::string label;
  int degree = 0;
  int weight = 0;
};

struct EllComp {
  std::vector<std::string> inputs;  // sorted canonical order, in L
  std::string output;               // in L
  Rat coeff;
};

struct PiComp {
  std::vector<std::string> inputs;  // sorted canonical order, in L
  std::string dual_input;           // in L^!
  std::string output;               // in L
  Rat coeff;
};

struct PbvModel {
  std::string name;
  int sites = 1;
  int truncation = 3;
  std::vector<BasisElt> L;
  std::vector<BasisElt> Ldual;
  // <dual, field> entries; perfect, degree 0
  std::map<std::string, std::map<std::string, Rat>> pairing;
  std::map<int, std::vector<EllComp>> ell;  // arity k >= 1
  std::map<int, std::vector<PiComp>> pi;    // r >= 0

  int deg_L(const std::string& l) const;
  int deg_Ldual(const std::string& l) const;
  int weight_L(const std::string& l) const;
  int pos_L(const std::string& l) const;      // position in the L list
  int pos_Ldual(const std::string& l) const;
  Rat pair(const std::string& dual, const std::string& field) const;
  // inverse pairing: field -> sum coeff * dual with <that, field'> = delta
  std::map<std::string, Rat> dual_of_field(const std::string& field) const;
  std::map<std::string, Rat> field_of_dual(const std::string& dual) const;

  // graded-symmetric evaluation of ell_k on an ordered label tuple
  std::map<std::string, Rat> eval_ell(int k, const std::vector<std::string>& in) const;
  // Pi^(r) on ordered L-labels plus one dual label
  std::map<std::string, Rat> eval_pi(int r, const std::vector<std::string>& in,
                                     const std::string& dual) const;
  // same, with the coefficient of component `scale_idx` of pi[scale_r]
  // multiplied by `scale` (used by the negative-control knobs)
  std::map<std::string, Rat> eval_pi_scaled(int r, const std::vector<std::string>& in,
                                            const std::string& dual, int scale_r,
                                            size_t scale_idx, const Rat& scale) const;
  int max_ell_arity() const;
  int max_pi_r() const;
};

// Loads and validates; throws with itemized diagnostics on failure.
PbvModel load_model(const std::string& path);
PbvModel load_model_json(const std::string& json_text);
std::vector<std::string> validate_model(const PbvModel& m);  // empty = valid

// opens are sorted site-index subsets
using Open = std::vector<int>;
std::string open_name(const Open& u);
std::vector<Open> all_opens(int sites);  // nonempty subsets
bool open_subset(const Open& a, const Open& b);
bool open_disjoint(const Open& a, const Open& b);
Open open_union(const Open& a, const Open& b);

}  // namespace hplt
