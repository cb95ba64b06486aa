#pragma once

// Free graded-symmetric algebra over a finite generator set, with monomials
// represented as sorted id vectors.  Provides derivation extensions of
// generator-level maps, algebra-map extensions, and the symmetrized
// tensor-trick homotopy for an SDR whose projector is diagonal on generators.

#include <functional>

#include "hplt/core.hpp"

namespace hplt {

struct SymGens {
  std::vector<std::string> labels;
  std::vector<int> degs;
  std::vector<char> is_w0;  // generator lies in the image of iota
  std::map<std::string, int> index;

  int add(const std::string& label, int deg, bool w0);
  int dim() const { return (int)labels.size(); }
};

using Mono = std::vector<int>;  // sorted generator ids; empty = unit

std::string mono_label(const SymGens& g, const Mono& m);
Mono mono_parse(const SymGens& g, const std::string& label);
int mono_degree(const SymGens& g, const Mono& m);

// Sorts `ids` in place, returns the Koszul sign (0 when a repeated odd
// generator makes the monomial vanish).
int mono_sort(const SymGens& g, Mono& ids);

// Sparse element of the symmetric algebra, keyed by monomial label.
using SymVec = Vec;

void sym_insert(const SymGens& g, SymVec& v, Mono ids, const Rat& c);

// Product of two monomial-keyed vectors.
SymVec sym_mul(const SymGens& g, const SymVec& a, const SymVec& b);

// Generator-level map id -> element of the algebra (possibly non-linear,
// e.g. a Chevalley-Eilenberg differential), with odd/even parity `op_parity`.
// Extends as a (co)derivation: F(x1...xn) = sum_i +- x1..F(xi)..xn.
using GenMap = std::function<SymVec(int)>;
SymVec derivation_apply(const SymGens& g, const GenMap& f, int op_parity, const Mono& m);

// Algebra-map extension of a generator-level assignment into another algebra.
SymVec algebra_map_apply(const SymGens& src, const SymGens& tgt,
                         const std::function<SymVec(int)>& on_gen, const Mono& m);

// Symmetrized tensor-trick homotopy: given eta on generators (degree -1,
// vanishing on w0 generators, image in the non-w0 span), the induced homotopy
// on Sym is proj o (sum_i P x..x P x eta x 1 x..x 1) o incl where P is the
// diagonal projector onto w0 generators.  Satisfies all SDR side conditions
// whenever the generator-level eta does.
SymVec sym_homotopy(const SymGens& g, const GenMap& eta_gen, const Mono& m);

// Enumerates every monomial of symmetric degree <= K.
std::vector<Mono> enumerate_monos(const SymGens& g, int K);

// Biderivation extension of a degree-+1 pairing kappa(gi, gj) on generators:
// bracket(a, b) = sum_{i,j} +- kappa(ai, bj) (a/ai)(b/bj).
using GenPairing = std::function<Rat(int, int)>;
SymVec sym_bracket(const SymGens& g, const GenPairing& kappa, const Mono& a, const Mono& b);

// Same extension scheme for a generator-level bracket with values in the
// algebra (degree +1): bracket(a,b) = sum_{i,j} +- (a/ai) B(ai,bj) (b/bj).
using GenBracket = std::function<SymVec(int, int)>;
SymVec sym_bracket_gen(const SymGens& g, const GenBracket& B, const Mono& a, const Mono& b);

}  // namespace hplt
