#pragma once

// Polynomial de Rham model of the interval factor: Q[t] + Q[t]dt on [0,1],
// its Dirichlet subcomplex, the antiderivative operator I, and representable
// duals acting by beta -> integral of rep ^ beta over [0,1].

#include <vector>

#include "hplt/rational.hpp"

namespace hplt {

int poly_degree_cap();  // from HPLT_MAX_POLY_DEGREE, default 64

struct Poly {
  std::vector<Rat> c;  // c[i] * t^i
  Poly() = default;
  Poly(std::initializer_list<Rat> l) : c(l) { trim(); }
  static Poly constant(const Rat& r) { return r == 0 ? Poly{} : Poly{r}; }
  static Poly monomial(int n, const Rat& r = 1);
  void trim();
  bool zero() const { return c.empty(); }
  int deg() const { return (int)c.size() - 1; }  // -1 for zero
  Rat at(const Rat& t) const;
  bool operator==(const Poly&) const = default;
};

Poly operator+(const Poly& a, const Poly& b);
Poly operator-(const Poly& a, const Poly& b);
Poly operator*(const Poly& a, const Poly& b);
Poly operator*(const Rat& r, const Poly& a);
Poly derivative(const Poly& a);
Poly antider0(const Poly& a);           // antiderivative vanishing at 0
Rat definite_integral(const Poly& a);   // over [0,1]

struct PolyForm {
  Poly p;  // zero_part
  Poly q;  // one_part: q(t) dt
  bool zero() const { return p.zero() && q.zero(); }
  bool is_dirichlet() const { return p.at(0) == 0; }
  bool operator==(const PolyForm&) const = default;
};

PolyForm operator+(const PolyForm& a, const PolyForm& b);
PolyForm operator*(const Rat& r, const PolyForm& a);
// graded-commutative product; dt^dt = 0.  deg_a = form degree of a's relevant
// part is tracked per component internally.
PolyForm wedge(const PolyForm& a, const PolyForm& b);
PolyForm de_rham(const PolyForm& a);
Rat integrate(const PolyForm& a);            // integral of the one-part
PolyForm antiderivative_I(const PolyForm& a);  // (p,q dt) -> (antider0 q, 0)
PolyForm ev0_extend(const PolyForm& a);        // constant extension of value at 0

// Dual acting by beta -> integral over [0,1] of representative ^ beta.
// A representative with zero_part g pairs one-forms; one_part r dt pairs
// zero-forms.  Cohomological degree bookkeeping lives with the caller.
struct SmoothDual {
  PolyForm rep;
};

Rat dual_pair(const SmoothDual& phi, const PolyForm& beta);

enum class IntervalOp { DeRham, AntiderivativeI, ConstantExtension, AlphaIntegration };

// Transpose against the pairing: <result, beta> = <phi, op(beta)> for all beta
// (no extra sign; callers supply Koszul signs).  For AntiderivativeI the
// representative is the reversed antiderivative g -> integral from t to 1.
// ConstantExtension consumes a dual and returns the scalar against constants
// as a degenerate dual (rep = c dt is returned for scalar c by AlphaIntegration
// with alpha = dt handled by the caller); see implementation notes.
SmoothDual dual_transpose(IntervalOp op, const SmoothDual& phi,
                          const Poly& alpha_q = Poly{Rat(1)});

}  // namespace hplt
