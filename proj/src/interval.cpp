#include "hplt/interval.hpp"

#include <cstdlib>
#include <stdexcept>

namespace hplt {

int poly_degree_cap() {
  static int cap = [] {
    const char* e = std::getenv("HPLT_MAX_POLY_DEGREE");
    return e ? std::atoi(e) : 64;
  }();
  return cap;
}

static void check_cap(const Poly& a) {
  if (a.deg() > poly_degree_cap())
    throw std::runtime_error("polynomial degree cap exceeded (HPLT_MAX_POLY_DEGREE)");
}

Poly Poly::monomial(int n, const Rat& r) {
  Poly p;
  if (r == 0) return p;
  p.c.assign(n + 1, Rat(0));
  p.c[n] = r;
  return p;
}

void Poly::trim() {
  while (!c.empty() && c.back() == 0) c.pop_back();
}

Rat Poly::at(const Rat& t) const {
  Rat v = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * t + *it;
  return v;
}

Poly operator+(const Poly& a, const Poly& b) {
  Poly r = a;
  if (r.c.size() < b.c.size()) r.c.resize(b.c.size(), Rat(0));
  for (size_t i = 0; i < b.c.size(); ++i) r.c[i] += b.c[i];
  r.trim();
  return r;
}

Poly operator-(const Poly& a, const Poly& b) { return a + Rat(-1) * b; }

Poly operator*(const Poly& a, const Poly& b) {
  Poly r;
  if (a.zero() || b.zero()) return r;
  r.c.assign(a.c.size() + b.c.size() - 1, Rat(0));
  for (size_t i = 0; i < a.c.size(); ++i)
    for (size_t j = 0; j < b.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
  r.trim();
  check_cap(r);
  return r;
}

Poly operator*(const Rat& r, const Poly& a) {
  Poly out;
  if (r == 0) return out;
  out.c = a.c;
  for (auto& x : out.c) x *= r;
  out.trim();
  return out;
}

Poly derivative(const Poly& a) {
  Poly r;
  if (a.c.size() <= 1) return r;
  r.c.resize(a.c.size() - 1);
  for (size_t i = 1; i < a.c.size(); ++i) r.c[i - 1] = Rat((long)i) * a.c[i];
  r.trim();
  return r;
}

Poly antider0(const Poly& a) {
  Poly r;
  if (a.zero()) return r;
  r.c.assign(a.c.size() + 1, Rat(0));
  for (size_t i = 0; i < a.c.size(); ++i) r.c[i + 1] = a.c[i] / Rat((long)(i + 1));
  r.trim();
  check_cap(r);
  return r;
}

Rat definite_integral(const Poly& a) {
  Rat v = 0;
  for (size_t i = 0; i < a.c.size(); ++i) v += a.c[i] / Rat((long)(i + 1));
  return v;
}

PolyForm operator+(const PolyForm& a, const PolyForm& b) { return {a.p + b.p, a.q + b.q}; }
PolyForm operator*(const Rat& r, const PolyForm& a) { return {r * a.p, r * a.q}; }

PolyForm wedge(const PolyForm& a, const PolyForm& b) {
  // (p_a + q_a dt)(p_b + q_b dt) = p_a p_b + (p_a q_b + q_a p_b) dt
  // q_a dt ^ p_b picks up no sign: dt moves past the 0-form p_b.
  return {a.p * b.p, a.p * b.q + a.q * b.p};
}

PolyForm de_rham(const PolyForm& a) { return {Poly{}, derivative(a.p)}; }

Rat integrate(const PolyForm& a) { return definite_integral(a.q); }

PolyForm antiderivative_I(const PolyForm& a) { return {antider0(a.q), Poly{}}; }

PolyForm ev0_extend(const PolyForm& a) { return {Poly::constant(a.p.at(0)), Poly{}}; }

Rat dual_pair(const SmoothDual& phi, const PolyForm& beta) {
  // integral of rep ^ beta; only the total-degree-1 part contributes
  return definite_integral(phi.rep.p * beta.q) + definite_integral(phi.rep.q * beta.p);
}

SmoothDual dual_transpose(IntervalOp op, const SmoothDual& phi, const Poly& alpha_q) {
  const Poly& g = phi.rep.p;
  const Poly& r = phi.rep.q;
  switch (op) {
    case IntervalOp::DeRham: {
      // <out, beta> = <phi, d beta> = int g * p' dt = -int g' p dt  (needs
      // vanishing boundary values of g; otherwise the transpose leaves the
      // representable class)
      if (g.at(0) != 0 || g.at(1) != 0)
        throw std::runtime_error(
            "dual_transpose(de_rham): representative does not vanish at the "
            "boundary; transpose leaves the representable class");
      return {{Poly{}, Rat(-1) * derivative(g)}};
    }
    case IntervalOp::AntiderivativeI: {
      // <out, beta> = <phi, I beta> = int r(t) (int_0^t q) dt
      //             = int q(t) (int_t^1 r) dt
      Poly R = antider0(r);                          // int_0^t r
      Poly rev = Poly::constant(definite_integral(r)) - R;  // int_t^1 r
      return {{rev, Poly{}}};
    }
    case IntervalOp::ConstantExtension: {
      // op: scalars -> constant 0-forms; transpose: dual -> scalar c = int r.
      // Scalars are encoded as constant one-part representatives.
      return {{Poly{}, Poly::constant(definite_integral(r))}};
    }
    case IntervalOp::AlphaIntegration: {
      // op: forms -> scalars, beta -> int alpha ^ beta; transpose of the
      // scalar c (encoded as above) is c * alpha.
      Rat c = definite_integral(r);
      return {{Poly{}, c * alpha_q}};
    }
  }
  throw std::logic_error("unreachable");
}

}  // namespace hplt
