#pragma once

// Strong deformation retracts, verification, the symmetric-power extension
// trick, and the homological perturbation lemma with graded termination
// certificates.

#include <functional>

#include "hplt/core.hpp"

namespace hplt {

struct Sdr {
  CochainComplex big;
  CochainComplex small;
  LinearBlockMap iota;  // small -> big, degree 0
  LinearBlockMap pi;    // big -> small, degree 0
  LinearBlockMap eta;   // big -> big, degree -1
};

struct SdrCheck {
  std::string identity;
  bool pass;
  std::string witness;  // offending basis label when failing
};

struct SdrReport {
  std::vector<SdrCheck> checks;
  bool all_pass() const;
};

// Checks pi iota = id, [d, eta] = id - iota pi, eta^2 = pi eta = eta iota = 0
// on every basis vector.  Failures are data, not exceptions.
SdrReport verify_sdr(const Sdr& s);

struct Perturbation {
  LinearBlockMap delta;  // degree +1 on big
  // bidegree (k, l) of every big basis label
  std::function<std::pair<int, int>(const std::string&)> grading;
  // termination bound per (k, l); default k + 2l + 1
  std::function<int(int, int)> nilpotence_bound;
};

struct SmallnessCertificate {
  // per occupied (k, l): measured exponent p with (delta eta)^p = 0
  std::map<std::pair<int, int>, int> exponents;
};

// Iterates (delta eta)^p on each occupied bidegree until zero; throws a
// smallness violation when a bound is exceeded.
SmallnessCertificate check_smallness(const Sdr& s, const Perturbation& p);

struct Perturbed {
  Sdr sdr;                    // with big.d = d + delta, small.d = d + delta_B
  LinearBlockMap delta_small;  // delta_B alone
  SmallnessCertificate certificate;
};

// Homological perturbation lemma: iota' = sum (eta delta)^p iota,
// pi' = pi sum (delta eta)^p, eta' = eta sum (delta eta)^p,
// delta_B = pi sum (delta eta)^p delta iota.  Output verified.
Perturbed perturb(const Sdr& s, const Perturbation& p);

// Symmetric-power extension: from an SDR on V, an SDR between the duals of
// the symmetric powers Sym^{<=K} of the duals of big and small; iota and pi
// are algebra maps, eta is the slot-averaged extension of the dual homotopy.
Sdr sym_extend(const Sdr& s, int K);

}  // namespace hplt
