#pragma once

#include <gmpxx.h>
#include <stdexcept>
#include <string>

namespace hplt {

using Rat = mpq_class;

inline std::string rat_str(const Rat& r) {
  Rat c = r;
  c.canonicalize();
  return c.get_str();
}

// Parses "p", "-p", or "p/q" with q != 0.
inline Rat rat_parse(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  Rat r;
  if (r.set_str(s, 10) != 0)
    throw std::invalid_argument("bad rational literal: " + s);
  if (r.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
  r.canonicalize();
  return r;
}

inline int sign_pow(long e) { return (e % 2 == 0) ? 1 : -1; }

}  // namespace hplt
