#include "hplt/model.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace hplt {

using nlohmann::json;

namespace {

bool label_ok(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!(isalnum((unsigned char)c) || c == '_' || c == '\'')) return false;
  return true;
}

// sorts labels by position with Koszul sign; returns 0 on repeated odd label
int sort_labels(std::vector<std::string>& v,
                const std::function<int(const std::string&)>& pos,
                const std::function<int(const std::string&)>& deg) {
  int s = 1;
  for (size_t i = 1; i < v.size(); ++i)
    for (size_t j = i; j > 0 && pos(v[j]) < pos(v[j - 1]); --j) {
      if (deg(v[j]) % 2 != 0 && deg(v[j - 1]) % 2 != 0) s = -s;
      std::swap(v[j], v[j - 1]);
    }
  for (size_t i = 1; i < v.size(); ++i)
    if (v[i] == v[i - 1] && deg(v[i]) % 2 != 0) return 0;
  return s;
}

}  // namespace

int PbvModel::pos_L(const std::string& l) const {
  for (size_t i = 0; i < L.size(); ++i)
    if (L[i].label == l) return (int)i;
  throw std::runtime_error("unknown L basis element: " + l);
}

int PbvModel::pos_Ldual(const std::string& l) const {
  for (size_t i = 0; i < Ldual.size(); ++i)
    if (Ldual[i].label == l) return (int)i;
  throw std::runtime_error("unknown L^! basis element: " + l);
}

int PbvModel::deg_L(const std::string& l) const { return L[pos_L(l)].degree; }
int PbvModel::deg_Ldual(const std::string& l) const { return Ldual[pos_Ldual(l)].degree; }
int PbvModel::weight_L(const std::string& l) const { return L[pos_L(l)].weight; }

Rat PbvModel::pair(const std::string& dual, const std::string& field) const {
  auto it = pairing.find(dual);
  if (it == pairing.end()) return 0;
  auto jt = it->second.find(field);
  return jt == it->second.end() ? Rat(0) : jt->second;
}

std::map<std::string, Rat> PbvModel::dual_of_field(const std::string& field) const {
  // solve <x, field'> = delta_{field,field'} for x in span(Ldual)
  size_t n = L.size();
  std::vector<std::vector<Rat>> M(n, std::vector<Rat>(n, Rat(0)));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) M[i][j] = pair(Ldual[j].label, L[i].label);
  std::vector<Rat> rhs(n, Rat(0));
  rhs[pos_L(field)] = 1;
  // gaussian solve M c = rhs
  for (size_t col = 0; col < n; ++col) {
    size_t piv = col;
    while (piv < n && M[piv][col] == 0) ++piv;
    if (piv == n) throw std::runtime_error("pairing not perfect");
    std::swap(M[piv], M[col]);
    std::swap(rhs[piv], rhs[col]);
    Rat p = M[col][col];
    for (size_t c2 = 0; c2 < n; ++c2) M[col][c2] /= p;
    rhs[col] /= p;
    for (size_t r = 0; r < n; ++r)
      if (r != col && M[r][col] != 0) {
        Rat f = M[r][col];
        for (size_t c2 = 0; c2 < n; ++c2) M[r][c2] -= f * M[col][c2];
        rhs[r] -= f * rhs[col];
      }
  }
  std::map<std::string, Rat> out;
  for (size_t j = 0; j < n; ++j)
    if (rhs[j] != 0) out[Ldual[j].label] = rhs[j];
  return out;
}

std::map<std::string, Rat> PbvModel::field_of_dual(const std::string& dual) const {
  size_t n = L.size();
  std::vector<std::vector<Rat>> M(n, std::vector<Rat>(n, Rat(0)));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) M[i][j] = pair(Ldual[i].label, L[j].label);
  std::vector<Rat> rhs(n, Rat(0));
  rhs[pos_Ldual(dual)] = 1;
  for (size_t col = 0; col < n; ++col) {
    size_t piv = col;
    while (piv < n && M[piv][col] == 0) ++piv;
    if (piv == n) throw std::runtime_error("pairing not perfect");
    std::swap(M[piv], M[col]);
    std::swap(rhs[piv], rhs[col]);
    Rat p = M[col][col];
    for (size_t c2 = 0; c2 < n; ++c2) M[col][c2] /= p;
    rhs[col] /= p;
    for (size_t r = 0; r < n; ++r)
      if (r != col && M[r][col] != 0) {
        Rat f = M[r][col];
        for (size_t c2 = 0; c2 < n; ++c2) M[r][c2] -= f * M[col][c2];
        rhs[r] -= f * rhs[col];
      }
  }
  std::map<std::string, Rat> out;
  for (size_t j = 0; j < n; ++j)
    if (rhs[j] != 0) out[L[j].label] = rhs[j];
  return out;
}

std::map<std::string, Rat> PbvModel::eval_ell(int k, const std::vector<std::string>& in) const {
  std::map<std::string, Rat> out;
  auto it = ell.find(k);
  if (it == ell.end()) return out;
  std::vector<std::string> s = in;
  int sgn = sort_labels(
      s, [this](const std::string& l) { return pos_L(l); },
      [this](const std::string& l) { return deg_L(l); });
  if (sgn == 0) return out;
  for (auto& c : it->second)
    if (c.inputs == s) out[c.output] += Rat(sgn) * c.coeff;
  for (auto it2 = out.begin(); it2 != out.end();)
    it2 = it2->second == 0 ? out.erase(it2) : std::next(it2);
  return out;
}

std::map<std::string, Rat> PbvModel::eval_pi(int r, const std::vector<std::string>& in,
                                             const std::string& dual) const {
  std::map<std::string, Rat> out;
  auto it = pi.find(r);
  if (it == pi.end()) return out;
  std::vector<std::string> s = in;
  int sgn = sort_labels(
      s, [this](const std::string& l) { return pos_L(l); },
      [this](const std::string& l) { return deg_L(l); });
  if (sgn == 0) return out;
  for (auto& c : it->second)
    if (c.inputs == s && c.dual_input == dual) out[c.output] += Rat(sgn) * c.coeff;
  for (auto it2 = out.begin(); it2 != out.end();)
    it2 = it2->second == 0 ? out.erase(it2) : std::next(it2);
  return out;
}

std::map<std::string, Rat> PbvModel::eval_pi_scaled(int r, const std::vector<std::string>& in,
                                                    const std::string& dual, int scale_r,
                                                    size_t scale_idx, const Rat& scale) const {
  std::map<std::string, Rat> out;
  auto it = pi.find(r);
  if (it == pi.end()) return out;
  std::vector<std::string> s = in;
  int sgn = sort_labels(
      s, [this](const std::string& l) { return pos_L(l); },
      [this](const std::string& l) { return deg_L(l); });
  if (sgn == 0) return out;
  for (size_t i = 0; i < it->second.size(); ++i) {
    auto& c = it->second[i];
    if (c.inputs == s && c.dual_input == dual) {
      Rat co = c.coeff;
      if (r == scale_r && i == scale_idx) co *= scale;
      out[c.output] += Rat(sgn) * co;
    }
  }
  for (auto it2 = out.begin(); it2 != out.end();)
    it2 = it2->second == 0 ? out.erase(it2) : std::next(it2);
  return out;
}

int PbvModel::max_ell_arity() const {
  int m = 0;
  for (auto& [k, v] : ell)
    if (!v.empty()) m = std::max(m, k);
  return m;
}

int PbvModel::max_pi_r() const {
  int m = -1;
  for (auto& [r, v] : pi)
    if (!v.empty()) m = std::max(m, r);
  return m;
}

PbvModel load_model_json(const std::string& text) {
  json j = json::parse(text);
  PbvModel m;
  m.name = j.value("name", "unnamed");
  m.sites = j.value("sites", 1);
  m.truncation = j.value("truncation", 3);
  for (auto& e : j.at("space").at("L"))
    m.L.push_back({e.at("label").get<std::string>(), e.at("degree").get<int>(),
                   e.value("weight", 0)});
  for (auto& e : j.at("space").at("Ldual"))
    m.Ldual.push_back({e.at("label").get<std::string>(), e.at("degree").get<int>(), 0});
  for (auto& e : j.at("pairing"))
    m.pairing[e.at("dual").get<std::string>()][e.at("field").get<std::string>()] =
        rat_parse(e.at("coeff").get<std::string>());
  if (j.count("ell"))
    for (auto& [k, comps] : j.at("ell").items())
      for (auto& c : comps) {
        EllComp ec;
        for (auto& i : c.at("inputs")) ec.inputs.push_back(i.get<std::string>());
        ec.output = c.at("output").get<std::string>();
        ec.coeff = rat_parse(c.at("coeff").get<std::string>());
        m.ell[std::stoi(k)].push_back(ec);
      }
  if (j.count("pi"))
    for (auto& [r, comps] : j.at("pi").items())
      for (auto& c : comps) {
        PiComp pc;
        for (auto& i : c.at("inputs")) pc.inputs.push_back(i.get<std::string>());
        pc.dual_input = c.at("dual_input").get<std::string>();
        pc.output = c.at("output").get<std::string>();
        pc.coeff = rat_parse(c.at("coeff").get<std::string>());
        m.pi[std::stoi(r)].push_back(pc);
      }
  // canonicalize component input order
  for (auto& [k, comps] : m.ell)
    for (auto& c : comps) {
      int s = sort_labels(
          c.inputs, [&m](const std::string& l) { return m.pos_L(l); },
          [&m](const std::string& l) { return m.deg_L(l); });
      if (s == 0)
        c.coeff = 0;
      else
        c.coeff *= s;
    }
  for (auto& [r, comps] : m.pi)
    for (auto& c : comps) {
      int s = sort_labels(
          c.inputs, [&m](const std::string& l) { return m.pos_L(l); },
          [&m](const std::string& l) { return m.deg_L(l); });
      if (s == 0)
        c.coeff = 0;
      else
        c.coeff *= s;
    }
  auto errs = validate_model(m);
  if (!errs.empty()) {
    std::ostringstream os;
    os << "model validation failed:";
    for (auto& e : errs) os << "\n  - " << e;
    throw std::runtime_error(os.str());
  }
  return m;
}

PbvModel load_model(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open model file: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return load_model_json(ss.str());
}

std::vector<std::string> validate_model(const PbvModel& m) {
  std::vector<std::string> errs;
  auto err = [&](const std::string& s) { errs.push_back(s); };
  if (m.sites < 1) err("sites must be >= 1");
  if (m.truncation < 0) err("truncation must be >= 0");
  std::map<std::string, int> seen;
  for (auto& e : m.L) {
    if (!label_ok(e.label)) err("bad L label: " + e.label);
    if (seen[e.label]++) err("duplicate L label: " + e.label);
    if (e.weight < 0) err("negative weight on " + e.label);
  }
  for (auto& e : m.Ldual) {
    if (!label_ok(e.label)) err("bad L^! label: " + e.label);
    if (seen[e.label]++) err("duplicate label: " + e.label);
  }
  if (m.L.size() != m.Ldual.size()) {
    err("dim L^! != dim L");
    return errs;
  }
  // pairing: degree 0 entries, perfect
  for (auto& [d, row] : m.pairing)
    for (auto& [f, c] : row) {
      if (c == 0) continue;
      bool okd = false, okf = false;
      for (auto& e : m.Ldual) okd |= e.label == d;
      for (auto& e : m.L) okf |= e.label == f;
      if (!okd || !okf) {
        err("pairing references unknown labels " + d + ", " + f);
        continue;
      }
      if (m.deg_Ldual(d) + m.deg_L(f) != 0)
        err("pairing entry <" + d + ", " + f + "> has nonzero degree");
    }
  try {
    for (auto& e : m.L) (void)m.dual_of_field(e.label);
  } catch (const std::exception&) {
    err("pairing is not perfect");
  }
  // ell_k: degree +1, valid labels
  for (auto& [k, comps] : m.ell) {
    if (k < 1) err("ell arity must be >= 1");
    for (auto& c : comps) {
      if (c.coeff == 0) continue;
      if ((int)c.inputs.size() != k) {
        err("ell_" + std::to_string(k) + " component with wrong arity");
        continue;
      }
      int dsum = 1;
      bool ok = true;
      for (auto& i : c.inputs) {
        try {
          dsum += m.deg_L(i);
        } catch (...) {
          err("ell references unknown input " + i);
          ok = false;
        }
      }
      try {
        if (ok && m.deg_L(c.output) != dsum)
          err("ell_" + std::to_string(k) + " component (" + c.output +
              ") violates degree +1");
      } catch (...) {
        err("ell references unknown output " + c.output);
      }
      if (ok && k >= 2) {
        int wsum = 0;
        for (auto& i : c.inputs) wsum += m.weight_L(i);
        if (m.weight_L(c.output) >= wsum)
          err("ell_" + std::to_string(k) + " component (" + c.output +
              ") does not strictly drop weight");
      }
    }
  }
  // ell_1 squared = 0
  if (m.ell.count(1)) {
    for (auto& e : m.L) {
      std::map<std::string, Rat> dd;
      for (auto& [o, c] : m.eval_ell(1, {e.label}))
        for (auto& [o2, c2] : m.eval_ell(1, {o})) dd[o2] += c * c2;
      for (auto& [o, c] : dd)
        if (c != 0) err("ell_1^2 != 0 on " + e.label);
    }
  }
  // Pi^(r): degree +1, symmetric storage, weight rule
  for (auto& [r, comps] : m.pi) {
    if (r < 0) err("pi index must be >= 0");
    for (auto& c : comps) {
      if (c.coeff == 0) continue;
      if ((int)c.inputs.size() != r) {
        err("pi^" + std::to_string(r) + " component with wrong arity");
        continue;
      }
      int dsum = 1;
      bool ok = true;
      for (auto& i : c.inputs) {
        try {
          dsum += m.deg_L(i);
        } catch (...) {
          err("pi references unknown input " + i);
          ok = false;
        }
      }
      try {
        dsum += m.deg_Ldual(c.dual_input);
      } catch (...) {
        err("pi references unknown dual input " + c.dual_input);
        ok = false;
      }
      try {
        if (ok && m.deg_L(c.output) != dsum)
          err("pi^" + std::to_string(r) + " component (" + c.output +
              ") violates degree +1");
      } catch (...) {
        err("pi references unknown output " + c.output);
      }
      if (ok && r >= 1)
        for (auto& i : c.inputs)
          if (m.weight_L(i) < 1)
            err("pi^" + std::to_string(r) +
                " has a weight-0 input (" + i + "); r >= 1 inputs need weight >= 1");
    }
  }
  return errs;
}

std::string open_name(const Open& u) {
  std::string s = "{";
  for (size_t i = 0; i < u.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(u[i]);
  }
  return s + "}";
}

std::vector<Open> all_opens(int sites) {
  std::vector<Open> out;
  for (int mask = 1; mask < (1 << sites); ++mask) {
    Open u;
    for (int i = 0; i < sites; ++i)
      if (mask & (1 << i)) u.push_back(i);
    out.push_back(u);
  }
  std::sort(out.begin(), out.end(), [](const Open& a, const Open& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  return out;
}

bool open_subset(const Open& a, const Open& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

bool open_disjoint(const Open& a, const Open& b) {
  Open inter;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(inter));
  return inter.empty();
}

Open open_union(const Open& a, const Open& b) {
  Open u;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(u));
  return u;
}

}  // namespace hplt
