#include "hplt/trees.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace hplt {

static std::string color_str(const Open& u) { return open_name(u); }

std::string tree_encode(const TreeNode& n) {
  if (n.leaf) return "L" + std::to_string(n.leaf_index) + "^" + std::to_string(n.power);
  std::string k = n.op.kind == GenKind::M ? "m" : n.op.kind == GenKind::Mu ? "mu" : "vp";
  std::string cols = "{";
  for (auto& c : n.op.in_colors) cols += color_str(c) + ",";
  cols += ";" + color_str(n.op.out_color) + "}";
  std::vector<std::string> enc;
  for (auto& c : n.children) enc.push_back(tree_encode(c));
  std::sort(enc.begin(), enc.end());
  std::string out = k + cols + "(";
  for (auto& e : enc) out += e + ",";
  return out + ")^" + std::to_string(n.power);
}

int tree_vertices(const TreeNode& n) {
  if (n.leaf) return 0;
  int c = 1;
  for (auto& ch : n.children) c += tree_vertices(ch);
  return c;
}

int tree_edges(const TreeNode& n) { return std::max(0, tree_vertices(n) - 1); }

// ---- enumeration ----

namespace {

// nonempty strict sub-opens of v
std::vector<Open> strict_subopens(const Open& v) {
  std::vector<Open> out;
  int n = (int)v.size();
  for (int mask = 1; mask < (1 << n) - 1; ++mask) {
    Open u;
    for (int i = 0; i < n; ++i)
      if (mask & (1 << i)) u.push_back(v[i]);
    out.push_back(u);
  }
  return out;
}

struct Enumerator {
  const std::vector<Open>* leaf_colors;

  // subtrees on leaf set `s` (sorted indices) with output color v and at most
  // `budget` vertices; if allow_leaf, the bare leaf counts when colors agree
  std::vector<TreeNode> gen(const std::vector<int>& s, const Open& v, int budget,
                            bool allow_leaf) const {
    std::vector<TreeNode> out;
    std::set<std::string> seen;
    auto push = [&](TreeNode t) {
      if (seen.insert(tree_encode(t)).second) out.push_back(std::move(t));
    };
    if (allow_leaf && s.size() == 1 && (*leaf_colors)[s[0]] == v) {
      TreeNode l;
      l.leaf = true;
      l.leaf_index = s[0];
      push(std::move(l));
    }
    if (budget < 1 || s.empty()) return out;
    // binary vertices mu_V / varpi_V: split s into two nonempty parts
    if (s.size() >= 2) {
      int n = (int)s.size();
      for (int mask = 1; mask < (1 << n) - 1; ++mask) {
        std::vector<int> s1, s2;
        for (int i = 0; i < n; ++i) ((mask >> i) & 1 ? s1 : s2).push_back(s[i]);
        for (auto& c1 : gen(s1, v, budget - 1, true))
          for (auto& c2 : gen(s2, v, budget - 1, true)) {
            if (tree_vertices(c1) + tree_vertices(c2) + 1 > budget) continue;
            for (GenKind k : {GenKind::Mu, GenKind::Varpi}) {
              TreeNode t;
              t.op = {k, {v, v}, v};
              t.children = {c1, c2};
              push(std::move(t));
            }
          }
      }
    }
    // unary m_U^V for U strictly inside V
    for (auto& u : strict_subopens(v))
      for (auto& c : gen(s, u, budget - 1, true)) {
        TreeNode t;
        t.op = {GenKind::M, {u}, v};
        t.children = {c};
        push(std::move(t));
      }
    // binary m_{U1,U2}^{U1|_|U2} with V = U1 |_| U2
    if (v.size() >= 2 && s.size() >= 2) {
      for (auto& u1 : strict_subopens(v)) {
        Open u2;
        std::set_difference(v.begin(), v.end(), u1.begin(), u1.end(), std::back_inserter(u2));
        int n = (int)s.size();
        for (int mask = 1; mask < (1 << n) - 1; ++mask) {
          std::vector<int> s1, s2;
          for (int i = 0; i < n; ++i) ((mask >> i) & 1 ? s1 : s2).push_back(s[i]);
          for (auto& c1 : gen(s1, u1, budget - 1, true))
            for (auto& c2 : gen(s2, u2, budget - 1, true)) {
              if (tree_vertices(c1) + tree_vertices(c2) + 1 > budget) continue;
              TreeNode t;
              t.op = {GenKind::M, {u1, u2}, v};
              t.children = {c1, c2};
              push(std::move(t));
            }
        }
      }
    }
    return out;
  }
};

}  // namespace

std::vector<LabeledTree> enumerate_trees(const std::vector<Open>& leaf_colors, const Open& out,
                                         int max_vertices) {
  Enumerator e{&leaf_colors};
  std::vector<int> s(leaf_colors.size());
  for (size_t i = 0; i < s.size(); ++i) s[i] = (int)i;
  std::vector<LabeledTree> res;
  for (auto& t : e.gen(s, out, max_vertices, false)) res.push_back({t, leaf_colors, out});
  return res;
}

// ---- degree accounting ----

static void account(const TreeNode& n, int& dv, int& r) {
  if (n.leaf) {
    r += n.power;
    return;
  }
  r += n.power;
  if (n.op.kind == GenKind::Varpi) dv += 1;
  for (auto& c : n.children) account(c, dv, r);
}

DegreeAccount degree_account(const LabeledTree& t) {
  DegreeAccount a;
  int r_given = 0;
  account(t.root, a.d_total, r_given);
  r_given -= t.root.power;  // the root half-edge carries pi, no power label
  a.edges = tree_edges(t.root);
  a.r_required = a.d_total - a.edges;
  a.ell_bound = -a.edges;
  // nonzero needs |E| + r = sum D_v with r >= 0, and ell-degree 0 <= -|E|
  a.forced_zero = a.edges > 0 || a.r_required < 0;
  return a;
}

// ---- evaluation ----

BulkAlg& BulkContext::at(const Open& u) {
  std::string key = open_name(u);
  auto it = pool.find(key);
  if (it == pool.end()) {
    auto b = std::make_shared<BulkAlg>(*m, u, M);
    b->trunc_K = trunc_K;
    if (configure) configure(*b);
    it = pool.emplace(key, std::move(b)).first;
  }
  return *it->second;
}

SymVec include_bulk(const BulkAlg& src, const BulkAlg& tgt, const SymVec& v) {
  SymVec out;
  for (auto& [lab, c] : v) {
    Mono ms = mono_parse(src.gens, lab), mt;
    for (int id : ms) mt.push_back(tgt.gens.index.at(src.gens.labels[id]));
    sym_insert(tgt.gens, out, std::move(mt), c);
  }
  return out;
}

namespace {

struct EvalRes {
  SymVec val;
  int parity = 0;            // parity of the operator composite
  std::vector<int> leaves;   // leaf indices in left-to-right order
};

int sym_degree(const SymGens& g, const SymVec& v) {
  int d = 0;
  bool first = true;
  for (auto& [lab, c] : v) {
    int dm = mono_degree(g, mono_parse(g, lab));
    if (first) {
      d = dm;
      first = false;
    } else if (dm != d)
      throw std::runtime_error("tree evaluation needs homogeneous inputs");
  }
  return d;
}

struct TreeEval {
  BulkContext* ctx;
  const std::vector<SymVec>* inputs;
  const std::vector<Open>* leaf_colors;
  std::vector<int> in_degs;

  EvalRes eval(const TreeNode& n) const {
    if (n.leaf) {
      auto& A = ctx->at((*leaf_colors)[n.leaf_index]);
      return {A.iota_p((*inputs)[n.leaf_index]), 0, {n.leaf_index}};
    }
    auto& A = ctx->at(n.op.out_color);
    // evaluate children; tensor-composite Koszul signs
    std::vector<EvalRes> ch;
    for (auto& c : n.children) ch.push_back(eval(c));
    long sgn = 0;
    int pre_deg = 0;
    for (auto& c : ch) {
      int xdeg = 0;
      for (int l : c.leaves) xdeg += in_degs[l];
      sgn += (long)c.parity * pre_deg;
      pre_deg += xdeg;
    }
    // unshuffle of the global input order into child groups
    std::vector<int> order;
    for (auto& c : ch) order.insert(order.end(), c.leaves.begin(), c.leaves.end());
    for (size_t i = 0; i < order.size(); ++i)
      for (size_t j = i + 1; j < order.size(); ++j)
        if (order[i] > order[j]) sgn += (long)in_degs[order[i]] * in_degs[order[j]];
    // apply edge homotopies on non-leaf children, then the vertex operation
    int parity = 0;
    std::vector<SymVec> vals;
    for (size_t i = 0; i < ch.size(); ++i) {
      SymVec v = ch[i].val;
      if (!n.children[i].leaf) {
        auto& Ac = ctx->at(n.children[i].op.out_color);
        // sign of the odd eta passing the earlier children's inputs
        int pre = 0;
        for (size_t j = 0; j < i; ++j)
          for (int l : ch[j].leaves) pre += in_degs[l];
        // eta also passes the earlier operator composites? composites applied
        // slotwise; only input degrees matter in the tensor formula
        sgn += (long)(1) * pre;
        v = Ac.eta_p(v);
        parity += 1 + ch[i].parity;
      } else
        parity += ch[i].parity;
      vals.push_back(std::move(v));
    }
    SymVec out;
    if (n.op.kind == GenKind::Mu) {
      out = A.mul(vals[0], vals[1]);
    } else if (n.op.kind == GenKind::Varpi) {
      out = A.bracket(vals[0], vals[1]);
      parity += 1;
    } else if (n.op.in_colors.size() == 1) {
      out = include_bulk(ctx->at(n.op.in_colors[0]), A, vals[0]);
    } else {
      SymVec a = include_bulk(ctx->at(n.op.in_colors[0]), A, vals[0]);
      SymVec b = include_bulk(ctx->at(n.op.in_colors[1]), A, vals[1]);
      out = A.mul(a, b);
    }
    if (sgn & 1) {
      for (auto& [lab, c] : out) out[lab] = c * Rat(-1);
    }
    EvalRes r;
    r.val = std::move(out);
    r.parity = parity;
    r.leaves = std::move(order);
    return r;
  }
};

}  // namespace

SymVec transfer_tree(const LabeledTree& t, BulkContext& ctx, const std::vector<SymVec>& inputs,
                     bool to_bulk) {
  if (inputs.size() != t.leaf_colors.size())
    throw std::runtime_error("tree arity does not match the number of inputs");
  TreeEval ev{&ctx, &inputs, &t.leaf_colors, {}};
  for (size_t i = 0; i < inputs.size(); ++i) {
    auto& A = ctx.at(t.leaf_colors[i]);
    ev.in_degs.push_back(sym_degree(A.bdy().gens, inputs[i]));
  }
  auto& Ao = ctx.at(t.out_color);
  if (t.root.leaf) {
    // trivial tree: the infinity-morphism component is iota itself
    SymVec lifted = ctx.at(t.leaf_colors[t.root.leaf_index]).iota_p(inputs[t.root.leaf_index]);
    if (!to_bulk) return Ao.pi_p(include_bulk(ctx.at(t.leaf_colors[t.root.leaf_index]), Ao, lifted));
    return include_bulk(ctx.at(t.leaf_colors[t.root.leaf_index]), Ao, lifted);
  }
  EvalRes r = ev.eval(t.root);
  if (t.root.op.out_color != t.out_color)
    throw std::runtime_error("tree output color mismatch");
  return to_bulk ? Ao.eta_p(r.val) : Ao.pi_p(r.val);
}

}  // namespace hplt
