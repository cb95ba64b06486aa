#pragma once

// Rooted trees labeled by the generating operations of the colored operad
// (products mu_U, brackets varpi_U, structure maps m), enumeration of
// isomorphism classes in canonical nonplanar form, D-degree accounting, and
// evaluation of homotopy-transferred operations by the leaf-iota / vertex-op /
// edge-eta / root-pi recipe.

#include <memory>

#include "hplt/bulk.hpp"

namespace hplt {

enum class GenKind { M, Mu, Varpi };

struct OperadGenerator {
  GenKind kind;
  std::vector<Open> in_colors;
  Open out_color;
};

struct TreeNode {
  bool leaf = false;
  int leaf_index = 0;  // input slot, 0-based
  OperadGenerator op;  // vertices only
  std::vector<TreeNode> children;
  int power = 0;  // integer label: the power of (eta delta) on the edge above
};

struct LabeledTree {
  TreeNode root;
  std::vector<Open> leaf_colors;
  Open out_color;
};

std::string tree_encode(const TreeNode& n);  // canonical nested-parens form
int tree_vertices(const TreeNode& n);
int tree_edges(const TreeNode& n);  // internal edges = vertices - 1

// all isomorphism classes of color-consistent trees with 1..max_vertices
// vertices whose vertex labels are generators {m_U^V, m_{U1,U2}^{U1|_|U2},
// mu_U, varpi_U}; no integer labels assigned
std::vector<LabeledTree> enumerate_trees(const std::vector<Open>& leaf_colors, const Open& out,
                                         int max_vertices);

struct DegreeAccount {
  int d_total = 0;     // sum of D_v over vertices (varpi: 1, mu/m: 0)
  int edges = 0;       // internal edges
  int r_required = 0;  // unique r solving |E| + r - sum D_v = 0
  int ell_bound = 0;   // upper bound -|E| on the ell-degree of the operation
  bool forced_zero = false;
};
DegreeAccount degree_account(const LabeledTree& t);

// pool of bulk algebras over one model, keyed by open
struct BulkContext {
  const PbvModel* m;
  int M;
  int trunc_K;
  std::map<std::string, std::shared_ptr<BulkAlg>> pool;
  std::function<void(BulkAlg&)> configure;  // applied once per freshly built open
  BulkContext(const PbvModel& model, int M_, int K) : m(&model), M(M_), trunc_K(K) {}
  BulkAlg& at(const Open& u);
};

// move a bulk element along the generator-label-preserving inclusion
SymVec include_bulk(const BulkAlg& src, const BulkAlg& tgt, const SymVec& v);

// transferred operation of a labeled tree on boundary inputs (one homogeneous
// element per leaf color).  `to_bulk` gives the infinity-morphism variant
// (eta at the root, value in the bulk algebra over `out`).
SymVec transfer_tree(const LabeledTree& t, BulkContext& ctx, const std::vector<SymVec>& inputs,
                     bool to_bulk = false);

}  // namespace hplt
