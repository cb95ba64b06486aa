#pragma once

// Exact-rational graded linear algebra over basis labels: graded spaces,
// degree-shifting block maps, cochain complexes, tensor and symmetric powers.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hplt/rational.hpp"

namespace hplt {

// Sparse vector keyed by basis label.  std::map keeps iteration deterministic.
using Vec = std::map<std::string, Rat>;

void vec_add(Vec& a, const Vec& b, const Rat& c = 1);
inline bool vec_zero(const Vec& v) { return v.empty(); }
void vec_insert(Vec& v, const std::string& label, const Rat& c);

struct GradedSpace {
  // gens in fixed enumeration order; label -> (degree, position)
  std::vector<std::string> order;
  std::map<std::string, int> degree;

  void add(const std::string& label, int deg);
  bool has(const std::string& label) const { return degree.count(label) > 0; }
  int deg(const std::string& label) const;
  int dim() const { return (int)order.size(); }
  int dim_in_degree(int d) const;
  std::vector<std::string> labels_in_degree(int d) const;
  int degree_of_vec(const Vec& v) const;  // throws if inhomogeneous
};

using SpacePtr = std::shared_ptr<const GradedSpace>;

// Linear map of fixed cohomological degree, stored column-wise against labels.
struct LinearBlockMap {
  SpacePtr source, target;
  int map_degree = 0;
  std::map<std::string, Vec> cols;  // source label -> image

  LinearBlockMap() = default;
  LinearBlockMap(SpacePtr s, SpacePtr t, int d) : source(s), target(t), map_degree(d) {}

  void set(const std::string& src, const Vec& img);
  void add(const std::string& src, const std::string& tgt, const Rat& c);
  Vec apply_label(const std::string& src) const;
  Vec apply(const Vec& v) const;
  bool is_zero() const;
  LinearBlockMap scaled(const Rat& c) const;
};

LinearBlockMap identity_map(SpacePtr s);
LinearBlockMap zero_map(SpacePtr s, SpacePtr t, int d);
LinearBlockMap compose(const LinearBlockMap& f, const LinearBlockMap& g);  // f after g
LinearBlockMap map_sum(const LinearBlockMap& f, const LinearBlockMap& g, const Rat& cg = 1);
bool map_equal(const LinearBlockMap& f, const LinearBlockMap& g);

// Tensor product space; labels joined with '&'.
SpacePtr tensor_space(SpacePtr a, SpacePtr b);
// (f (x) g)(x (x) y) = (-1)^{deg(g) deg(x)} f(x) (x) g(y)
LinearBlockMap tensor_map(const LinearBlockMap& f, const LinearBlockMap& g);

// Symmetric power with graded-symmetry signs; multiset labels joined with '*';
// repeated odd generators are dropped.  Also exposes projection/inclusion to the
// k-fold tensor power: projection o inclusion = id on the symmetric subspace.
struct SymPower {
  SpacePtr base;
  int k = 0;
  SpacePtr space;          // Sym^k
  SpacePtr tensor;         // base^{(x) k}
  LinearBlockMap inclusion;  // Sym^k -> tensor^k
  LinearBlockMap projection; // tensor^k -> Sym^k
};
SymPower symmetric_power(SpacePtr base, int k);

std::vector<std::string> split_label(const std::string& s, char sep);
std::string join_label(const std::vector<std::string>& parts, char sep);

struct CochainComplex {
  SpacePtr space;
  LinearBlockMap d;  // degree +1
  // verifies d has degree +1 and d*d = 0 exactly; throws on failure
  void check() const;
};

// Exact row reduction; returns rank.  Matrix as rows of sparse columns keyed by int.
int sparse_rank(std::vector<std::map<int, Rat>> rows);

// Cohomology dimensions per degree of a complex.
std::map<int, int> cohomology_dims(const CochainComplex& c);

}  // namespace hplt
