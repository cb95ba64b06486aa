#pragma once

// End-to-end checks tying the transferred structure on boundary observables
// to the strict one: the linear retract, the smallness certificate, the
// perturbed retract, the induced differential, the transferred generating
// operations, multi-vertex tree vanishing, the P0 axioms with functoriality
// diagrams, and the interior (no boundary condition) acyclicity analogue.
// Every comparison is an exact rational equality; failures carry witnesses.

#include "hplt/sdr.hpp"
#include "hplt/trees.hpp"

namespace hplt {

struct CheckLine {
  std::string name;
  bool pass = true;
  std::string witness;
};

struct CheckList {
  std::vector<CheckLine> lines;
  void req(const std::string& name, bool ok, const std::string& witness = "");
  bool all() const;
};

// retract identities of the unperturbed SDR plus its three structural
// properties (iota lands in l = 0 and is an algebra map; pi kills l > 0 and
// is an algebra map; eta preserves the (k, l) bidegree), on every basis
// monomial of symmetric degree <= K
std::vector<CheckLine> check_boundary_sdr(BulkAlg& A, int K);

// smallness: for each basis monomial of bidegree (k, l), the largest p with
// (delta eta)^p != 0 must satisfy p <= k + 2l.  Measured exponents per
// occupied bidegree are returned through `exponents` ("k,l" -> p).
std::vector<CheckLine> check_smallness_bulk(BulkAlg& A, int K,
                                            std::map<std::string, int>* exponents = nullptr);

// perturbed retract: full differential squares to zero, the perturbed maps
// satisfy the SDR identities, and pi is unperturbed
std::vector<CheckLine> check_perturbed_sdr(BulkAlg& A, int K);

// the induced differential on the small side equals the directly built
// boundary Chevalley-Eilenberg differential (in the degree-<=K quotient)
std::vector<CheckLine> check_induced_differential(BulkAlg& A, int K);

// transferred generating operations against the strict boundary structure:
// mu_U, varpi_U (single-vertex transfer, the two-term formula, the 1/2
// prefactor, and the value-level brute-force evaluator), m_U^V for U < V in
// `opens`, and m_{U1,U2} for disjoint pairs from `opens`
std::vector<CheckLine> compare_generators(BulkContext& ctx, const std::vector<Open>& opens,
                                          int K, std::map<std::string, std::string>* values = nullptr);

// Leibniz, shifted Jacobi, bracket symmetry and locality, swap equivariance
// of the binary structure maps, and the commuting diagrams relating unary
// and binary structure maps
std::vector<CheckLine> check_p0_axioms(BulkContext& ctx, const std::vector<Open>& opens, int K);

// every tree with 2..max_vertices vertices and <= max_arity leaves (colors
// running over subopens of `out`) evaluates to exact zero, and the D-degree
// accounting independently forces it
std::vector<CheckLine> check_tree_vanishing(BulkContext& ctx, const Open& out, int K,
                                            int max_vertices, int max_arity);

// interior analogue: fields with the boundary condition dropped; the
// perturbed complex is exactly acyclic at polynomial cap `cap`, carries a
// global contracting homotopy, and the observable algebra (built at the
// smaller cap `retract_cap`) retracts onto the constants
struct InteriorReport {
  std::vector<CheckLine> lines;
  std::map<int, int> cohomology;  // dims per degree of the full complex
  bool pass() const;
};
InteriorReport check_interior(const PbvModel& m, int cap, int retract_cap, int K);

enum class Corruption { None, EtaSide, HalfFactor, PiCoeff, PairingSign };

struct PipelineConfig {
  PbvModel model;
  int K = 3;              // symmetric-degree truncation
  int M = 1;              // interval polynomial cap for bulk fields
  int max_vertices = 3;   // tree enumeration bound
  int max_arity = 3;
  bool with_trees = true;
  bool with_interior = true;  // skipped automatically when Pi^(0) is degenerate
  int interior_cap = 12;
  int interior_retract_cap = 3;
  Corruption corruption = Corruption::None;
};

struct CorrespondenceReport {
  std::string model_name;
  int K = 0, M = 0;
  std::string corruption = "none";
  std::vector<CheckLine> lines;
  std::map<std::string, std::string> values;
  bool pass() const;
};

// opens checked: every single site, plus the first two-site disjoint pair
CorrespondenceReport run_pipeline(const PipelineConfig& cfg);

// deterministic serialization: sorted check names, string rationals, no
// timing or environment data
std::string report_json(const CorrespondenceReport& r);

const char* corruption_name(Corruption c);
Corruption corruption_from_name(const std::string& s);  // throws on unknown

}  // namespace hplt
