// Foulis-Randall products, Bell scenarios B_{n,m,k}, product models and the
// pairwise product-orthogonality rule.
#pragma once

#include "ctx/core.hpp"

#include <cstdint>
#include <span>
#include <string>

namespace ctx {

/// Bell scenario parameters: n parties, m settings per party, k outcomes per
/// setting. Labels render as "a1...an|x1...xn".
struct BellParams {
  int parties = 1;
  int settings = 1;
  int outcomes = 1;

  void validate() const;
  std::int64_t vertex_count() const;  // (m*k)^n
};

/// Bijection between product vertex indices and factor index pairs:
/// (a, b) <-> a * right_size + b.
struct ProductVertexMap {
  int left_size = 0;
  int right_size = 0;

  int pair_index(int a, int b) const { return a * right_size + b; }
  std::pair<int, int> factors(int v) const { return {v / right_size, v % right_size}; }
};

struct FrProduct {
  Scenario scenario;
  ProductVertexMap map;
};

/// The single-party scenario B_{1,m,k}: m*k vertices "(a|x)", one disjoint
/// k-vertex edge per setting.
Scenario single_party_scenario(int settings, int outcomes);

/// Binary Foulis-Randall product. Edges realize adaptive two-step protocols:
/// for e_A and f: e_A -> E_B the edge {(a,b) : a in e_A, b in f(a)}, plus the
/// symmetric construction starting from H_B; duplicates merged.
FrProduct fr_product(const Scenario& a, const Scenario& b, std::size_t vertex_cap = 1000000);

/// Left-associated n-fold FR power of the single-party scenario, relabeled to
/// the canonical Bell labels.
Scenario bell_scenario(const BellParams& params, std::size_t vertex_cap = 1000000);

// Canonical Bell vertex indexing: index digits are (x1, a1, x2, a2, ...) in
// mixed radix (m, k, m, k, ...), matching the iterated product order.
int bell_vertex_index(const BellParams& params, std::span<const int> outcomes,
                      std::span<const int> settings);
void bell_vertex_decode(const BellParams& params, int vertex, std::vector<int>& outcomes,
                        std::vector<int>& settings);
std::string bell_vertex_label(const BellParams& params, std::span<const int> outcomes,
                              std::span<const int> settings);

/// Product model: value at (a,b) is p(a) * q(b).
Eigen::VectorXd product_model(const Scenario& a, const Eigen::VectorXd& p, const Scenario& b,
                              const Eigen::VectorXd& q, const Tolerances& tol = {});

/// Pairwise rule: (a,b) and (a',b') are orthogonal iff the pairs differ and
/// a ⊥ a' or b ⊥ b' in the factor graphs. Matches shared-edge orthogonality
/// of the FR product.
bool product_orthogonality(const Graph& ga, const Graph& gb, std::pair<int, int> u,
                           std::pair<int, int> v);

Graph product_orthogonality_graph(const Graph& ga, const Graph& gb,
                                  std::size_t vertex_cap = 1000000);

/// Orthogonality graph of the k-fold product by the pairwise rule, without
/// materializing product edges. Vertices are base-k-tuples in row-major order
/// (first coordinate most significant).
Graph power_orthogonality_graph(const Graph& g, int k, std::size_t vertex_cap = 1000000);

/// k-fold tensor power of a model vector, aligned with power_orthogonality_graph.
Eigen::VectorXd power_model(const Eigen::VectorXd& p, int k, std::size_t vertex_cap = 1000000);

/// Decode a power-graph vertex into its k base-vertex coordinates.
std::vector<int> power_vertex_decode(int vertex, int base_size, int k);

}  // namespace ctx
