// Contextuality scenarios as hypergraphs, probabilistic models on them, and
// the orthogonality structure derived from shared measurements.
#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ctx {

enum class ErrorCode {
  OrphanVertex,
  EmptyEdge,
  DuplicateVertexInEdge,
  DuplicateLabel,
  LengthMismatch,
  SizeOverflow,
  ScenarioMismatch,
  NotAMixture,
  UnknownFixture,
  InvalidTolerance,
  ParseError,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

/// Numeric tolerances shared across the deciders. `normalization_eps` guards
/// edge sums, `lp_eps` guards linear (LP, clique, no-signaling) verdicts,
/// `sdp_eps` guards semidefinite verdicts.
struct Tolerances {
  double normalization_eps = 1e-9;
  double lp_eps = 1e-9;
  double sdp_eps = 1e-6;

  void validate() const {
    if (normalization_eps <= 0 || lp_eps <= 0 || sdp_eps <= 0)
      throw Error(ErrorCode::InvalidTolerance, "tolerances must be strictly positive");
  }
};

/// Fixed-size bitset backed by 64-bit words. Sized at construction; used for
/// adjacency rows and candidate sets in the clique search.
class Bitset {
 public:
  Bitset() = default;
  explicit Bitset(int n) : n_(n), words_((n + 63) / 64, 0) {}

  int size() const { return n_; }
  void set(int i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(int i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
  bool test(int i) const { return (words_[i >> 6] >> (i & 63)) & 1; }

  int count() const {
    int c = 0;
    for (std::uint64_t w : words_) c += __builtin_popcountll(w);
    return c;
  }
  bool any() const {
    for (std::uint64_t w : words_)
      if (w) return true;
    return false;
  }
  bool intersects(const Bitset& other) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & other.words_[i]) return true;
    return false;
  }
  Bitset& operator&=(const Bitset& other) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
    return *this;
  }
  Bitset& operator|=(const Bitset& other) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
    return *this;
  }

  /// Index of the lowest set bit at or after `from`, or -1.
  int next(int from) const {
    if (from >= n_) return -1;
    int w = from >> 6;
    std::uint64_t cur = words_[w] & (~std::uint64_t{0} << (from & 63));
    while (true) {
      if (cur) return (w << 6) + __builtin_ctzll(cur);
      if (++w >= static_cast<int>(words_.size())) return -1;
      cur = words_[w];
    }
  }

  template <typename F>
  void for_each(F&& f) const {
    for (int v = next(0); v >= 0; v = next(v + 1)) f(v);
  }

 private:
  int n_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Simple undirected graph: symmetric, irreflexive adjacency on [0, n).
struct Graph {
  int n = 0;
  std::vector<Bitset> adj;

  Graph() = default;
  explicit Graph(int vertex_count) : n(vertex_count), adj(vertex_count, Bitset(vertex_count)) {}

  void add_edge(int u, int v) {
    if (u == v) return;  // no self-loops
    adj[u].set(v);
    adj[v].set(u);
  }
  bool has_edge(int u, int v) const { return u != v && adj[u].test(v); }
  int degree(int v) const { return adj[v].count(); }

  std::size_t edge_count() const {
    std::size_t twice = 0;
    for (const auto& row : adj) twice += row.count();
    return twice / 2;
  }

  std::vector<std::pair<int, int>> edge_pairs() const {
    std::vector<std::pair<int, int>> out;
    for (int u = 0; u < n; ++u)
      for (int v = adj[u].next(u + 1); v >= 0; v = adj[u].next(v + 1)) out.emplace_back(u, v);
    return out;
  }

  Graph complement() const {
    Graph g(n);
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v)
        if (!adj[u].test(v)) g.add_edge(u, v);
    return g;
  }
};

/// Hypergraph scenario: labeled events (vertices) and measurements (edges).
/// Immutable after construction through validate_scenario; edges are stored as
/// sorted index sets with duplicates merged.
class Scenario {
 public:
  int vertex_count() const { return static_cast<int>(labels_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(int v) const { return labels_[v]; }
  const std::vector<std::vector<int>>& edges() const { return edges_; }
  const std::vector<int>& edge(int e) const { return edges_[e]; }
  const std::vector<int>& edges_containing(int v) const { return vertex_edges_[v]; }

 private:
  friend Scenario validate_scenario(std::vector<std::string> labels,
                                    std::vector<std::vector<int>> edges);
  std::vector<std::string> labels_;
  std::vector<std::vector<int>> edges_;
  std::vector<std::vector<int>> vertex_edges_;
};

/// Checks the scenario invariants and builds the vertex -> edges table.
/// Throws Error with codes OrphanVertex, EmptyEdge, DuplicateVertexInEdge,
/// DuplicateLabel on violation. Duplicate hyperedges are merged silently.
Scenario validate_scenario(std::vector<std::string> labels, std::vector<std::vector<int>> edges);

/// 0/1 model: exactly one vertex per edge carries probability 1.
struct DeterministicModel {
  std::vector<std::uint8_t> assignment;

  Eigen::VectorXd to_vector() const {
    Eigen::VectorXd p(static_cast<int>(assignment.size()));
    for (std::size_t i = 0; i < assignment.size(); ++i) p[static_cast<int>(i)] = assignment[i];
    return p;
  }
  std::vector<int> chosen() const {
    std::vector<int> out;
    for (std::size_t i = 0; i < assignment.size(); ++i)
      if (assignment[i]) out.push_back(static_cast<int>(i));
    return out;
  }
};

struct ModelCheckResult {
  bool ok = false;
  std::vector<int> violated_edges;
  std::vector<int> out_of_range;  // vertices with p outside [0,1]

  explicit operator bool() const { return ok; }
};

/// True iff p has entries in [0,1] and every edge sums to 1 within
/// tol.normalization_eps. Violations are reported per edge / vertex.
ModelCheckResult is_model(const Scenario& scenario, const Eigen::VectorXd& p,
                          const Tolerances& tol = {});

/// Complete, duplicate-free list of deterministic models, lexicographically
/// ordered by chosen-vertex index sets. Backtracks over edges by increasing
/// size; an empty list is a legal result.
std::vector<DeterministicModel> enumerate_deterministic_models(const Scenario& scenario);

/// Edge {u,v} iff some measurement contains both events.
Graph orthogonality_graph(const Scenario& scenario);

/// Exact complement on distinct pairs: edge iff no measurement contains both.
Graph non_orthogonality_graph(const Scenario& scenario);

}  // namespace ctx
