#include "ctx/core.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

namespace ctx {

Scenario validate_scenario(std::vector<std::string> labels, std::vector<std::vector<int>> edges) {
  const int n = static_cast<int>(labels.size());

  {
    std::unordered_set<std::string> seen;
    for (const auto& l : labels)
      if (!seen.insert(l).second)
        throw Error(ErrorCode::DuplicateLabel, "duplicate vertex label: " + l);
  }

  std::vector<std::vector<int>> cleaned;
  std::set<std::vector<int>> dedup;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    auto edge = edges[e];
    if (edge.empty())
      throw Error(ErrorCode::EmptyEdge, "edge " + std::to_string(e) + " is empty");
    std::sort(edge.begin(), edge.end());
    for (std::size_t i = 0; i < edge.size(); ++i) {
      if (edge[i] < 0 || edge[i] >= n)
        throw Error(ErrorCode::ParseError, "edge " + std::to_string(e) +
                                               " references vertex " + std::to_string(edge[i]) +
                                               " outside [0," + std::to_string(n) + ")");
      if (i > 0 && edge[i] == edge[i - 1])
        throw Error(ErrorCode::DuplicateVertexInEdge,
                    "edge " + std::to_string(e) + " repeats vertex " + std::to_string(edge[i]));
    }
    if (dedup.insert(edge).second) cleaned.push_back(std::move(edge));
  }

  std::vector<std::vector<int>> vertex_edges(n);
  for (std::size_t e = 0; e < cleaned.size(); ++e)
    for (int v : cleaned[e]) vertex_edges[v].push_back(static_cast<int>(e));
  for (int v = 0; v < n; ++v)
    if (vertex_edges[v].empty())
      throw Error(ErrorCode::OrphanVertex,
                  "vertex " + std::to_string(v) + " (" + labels[v] + ") belongs to no edge");

  Scenario s;
  s.labels_ = std::move(labels);
  s.edges_ = std::move(cleaned);
  s.vertex_edges_ = std::move(vertex_edges);
  return s;
}

ModelCheckResult is_model(const Scenario& scenario, const Eigen::VectorXd& p,
                          const Tolerances& tol) {
  tol.validate();
  if (p.size() != scenario.vertex_count())
    throw Error(ErrorCode::LengthMismatch,
                "model has " + std::to_string(p.size()) + " entries, scenario has " +
                    std::to_string(scenario.vertex_count()) + " vertices");

  ModelCheckResult result;
  for (int v = 0; v < p.size(); ++v)
    if (!(p[v] >= -tol.normalization_eps && p[v] <= 1 + tol.normalization_eps))
      result.out_of_range.push_back(v);
  for (int e = 0; e < scenario.edge_count(); ++e) {
    double sum = 0;
    for (int v : scenario.edge(e)) sum += p[v];
    if (std::abs(sum - 1.0) > tol.normalization_eps) result.violated_edges.push_back(e);
  }
  result.ok = result.out_of_range.empty() && result.violated_edges.empty();
  return result;
}

namespace {

// Backtracking over edges ordered by increasing size. State per vertex:
// 0 = unassigned, 1 = chosen, 2 = excluded.
struct DetEnumerator {
  const Scenario& scenario;
  std::vector<int> edge_order;
  std::vector<std::uint8_t> state;
  std::vector<DeterministicModel> out;

  explicit DetEnumerator(const Scenario& s) : scenario(s), state(s.vertex_count(), 0) {
    edge_order.resize(s.edge_count());
    for (int e = 0; e < s.edge_count(); ++e) edge_order[e] = e;
    std::stable_sort(edge_order.begin(), edge_order.end(), [&](int a, int b) {
      return s.edge(a).size() < s.edge(b).size();
    });
  }

  void run() { recurse(0); }

  void recurse(std::size_t pos) {
    if (pos == edge_order.size()) {
      DeterministicModel m;
      m.assignment.resize(state.size());
      for (std::size_t v = 0; v < state.size(); ++v) m.assignment[v] = state[v] == 1 ? 1 : 0;
      out.push_back(std::move(m));
      return;
    }
    const auto& edge = scenario.edge(edge_order[pos]);
    int chosen = -1;
    for (int v : edge)
      if (state[v] == 1) {
        if (chosen >= 0) return;  // two chosen vertices in one edge
        chosen = v;
      }
    if (chosen >= 0) {
      // Edge already satisfied: exclude its remaining unassigned vertices.
      std::vector<int> touched;
      for (int v : edge)
        if (state[v] == 0) {
          state[v] = 2;
          touched.push_back(v);
        }
      recurse(pos + 1);
      for (int v : touched) state[v] = 0;
      return;
    }
    for (int pick : edge) {
      if (state[pick] == 2) continue;  // edge may end up with no selectable vertex: dead end
      std::vector<int> touched;
      for (int v : edge) {
        if (state[v] != 0) continue;
        state[v] = v == pick ? 1 : 2;
        touched.push_back(v);
      }
      recurse(pos + 1);
      for (int v : touched) state[v] = 0;
    }
  }
};

}  // namespace

std::vector<DeterministicModel> enumerate_deterministic_models(const Scenario& scenario) {
  DetEnumerator en(scenario);
  en.run();
  std::sort(en.out.begin(), en.out.end(), [](const DeterministicModel& a, const DeterministicModel& b) {
    return a.chosen() < b.chosen();
  });
  return en.out;
}

Graph orthogonality_graph(const Scenario& scenario) {
  Graph g(scenario.vertex_count());
  for (const auto& edge : scenario.edges())
    for (std::size_t i = 0; i < edge.size(); ++i)
      for (std::size_t j = i + 1; j < edge.size(); ++j) g.add_edge(edge[i], edge[j]);
  return g;
}

Graph non_orthogonality_graph(const Scenario& scenario) {
  return orthogonality_graph(scenario).complement();
}

}  // namespace ctx
