#include "ctx/clique.hpp"

#include <algorithm>
#include <numeric>

namespace ctx {

namespace {

struct Searcher {
  int n = 0;
  std::vector<Bitset> adj;    // permuted adjacency
  std::vector<double> w;      // permuted weights
  std::vector<int> original;  // permuted index -> original vertex id

  double best = 0;
  std::vector<int> best_clique;  // permuted ids
  std::vector<int> current;

  std::uint64_t nodes = 0;
  std::uint64_t budget = 0;
  bool complete = true;
  double margin = 1e-12;

  void record_if_better(double cw) {
    if (cw > best) {
      best = cw;
      best_clique = current;
    }
  }

  void expand(const Bitset& candidates, double cw) {
    if (!complete) return;
    if (++nodes > budget) {
      complete = false;
      return;
    }

    std::vector<int> cand;
    candidates.for_each([&](int v) { cand.push_back(v); });
    if (cand.empty()) {
      record_if_better(cw);
      return;
    }

    // Greedy coloring: classes are independent sets, so any clique picks at
    // most one vertex per class and sum of class maxima bounds the rest.
    std::vector<Bitset> class_bits;
    std::vector<double> class_max;
    std::vector<int> color(cand.size(), 0);
    for (std::size_t i = 0; i < cand.size(); ++i) {
      int v = cand[i];
      std::size_t c = 0;
      for (; c < class_bits.size(); ++c)
        if (!class_bits[c].intersects(adj[v])) break;
      if (c == class_bits.size()) {
        class_bits.emplace_back(n);
        class_max.push_back(0);
      }
      class_bits[c].set(v);
      class_max[c] = std::max(class_max[c], w[v]);
      color[i] = static_cast<int>(c);
    }
    std::vector<double> cumulative(class_max.size());
    std::partial_sum(class_max.begin(), class_max.end(), cumulative.begin());

    std::vector<std::size_t> order(cand.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return color[a] < color[b]; });

    Bitset remaining = candidates;
    for (std::size_t oi = order.size(); oi-- > 0;) {
      std::size_t i = order[oi];
      int v = cand[i];
      if (cw + cumulative[static_cast<std::size_t>(color[i])] <= best + margin) return;
      remaining.reset(v);
      Bitset next = remaining;
      next &= adj[v];
      current.push_back(v);
      if (next.any()) {
        expand(next, cw + w[v]);
      } else {
        record_if_better(cw + w[v]);
      }
      current.pop_back();
      if (!complete) return;
    }
  }
};

}  // namespace

CliqueResult max_weight_clique(const Graph& g, const Eigen::VectorXd& w,
                               std::uint64_t node_budget) {
  if (w.size() != g.n)
    throw Error(ErrorCode::LengthMismatch, "weight vector does not match the graph");
  for (int v = 0; v < g.n; ++v)
    if (!(w[v] >= 0)) throw Error(ErrorCode::ParseError, "weights must be nonnegative");

  // Keep positive-weight vertices only, ordered by descending weight.
  std::vector<int> kept;
  for (int v = 0; v < g.n; ++v)
    if (w[v] > 0) kept.push_back(v);
  std::stable_sort(kept.begin(), kept.end(), [&](int a, int b) {
    if (w[a] != w[b]) return w[a] > w[b];
    return g.degree(a) > g.degree(b);
  });

  Searcher s;
  s.n = static_cast<int>(kept.size());
  s.original = kept;
  s.budget = node_budget;
  s.w.resize(kept.size());
  s.adj.assign(kept.size(), Bitset(s.n));
  for (int i = 0; i < s.n; ++i) {
    s.w[i] = w[kept[i]];
    for (int j = i + 1; j < s.n; ++j)
      if (g.has_edge(kept[i], kept[j])) {
        s.adj[i].set(j);
        s.adj[j].set(i);
      }
  }

  CliqueResult result;
  if (s.n == 0) return result;

  // Greedy warm start in the weight order.
  {
    std::vector<int> clique;
    double cw = 0;
    for (int v = 0; v < s.n; ++v) {
      bool ok = true;
      for (int u : clique)
        if (!s.adj[u].test(v)) {
          ok = false;
          break;
        }
      if (ok) {
        clique.push_back(v);
        cw += s.w[v];
      }
    }
    s.best = cw;
    s.best_clique = clique;
  }

  Bitset all(s.n);
  for (int v = 0; v < s.n; ++v) all.set(v);
  s.expand(all, 0.0);

  result.weight = s.best;
  result.complete = s.complete;
  result.nodes = s.nodes;
  for (int v : s.best_clique) result.members.push_back(s.original[v]);
  std::sort(result.members.begin(), result.members.end());
  return result;
}

}  // namespace ctx
