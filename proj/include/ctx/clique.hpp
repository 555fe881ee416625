// Exact maximum-weight clique search (branch and bound with greedy coloring
// bounds). Zero-weight vertices are pruned before the search.
#pragma once

#include "ctx/core.hpp"

#include <cstdint>

namespace ctx {

struct CliqueResult {
  double weight = 0;
  std::vector<int> members;   // original vertex ids, ascending
  bool complete = true;       // false iff the node budget ran out
  std::uint64_t nodes = 0;
};

/// Exact max-weight clique of g under nonnegative weights w. When the node
/// budget is exhausted the incumbent is returned with complete = false.
CliqueResult max_weight_clique(const Graph& g, const Eigen::VectorXd& w,
                               std::uint64_t node_budget = 50'000'000);

}  // namespace ctx
