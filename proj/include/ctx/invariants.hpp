// Weighted graph invariants: exact weighted independence number and a
// certified bracket for the weighted Lovász number.
#pragma once

#include "ctx/core.hpp"
#include "ctx/verdict.hpp"

#include <cstdint>

namespace ctx {

struct WeightedGraph {
  Graph graph;
  Eigen::VectorXd weights;
};

struct AlphaResult {
  double value = 0;
  std::vector<int> witness;
  bool exact = true;
  std::uint64_t nodes = 0;
};

/// Exact maximum total weight over independent sets (clique search on the
/// complement). `exact` is false when the node budget ran out; the best set
/// found is still reported.
AlphaResult weighted_independence_number(const WeightedGraph& wg,
                                         std::uint64_t node_budget = 50'000'000);

/// Certified two-sided bracket for the weighted Lovász number:
///   theta = max <W, B> over PSD B, tr B = 1, B_uv = 0 on edges,
/// with W_uv = sqrt(w_u w_v). `lower` evaluates an exactly feasible primal,
/// `upper` is the dual value after inflating by any negative slack eigenvalue.
struct ThetaBracket {
  double lower = 0;
  double upper = 0;
  Eigen::MatrixXd primal;      // feasible B achieving `lower` (original indexing)
  Eigen::VectorXd dual_y;      // multipliers: one per kept edge, then the trace row
  double dual_value = 0;       // repaired t with M = A*(y) - W PSD
  Eigen::MatrixXd dual_slack;  // repaired M (original indexing)
  bool converged = true;
  int iterations = 0;
};

ThetaBracket lovasz_theta(const WeightedGraph& wg, double target_gap = 1e-7,
                          int max_iterations = 200);

/// Q1 membership via the section-6 equivalence: MEMBER iff
/// theta(NO(H), p) <= 1 + sdp_eps, NON_MEMBER iff the certified lower bound
/// exceeds that, INCONCLUSIVE when the bracket straddles the threshold.
Verdict q1_check_via_theta(const Scenario& scenario, const Eigen::VectorXd& p,
                           const Tolerances& tol = {});

}  // namespace ctx
