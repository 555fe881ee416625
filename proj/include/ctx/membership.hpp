// Membership deciders for G(H), no-signaling, C(H) and CE^k(H), each with a
// checkable certificate, plus the Shannon-capacity bracket.
#pragma once

#include "ctx/core.hpp"
#include "ctx/invariants.hpp"
#include "ctx/products.hpp"
#include "ctx/verdict.hpp"

#include <cstdint>
#include <string>

namespace ctx {

/// Budget caps for search- and iteration-based deciders. INCONCLUSIVE is the
/// outcome when a cap is hit, never a silently degraded answer.
struct Budget {
  std::uint64_t nodes = 50'000'000;
  int iterations = 200000;

  static Budget from_scalar(std::uint64_t n) {
    Budget b;
    b.nodes = n;
    b.iterations = static_cast<int>(std::min<std::uint64_t>(n, 100'000'000));
    return b;
  }
};

/// MEMBER iff p is a probabilistic model (edge sums 1, entries in [0,1]);
/// NON_MEMBER carries the violated edge.
Verdict check_general(const Scenario& scenario, const Eigen::VectorXd& p,
                      const Tolerances& tol = {});

/// Marginal-consistency equality: sum over `lhs` = sum over `rhs`.
struct NsEquality {
  std::vector<int> lhs;
  std::vector<int> rhs;
  std::string rendered;
};

/// All marginal-consistency equalities of the no-signaling polytope, for every
/// bipartition of the parties (kept group vs traced-out group).
std::vector<NsEquality> no_signaling_equalities(const BellParams& params);

/// MEMBER iff nonnegative, normalized per setting, and every marginal
/// equality holds within lp_eps.
Verdict no_signaling_check(const BellParams& params, const Eigen::VectorXd& p,
                           const Tolerances& tol = {});

/// LP membership in the convex hull of deterministic models. MEMBER carries
/// mixture weights; NON_MEMBER a separating functional from the Farkas ray,
/// normalized so its classical bound is the exact deterministic maximum.
Verdict check_classical(const Scenario& scenario, const Eigen::VectorXd& p,
                        const Tolerances& tol = {}, const Budget& budget = {});

/// Consistent Exclusivity at level 1: exact max-weight clique search on the
/// orthogonality graph.
Verdict check_ce1(const Scenario& scenario, const Eigen::VectorXd& p, const Tolerances& tol = {},
                  const Budget& budget = {});

/// CE^k: CE^1 of the k-fold product model on the product orthogonality graph
/// (pairwise rule; product edges are never materialized). Violating events are
/// reported as k-tuples of base vertices.
Verdict check_cek(const Scenario& scenario, const Eigen::VectorXd& p, int k,
                  const Tolerances& tol = {}, const Budget& budget = {},
                  std::size_t vertex_cap = 1000000);

struct CapacityBracket {
  double lower = 0;  // max_k alpha(NO^k, p^k)^(1/k), a witnessed bound
  double upper = 0;  // lovasz_theta(NO, p).upper
  int best_k = 1;
  bool lower_exact = true;
  OrthogonalSet witness;  // independent set achieving lower at best_k
  double theta_lower = 0;
};

/// Brackets the weighted Shannon capacity of NO(H): independence numbers of
/// strong powers from below, the Lovász number from above.
CapacityBracket shannon_capacity_bracket(const Scenario& scenario, const Eigen::VectorXd& p,
                                         int k_max, const Tolerances& tol = {},
                                         const Budget& budget = {},
                                         std::size_t vertex_cap = 1000000);

/// Gauge-fixes a separating functional (offset along edge normalizations plus
/// scaling) so it evaluates to `bound_target` at its deterministic maximum and
/// `value_target` on the separated model.
SeparatingFunctional rescale_functional(const Scenario& scenario, const SeparatingFunctional& f,
                                        double bound_target, double value_target);

// Independent certificate verifiers: no solver state, recompute everything.
bool verify_mixture(const Scenario& scenario, const MixtureWeights& cert,
                    const Eigen::VectorXd& p, double eps);
bool verify_functional(const Scenario& scenario, const SeparatingFunctional& f,
                       const Eigen::VectorXd& p, double eps);
bool verify_orthogonal_set(const Scenario& scenario, const OrthogonalSet& cert,
                           const Eigen::VectorXd& p, double eps);

}  // namespace ctx
