#include "ctx/invariants.hpp"

#include "ctx/clique.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace ctx {

AlphaResult weighted_independence_number(const WeightedGraph& wg, std::uint64_t node_budget) {
  CliqueResult c = max_weight_clique(wg.graph.complement(), wg.weights, node_budget);
  AlphaResult out;
  out.value = c.weight;
  out.witness = c.members;
  out.exact = c.complete;
  out.nodes = c.nodes;
  return out;
}

namespace {

// Primal-dual interior point iteration for
//   max <W,X>  s.t.  X_ij = 0 on edges, tr X = 1, X PSD
// following the standard XZ linearization: the Newton system is condensed to
// an m x m positive definite solve per iteration, m = |E| + 1.
struct ThetaSolver {
  int n = 0;
  std::vector<std::pair<int, int>> edges;
  Eigen::VectorXd s;  // sqrt of weights
  Eigen::MatrixXd W;  // s sᵀ

  Eigen::MatrixXd X, Z;
  Eigen::VectorXd y;  // edges..., trace

  int m() const { return static_cast<int>(edges.size()) + 1; }

  // A*(y) = sum_e y_e (E_ij + E_ji) + y_t I
  Eigen::MatrixXd combine(const Eigen::VectorXd& v) const {
    Eigen::MatrixXd M = v[m() - 1] * Eigen::MatrixXd::Identity(n, n);
    for (std::size_t e = 0; e < edges.size(); ++e) {
      M(edges[e].first, edges[e].second) += v[static_cast<int>(e)];
      M(edges[e].second, edges[e].first) += v[static_cast<int>(e)];
    }
    return M;
  }

  Eigen::VectorXd apply(const Eigen::MatrixXd& M) const {  // A(M)
    Eigen::VectorXd v(m());
    for (std::size_t e = 0; e < edges.size(); ++e)
      v[static_cast<int>(e)] = M(edges[e].first, edges[e].second) +
                               M(edges[e].second, edges[e].first);
    v[m() - 1] = M.trace();
    return v;
  }

  Eigen::VectorXd b() const {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(m());
    v[m() - 1] = 1;
    return v;
  }

  static bool is_psd(const Eigen::MatrixXd& M) {
    Eigen::LLT<Eigen::MatrixXd> llt(M);
    return llt.info() == Eigen::Success;
  }

  // Largest step in (0,1] keeping M + a*D positive definite, with backoff.
  static double step_length(const Eigen::MatrixXd& M, const Eigen::MatrixXd& D) {
    double a = 1.0;
    for (int tries = 0; tries < 60; ++tries) {
      if (is_psd(M + a * D)) return 0.98 * a;
      a *= 0.8;
    }
    return 0;
  }

  int solve(double tol, int max_iterations) {
    X = Eigen::MatrixXd::Identity(n, n) / n;
    y = Eigen::VectorXd::Zero(m());
    y[m() - 1] = 1 + W.cwiseAbs().rowwise().sum().maxCoeff();
    Z = combine(y) - W;

    int iter = 0;
    for (; iter < max_iterations; ++iter) {
      double gap = Z.cwiseProduct(X).sum();
      double scale = std::max(1.0, std::abs(y[m() - 1]));
      if (gap < tol * scale) break;

      double mu = 0.3 * gap / (2 * n);

      Eigen::LLT<Eigen::MatrixXd> llt(Z);
      if (llt.info() != Eigen::Success) break;
      Eigen::MatrixXd Zi = llt.solve(Eigen::MatrixXd::Identity(n, n));
      Zi = ((Zi + Zi.transpose()) / 2).eval();

      // Condensed system M dy = mu A(Zi) - b.
      const int mm = m();
      Eigen::MatrixXd Msys(mm, mm);
      Eigen::MatrixXd XZi = X * Zi;
      for (std::size_t a = 0; a < edges.size(); ++a) {
        auto [i, j] = edges[a];
        for (std::size_t c = a; c < edges.size(); ++c) {
          auto [k, l] = edges[c];
          double v = Zi(j, k) * X(l, i) + Zi(j, l) * X(k, i) + Zi(i, k) * X(l, j) +
                     Zi(i, l) * X(k, j);
          Msys(static_cast<int>(a), static_cast<int>(c)) = v;
          Msys(static_cast<int>(c), static_cast<int>(a)) = v;
        }
        double v = XZi(j, i) + XZi(i, j);
        Msys(static_cast<int>(a), mm - 1) = v;
        Msys(mm - 1, static_cast<int>(a)) = v;
      }
      Msys(mm - 1, mm - 1) = XZi.trace();

      Eigen::VectorXd rhs = mu * apply(Zi) - b();
      Eigen::LDLT<Eigen::MatrixXd> sys(Msys);
      if (sys.info() != Eigen::Success) break;
      Eigen::VectorXd dy = sys.solve(rhs);

      Eigen::MatrixXd dZ = combine(dy);
      Eigen::MatrixXd dX = mu * Zi - X - Zi * dZ * X;
      dX = ((dX + dX.transpose()) / 2).eval();

      double ap = step_length(X, dX);
      double ad = step_length(Z, dZ);
      if (ap <= 0 || ad <= 0) break;
      X += ap * dX;
      y += ad * dy;
      Z = combine(y) - W;
    }
    return iter;
  }
};

}  // namespace

ThetaBracket lovasz_theta(const WeightedGraph& wg, double target_gap, int max_iterations) {
  const int n_full = wg.graph.n;
  if (wg.weights.size() != n_full)
    throw Error(ErrorCode::LengthMismatch, "weights do not match the graph");
  for (int v = 0; v < n_full; ++v)
    if (!(wg.weights[v] >= 0)) throw Error(ErrorCode::ParseError, "weights must be nonnegative");

  ThetaBracket bracket;

  // Zero-weight vertices never contribute; delete them and re-inflate after.
  std::vector<int> kept;
  for (int v = 0; v < n_full; ++v)
    if (wg.weights[v] > 0) kept.push_back(v);
  const int n = static_cast<int>(kept.size());

  if (n == 0) {
    bracket.lower = bracket.upper = 0;
    bracket.primal = Eigen::MatrixXd::Zero(n_full, n_full);
    bracket.dual_slack = Eigen::MatrixXd::Zero(n_full, n_full);
    bracket.dual_value = 0;
    return bracket;
  }

  ThetaSolver solver;
  solver.n = n;
  solver.s = Eigen::VectorXd(n);
  for (int i = 0; i < n; ++i) solver.s[i] = std::sqrt(wg.weights[kept[i]]);
  solver.W = solver.s * solver.s.transpose();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (wg.graph.has_edge(kept[i], kept[j])) solver.edges.emplace_back(i, j);

  bracket.iterations = solver.solve(target_gap * 0.2, max_iterations);

  // Primal repair: zero the edge entries exactly, lift any negative
  // eigenvalue with a diagonal shift, renormalize the trace, then evaluate.
  Eigen::MatrixXd B = solver.X;
  for (auto [i, j] : solver.edges) {
    B(i, j) = 0;
    B(j, i) = 0;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(B);
  double lam = eig.eigenvalues().minCoeff();
  if (lam < 0) B += (-lam + 1e-15) * Eigen::MatrixXd::Identity(n, n);
  B /= B.trace();
  bracket.lower = solver.s.dot(B * solver.s);

  // Dual repair: rebuild the slack from y exactly and inflate t by the
  // negative eigenvalue magnitude; the slack structure absorbs the shift.
  Eigen::VectorXd y = solver.y;
  Eigen::MatrixXd M = solver.combine(y) - solver.W;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> deig(M);
  double dmin = deig.eigenvalues().minCoeff();
  if (dmin < 0) {
    y[solver.m() - 1] += -dmin + 1e-15;
    M = solver.combine(y) - solver.W;
  }
  bracket.upper = y[solver.m() - 1];
  bracket.dual_value = bracket.upper;
  bracket.converged = bracket.upper - bracket.lower <= target_gap;
  bracket.dual_y = y;

  // Re-inflate witnesses to the original vertex set. Deleted vertices carry
  // zero rows in the primal and diagonal t in the dual slack (their weight is
  // zero, so M_vv = t and off-diagonal non-edge entries are 0).
  bracket.primal = Eigen::MatrixXd::Zero(n_full, n_full);
  bracket.dual_slack = Eigen::MatrixXd::Zero(n_full, n_full);
  for (int v = 0; v < n_full; ++v) bracket.dual_slack(v, v) = bracket.upper;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      bracket.primal(kept[i], kept[j]) = B(i, j);
      bracket.dual_slack(kept[i], kept[j]) = M(i, j);
    }
  }
  return bracket;
}

Verdict q1_check_via_theta(const Scenario& scenario, const Eigen::VectorXd& p,
                           const Tolerances& tol) {
  tol.validate();
  Verdict verdict;
  verdict.set_name = "q1(theta)";
  verdict.tolerance = tol.sdp_eps;

  auto check = is_model(scenario, p, tol);
  if (!check.ok) {
    verdict.decision = Decision::NonMember;
    ViolatedConstraint c;
    c.description = "not a probabilistic model";
    if (!check.violated_edges.empty()) c.edge = check.violated_edges.front();
    verdict.certificate = c;
    return verdict;
  }

  WeightedGraph wg{non_orthogonality_graph(scenario), p};
  ThetaBracket bracket = lovasz_theta(wg, tol.sdp_eps * 0.1);
  verdict.stats.iterations = bracket.iterations;

  ThetaEvidence ev{bracket.lower, bracket.upper};
  verdict.certificate = ev;
  if (bracket.upper <= 1 + tol.sdp_eps)
    verdict.decision = Decision::Member;
  else if (bracket.lower > 1 + tol.sdp_eps)
    verdict.decision = Decision::NonMember;
  else
    verdict.decision = Decision::Inconclusive;
  return verdict;
}

}  // namespace ctx
