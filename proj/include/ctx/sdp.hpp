// Affine-constrained PSD feasibility by alternating projections, with
// certificate repair on both outcomes: an affine-exact near-PSD matrix when
// feasible, a Farkas combination of the constraints when not.
#pragma once

#include "ctx/core.hpp"

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <memory>
#include <tuple>
#include <utility>
#include <vector>

namespace ctx {

/// Sparse affine equalities on a symmetric matrix, held in scaled (svec)
/// coordinates so Euclidean projection agrees with Frobenius projection.
class SymmetricConstraintSystem {
 public:
  explicit SymmetricConstraintSystem(int dim);

  int dim() const { return dim_; }
  int rows() const { return static_cast<int>(rhs_.size()); }

  /// terms are (row, col, coeff) with coeff multiplying M(row, col).
  void add_equality(const std::vector<std::tuple<int, int, double>>& terms, double rhs);
  void add_entry_pin(int row, int col, double value);

  /// Drops exact duplicate rows and rows with empty functionals.
  void deduplicate();

  /// Factorizes the Gram matrix of the constraint rows. Must be called after
  /// the last add_* and before projections or solves.
  void prepare();

  Eigen::VectorXd to_svec(const Eigen::MatrixXd& M) const;
  Eigen::MatrixXd from_svec(const Eigen::VectorXd& m) const;

  /// Least-squares projection onto the affine set, with refinement passes.
  void project_affine(Eigen::VectorXd& m) const;

  /// max_i |<A_i, M> - b_i|
  double residual_inf(const Eigen::VectorXd& m) const;

  /// The combination sum_i y_i A_i as a symmetric matrix.
  Eigen::MatrixXd combine(const Eigen::VectorXd& y) const;

  double rhs_dot(const Eigen::VectorXd& y) const;

  /// Least-squares fit of y with sum_i y_i A_i ~ mat(g).
  Eigen::VectorXd fit_combination(const Eigen::VectorXd& g) const;

  const Eigen::VectorXd& rhs() const { return rhs_dense_; }
  bool prepared() const { return prepared_; }

 private:
  int dim_ = 0;
  int svec_size_ = 0;
  std::vector<std::vector<std::pair<int, double>>> rows_;  // svec index, svec coeff
  std::vector<double> rhs_;
  Eigen::VectorXd rhs_dense_;
  Eigen::SparseMatrix<double> F_;   // rows x svec
  Eigen::SparseMatrix<double> Ft_;  // transpose, kept for fast products
  class GramSolver;
  std::shared_ptr<GramSolver> gram_;
  bool prepared_ = false;
};

enum class SdpFeasibility { Feasible, Infeasible, Inconclusive };

struct SdpOptions {
  int max_iterations = 200000;
  double feasible_eig_floor = 1e-7;   // accept M with lambda_min >= -floor
  double infeasible_min_gap = 1e-7;   // require this much separation to certify
  double trace_bound = 0;             // 0 = unknown: Farkas needs essentially exact PSD slack
  int check_interval = 20;
};

struct SdpResult {
  SdpFeasibility status = SdpFeasibility::Inconclusive;
  Eigen::MatrixXd matrix;          // affine-exact iterate (feasible / best)
  double min_eigenvalue = 0;       // of `matrix`
  double constraint_residual = 0;  // of `matrix`
  Eigen::VectorXd farkas_y;
  double farkas_gap = 0;        // yᵀb
  double farkas_slack_min = 0;  // lambda_min of -sum y_i A_i
  int iterations = 0;
  double gap_norm = 0;  // distance between the cone and affine iterates
};

SdpResult solve_feasibility(const SymmetricConstraintSystem& system, const SdpOptions& options);

/// Re-derives the Farkas quantities from y alone: S = -sum y_i A_i, its
/// smallest eigenvalue, and the gap yᵀb. Sound NON_MEMBER verdicts require
/// gap > max(0, -lambda_min(S)) * trace_bound.
std::pair<double, double> verify_farkas(const SymmetricConstraintSystem& system,
                                        const Eigen::VectorXd& y);

}  // namespace ctx
