// Phase-I simplex for LP feasibility with Farkas certificates.
#pragma once

#include <Eigen/Core>

namespace ctx {

struct PhaseOneResult {
  bool feasible = false;
  bool budget_exhausted = false;
  Eigen::VectorXd solution;   // x >= 0 with A x = b (when feasible)
  Eigen::VectorXd dual_ray;   // y with yᵀA <= 0, yᵀb > 0 (when infeasible)
  double infeasibility = 0;   // phase-I objective at optimum
  int iterations = 0;
};

/// Decides whether {x >= 0 : A x = b} is nonempty by minimizing the sum of
/// artificial variables with Bland's rule. Either outcome carries its
/// certificate: a basic feasible solution, or the simplex multipliers as a
/// Farkas ray.
PhaseOneResult phase_one_simplex(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                                 double eps = 1e-9, int max_iterations = 200000);

}  // namespace ctx
