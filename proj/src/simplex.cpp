#include "ctx/simplex.hpp"

#include <cmath>
#include <vector>

namespace ctx {

PhaseOneResult phase_one_simplex(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, double eps,
                                 int max_iterations) {
  const int m = static_cast<int>(A.rows());
  const int L = static_cast<int>(A.cols());
  const int ncols = L + m;
  const double pivot_tol = 1e-11;

  // Flip rows so the right-hand side is nonnegative; remember the signs to
  // restore the dual ray at the end.
  Eigen::MatrixXd T(m, ncols);
  Eigen::VectorXd rhs(m);
  Eigen::VectorXd row_sign = Eigen::VectorXd::Ones(m);
  for (int i = 0; i < m; ++i) {
    double s = b[i] < 0 ? -1.0 : 1.0;
    row_sign[i] = s;
    T.row(i).head(L) = s * A.row(i);
    rhs[i] = s * b[i];
  }
  T.rightCols(m) = Eigen::MatrixXd::Identity(m, m);

  std::vector<int> basic(m);
  for (int i = 0; i < m; ++i) basic[i] = L + i;

  // Reduced costs for minimizing the artificial sum: d_j = c_j - 1ᵀ T_j.
  Eigen::VectorXd d = Eigen::VectorXd::Zero(ncols);
  for (int j = 0; j < L; ++j) d[j] = -T.col(j).sum();
  double objective = rhs.sum();

  PhaseOneResult result;
  while (result.iterations < max_iterations) {
    // Bland: smallest improving column.
    int enter = -1;
    for (int j = 0; j < ncols; ++j)
      if (d[j] < -pivot_tol) {
        enter = j;
        break;
      }
    if (enter < 0) break;

    int leave = -1;
    double best_ratio = 0;
    for (int i = 0; i < m; ++i) {
      if (T(i, enter) <= pivot_tol) continue;
      double ratio = rhs[i] / T(i, enter);
      if (leave < 0 || ratio < best_ratio - 1e-14 ||
          (std::abs(ratio - best_ratio) <= 1e-14 && basic[i] < basic[leave])) {
        leave = i;
        best_ratio = ratio;
      }
    }
    if (leave < 0) break;  // cannot happen: phase-I objective is bounded below

    double piv = T(leave, enter);
    T.row(leave) /= piv;
    rhs[leave] /= piv;
    for (int i = 0; i < m; ++i) {
      if (i == leave) continue;
      double f = T(i, enter);
      if (f == 0) continue;
      T.row(i) -= f * T.row(leave);
      rhs[i] -= f * rhs[leave];
    }
    double f = d[enter];
    d -= f * T.row(leave).transpose();
    objective -= f * rhs[leave];
    basic[leave] = enter;
    ++result.iterations;
  }
  result.budget_exhausted = result.iterations >= max_iterations;

  result.infeasibility = objective;
  if (objective <= eps) {
    result.feasible = true;
    result.solution = Eigen::VectorXd::Zero(L);
    for (int i = 0; i < m; ++i)
      if (basic[i] < L) result.solution[basic[i]] = std::max(0.0, rhs[i]);
  } else {
    result.feasible = false;
    // y_i = c_art_i - d_art_i = 1 - d[L+i], undone for the row flips.
    result.dual_ray = Eigen::VectorXd(m);
    for (int i = 0; i < m; ++i) result.dual_ray[i] = row_sign[i] * (1.0 - d[L + i]);
  }
  return result;
}

}  // namespace ctx
