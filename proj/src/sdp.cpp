#include "ctx/sdp.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <map>

namespace ctx {

namespace {
constexpr double kSqrt2 = 1.4142135623730951;
inline int svec_index(int i, int j) {  // requires i <= j
  return j * (j + 1) / 2 + i;
}
}  // namespace

class SymmetricConstraintSystem::GramSolver {
 public:
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
};

SymmetricConstraintSystem::SymmetricConstraintSystem(int dim)
    : dim_(dim), svec_size_(dim * (dim + 1) / 2) {}

void SymmetricConstraintSystem::add_equality(
    const std::vector<std::tuple<int, int, double>>& terms, double rhs) {
  std::map<int, double> acc;
  for (const auto& [r, c, coeff] : terms) {
    int i = std::min(r, c), j = std::max(r, c);
    acc[svec_index(i, j)] += coeff * (i == j ? 1.0 : 1.0 / kSqrt2);
  }
  std::vector<std::pair<int, double>> row;
  for (const auto& [idx, coeff] : acc)
    if (coeff != 0.0) row.emplace_back(idx, coeff);
  if (row.empty() && rhs == 0.0) return;  // trivial 0 = 0
  rows_.push_back(std::move(row));
  rhs_.push_back(rhs);
  prepared_ = false;
}

void SymmetricConstraintSystem::add_entry_pin(int row, int col, double value) {
  add_equality({{row, col, 1.0}}, value);
}

void SymmetricConstraintSystem::deduplicate() {
  std::map<std::pair<std::vector<std::pair<int, double>>, double>, bool> seen;
  std::vector<std::vector<std::pair<int, double>>> rows;
  std::vector<double> rhs;
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    auto key = std::make_pair(rows_[i], rhs_[i]);
    if (seen.emplace(std::move(key), true).second) {
      rows.push_back(std::move(rows_[i]));
      rhs.push_back(rhs_[i]);
    }
  }
  rows_ = std::move(rows);
  rhs_ = std::move(rhs);
  prepared_ = false;
}

void SymmetricConstraintSystem::prepare() {
  const int k = rows();
  rhs_dense_ = Eigen::Map<const Eigen::VectorXd>(rhs_.data(), k);

  std::vector<Eigen::Triplet<double>> trips;
  for (int r = 0; r < k; ++r)
    for (const auto& [idx, coeff] : rows_[r]) trips.emplace_back(r, idx, coeff);
  F_.resize(k, svec_size_);
  F_.setFromTriplets(trips.begin(), trips.end());
  F_.makeCompressed();
  Ft_ = F_.transpose();

  Eigen::SparseMatrix<double> gram = F_ * Ft_;
  // Small ridge keeps redundant constraint sets factorizable; refinement
  // passes in project_affine cancel the bias.
  Eigen::SparseMatrix<double> eye(k, k);
  eye.setIdentity();
  gram = gram + 1e-10 * eye;
  gram_ = std::make_shared<GramSolver>();
  gram_->ldlt.compute(gram);
  if (gram_->ldlt.info() != Eigen::Success)
    throw Error(ErrorCode::ParseError, "constraint Gram factorization failed");
  prepared_ = true;
}

Eigen::VectorXd SymmetricConstraintSystem::to_svec(const Eigen::MatrixXd& M) const {
  Eigen::VectorXd m(svec_size_);
  for (int j = 0; j < dim_; ++j)
    for (int i = 0; i <= j; ++i) m[svec_index(i, j)] = i == j ? M(i, j) : kSqrt2 * M(i, j);
  return m;
}

Eigen::MatrixXd SymmetricConstraintSystem::from_svec(const Eigen::VectorXd& m) const {
  Eigen::MatrixXd M(dim_, dim_);
  for (int j = 0; j < dim_; ++j)
    for (int i = 0; i <= j; ++i) {
      double v = i == j ? m[svec_index(i, j)] : m[svec_index(i, j)] / kSqrt2;
      M(i, j) = v;
      M(j, i) = v;
    }
  return M;
}

void SymmetricConstraintSystem::project_affine(Eigen::VectorXd& m) const {
  for (int pass = 0; pass < 3; ++pass) {
    Eigen::VectorXd r = F_ * m - rhs_dense_;
    if (r.lpNorm<Eigen::Infinity>() < 1e-15) break;
    Eigen::VectorXd z = gram_->ldlt.solve(r);
    m -= Ft_ * z;
  }
}

double SymmetricConstraintSystem::residual_inf(const Eigen::VectorXd& m) const {
  if (rows() == 0) return 0;
  return (F_ * m - rhs_dense_).lpNorm<Eigen::Infinity>();
}

Eigen::MatrixXd SymmetricConstraintSystem::combine(const Eigen::VectorXd& y) const {
  return from_svec(Ft_ * y);
}

double SymmetricConstraintSystem::rhs_dot(const Eigen::VectorXd& y) const {
  return rhs_dense_.dot(y);
}

Eigen::VectorXd SymmetricConstraintSystem::fit_combination(const Eigen::VectorXd& g) const {
  return gram_->ldlt.solve(F_ * g);
}

namespace {

struct EigResult {
  Eigen::VectorXd clipped;  // svec of the PSD projection
  double min_eig = 0;
};

EigResult psd_project(const SymmetricConstraintSystem& sys, const Eigen::VectorXd& m) {
  Eigen::MatrixXd M = sys.from_svec(m);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(M);
  EigResult out;
  out.min_eig = eig.eigenvalues().minCoeff();
  if (out.min_eig >= 0) {
    out.clipped = m;
    return out;
  }
  Eigen::VectorXd lam = eig.eigenvalues().cwiseMax(0.0);
  Eigen::MatrixXd P = eig.eigenvectors() * lam.asDiagonal() * eig.eigenvectors().transpose();
  out.clipped = sys.to_svec(P);
  return out;
}

}  // namespace

SdpResult solve_feasibility(const SymmetricConstraintSystem& system, const SdpOptions& options) {
  SdpResult result;
  const int dim = system.dim();
  if (!system.prepared()) throw Error(ErrorCode::ParseError, "constraint system not prepared");

  Eigen::VectorXd m = Eigen::VectorXd::Zero(dim * (dim + 1) / 2);
  system.project_affine(m);

  double prev_gap = -1;
  int stable_count = 0;
  Eigen::VectorXd prev_step;
  double prev_step_norm = 0;

  for (int iter = 0; iter < options.max_iterations; ++iter) {
    result.iterations = iter + 1;
    EigResult proj = psd_project(system, m);

    if (proj.min_eig >= -options.feasible_eig_floor) {
      result.status = SdpFeasibility::Feasible;
      result.matrix = system.from_svec(m);
      result.min_eigenvalue = proj.min_eig;
      result.constraint_residual = system.residual_inf(m);
      return result;
    }

    Eigen::VectorXd next = proj.clipped;
    system.project_affine(next);

    Eigen::VectorXd gap_vec = m - proj.clipped;  // NSD direction at stationarity
    double gap_norm = gap_vec.norm();
    result.gap_norm = gap_norm;

    // Infeasibility: the alternating pair stalls at positive distance.
    if (prev_gap >= 0 && gap_norm > options.infeasible_min_gap &&
        std::abs(gap_norm - prev_gap) < 1e-4 * gap_norm) {
      if (++stable_count >= 5 && (iter + 1) % options.check_interval == 0) {
        Eigen::VectorXd y = system.fit_combination(gap_vec);
        Eigen::MatrixXd slack = -system.combine(y);
        double norm = slack.norm();
        if (norm > 0) {
          y /= norm;
          slack /= norm;
          Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(slack);
          double smin = eig.eigenvalues().minCoeff();
          double gap = system.rhs_dot(y);
          double needed = std::max(0.0, -smin) * options.trace_bound;
          bool exactness_ok = options.trace_bound > 0 || smin >= -1e-13;
          if (gap > needed + options.infeasible_min_gap && exactness_ok) {
            result.status = SdpFeasibility::Infeasible;
            result.farkas_y = y;
            result.farkas_gap = gap;
            result.farkas_slack_min = smin;
            result.matrix = system.from_svec(next);
            result.min_eigenvalue = proj.min_eig;
            result.constraint_residual = system.residual_inf(next);
            return result;
          }
        }
      }
    } else {
      stable_count = 0;
    }
    prev_gap = gap_norm;

    // Aitken-style extrapolation along the affine iterate direction.
    Eigen::VectorXd step = next - m;
    double step_norm = step.norm();
    if (prev_step_norm > 0 && step_norm > 0 && step_norm < prev_step_norm) {
      double rho = step_norm / prev_step_norm;
      double cos = step.dot(prev_step) / (step_norm * prev_step_norm);
      if (cos > 0.9 && rho < 0.9999) {
        Eigen::VectorXd guess = next + (rho / (1 - rho)) * step;
        EigResult gproj = psd_project(system, guess);
        Eigen::VectorXd gnext = gproj.clipped;
        system.project_affine(gnext);
        if ((gnext - guess).norm() < step_norm) {
          next = gnext;
          step_norm = 0;  // restart the extrapolation window
        }
      }
    }
    prev_step = std::move(step);
    prev_step_norm = step_norm;
    m = std::move(next);
  }

  result.status = SdpFeasibility::Inconclusive;
  result.matrix = system.from_svec(m);
  EigResult proj = psd_project(system, m);
  result.min_eigenvalue = proj.min_eig;
  result.constraint_residual = system.residual_inf(m);
  return result;
}

std::pair<double, double> verify_farkas(const SymmetricConstraintSystem& system,
                                        const Eigen::VectorXd& y) {
  Eigen::MatrixXd slack = -system.combine(y);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(slack);
  return {eig.eigenvalues().minCoeff(), system.rhs_dot(y)};
}

}  // namespace ctx
