// Membership verdicts and the certificates that back them. Every MEMBER /
// NON_MEMBER verdict carries evidence that an independent verifier can check
// without re-running the solver that produced it.
#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace ctx {

enum class Decision { Member, NonMember, Inconclusive };

inline const char* to_string(Decision d) {
  switch (d) {
    case Decision::Member: return "MEMBER";
    case Decision::NonMember: return "NON_MEMBER";
    default: return "INCONCLUSIVE";
  }
}

/// Linear functional over vertices separating a model from the classical set:
/// value on every deterministic model <= classical_bound, value on the tested
/// model = `value` > classical_bound.
struct SeparatingFunctional {
  Eigen::VectorXd coefficients;
  double classical_bound = 0;
  double value = 0;
};

/// A violated equality or range constraint, kept both as index sets
/// (sum over `plus` = sum over `minus` + `rhs_constant`) and rendered text.
struct ViolatedConstraint {
  std::string description;
  std::vector<int> plus;
  std::vector<int> minus;
  double rhs_constant = 0;
  double lhs_value = 0;
  double rhs_value = 0;
  int edge = -1;  // edge index when the constraint is an edge normalization
};

/// Convex decomposition into deterministic models, stored by support so the
/// certificate is self-contained.
struct MixtureWeights {
  std::vector<std::vector<int>> supports;  // chosen-vertex sets
  Eigen::VectorXd weights;
};

/// Orthogonal event set whose probabilities sum to `total`. Events are
/// k-tuples of base-scenario vertices (singletons for k = 1).
struct OrthogonalSet {
  std::vector<std::vector<int>> events;
  double total = 0;
};

struct ThetaEvidence {
  double lower = 0;
  double upper = 0;
};

/// Feasible moment matrix of some order, with the constraint families it
/// satisfies.
struct MomentMatrixRef {
  Eigen::MatrixXd matrix;
  int order = 1;
  bool normalization = true;
  bool orthogonality = false;
  bool commutativity = false;
};

/// Farkas certificate of SDP infeasibility: y combines the affine constraints
/// into -S with S (nearly) PSD while y.b = gap > 0, so no PSD matrix can
/// satisfy them. `functional` is the induced hyperplane on model space.
struct FarkasDual {
  Eigen::VectorXd y;
  double gap = 0;
  double slack_min_eigenvalue = 0;
  double trace_bound = 0;
  SeparatingFunctional functional;
};

/// The scenario admits no deterministic model, so the classical set is empty.
struct EmptyClassicalSet {};

using Certificate =
    std::variant<std::monostate, ViolatedConstraint, MixtureWeights, SeparatingFunctional,
                 OrthogonalSet, ThetaEvidence, MomentMatrixRef, FarkasDual, EmptyClassicalSet>;

struct VerdictStats {
  std::int64_t iterations = 0;
  std::uint64_t nodes = 0;
  double seconds = 0;
};

struct Verdict {
  Decision decision = Decision::Inconclusive;
  double tolerance = 0;
  Certificate certificate;
  VerdictStats stats;
  std::string set_name;
};

}  // namespace ctx
