// Moment-matrix certificates of order k and the G_k / Q_k / C_k hierarchies:
// word indexing with canonical-form reduction, constraint assembly, SDP
// feasibility checks, and the two explicit certificate constructions used as
// oracles.
#pragma once

#include "ctx/core.hpp"
#include "ctx/membership.hpp"
#include "ctx/verdict.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ctx {

/// Which constraint families a certificate must satisfy. Canonical word forms
/// depend on them: commutativity sorts letters; normalization together with
/// orthogonality collapses adjacent repeated letters.
struct MomentFlags {
  bool normalization = true;
  bool orthogonality = false;
  bool commutativity = false;

  static MomentFlags G() { return {true, false, false}; }
  static MomentFlags Q() { return {true, true, false}; }
  static MomentFlags C() { return {true, true, true}; }

  bool collapse_repeats() const { return normalization && orthogonality; }
};

struct Word {
  std::vector<int> letters;  // empty = the word ∅

  bool operator==(const Word&) const = default;
  bool operator<(const Word& o) const {
    if (letters.size() != o.letters.size()) return letters.size() < o.letters.size();
    return letters < o.letters;
  }
};

/// Canonically ordered words of length <= k: ∅ first, then by (length, lex).
/// Two words with the same canonical form share an index.
class WordIndex {
 public:
  int order = 0;
  MomentFlags flags;

  int dim() const { return static_cast<int>(words_.size()); }
  const std::vector<Word>& words() const { return words_; }
  const Word& word(int i) const { return words_[static_cast<std::size_t>(i)]; }

  Word canonical(Word w) const;
  /// Index of the canonical form, or -1 when it is not in the index.
  int index_of(const Word& w) const;

 private:
  friend WordIndex enumerate_words(const Scenario&, int, MomentFlags, std::size_t);
  std::vector<Word> words_;
  std::map<std::vector<int>, int> lookup_;
};

WordIndex enumerate_words(const Scenario& scenario, int k, MomentFlags flags,
                          std::size_t cap = 5000);

struct MomentEquality {
  std::vector<std::tuple<int, int, double>> terms;  // (row, col, coeff) on M
  double rhs = 0;
};

struct MomentConstraintSystem {
  int dim = 0;
  std::vector<MomentEquality> equalities;        // includes the anchor M(∅,∅) = 1
  std::vector<std::pair<int, int>> zeros;        // forced-zero entries
  std::vector<std::pair<std::pair<int, int>, std::pair<int, int>>> identifications;
  // identifications stay empty: canonical indexing merges identified entries
};

/// Assembles Normalization equalities (boundary rule: only when every
/// extended word is indexable), Orthogonality zeros, and the anchor. Data
/// constraints M(v, ∅) = p(v) are added at solve time.
MomentConstraintSystem build_constraints(const Scenario& scenario, const WordIndex& index,
                                         MomentFlags flags);

/// Rank-1 product certificate M(v⃗, w⃗) = prod p(v_i) * prod p(w_j) on the raw
/// normalization-only index; exact PSD Normalization witness for any model.
MomentMatrixRef rank_one_certificate(const Scenario& scenario, const Eigen::VectorXd& p, int k,
                                     std::size_t cap = 5000);

/// Diagonal-construction certificate for a classical model: entry =
/// sum_λ q_λ * prod over all letters of p_λ(letter). Throws NotAMixture when
/// the weights fail to reproduce p.
MomentMatrixRef classical_certificate(const Scenario& scenario, const Eigen::VectorXd& p,
                                      const MixtureWeights& mixture, int k,
                                      std::size_t cap = 5000, double eps = 1e-8);

struct CertificateCheck {
  bool ok = false;
  double max_equality_residual = 0;
  double max_zero_violation = 0;
  double max_data_residual = 0;
  double min_eigenvalue = 0;
};

/// Independent verification of a moment certificate against the rebuilt
/// constraint system and the model's data constraints.
CertificateCheck verify_certificate(const Scenario& scenario, const MomentMatrixRef& certificate,
                                    const Eigen::VectorXd& p, const Tolerances& tol = {});

Verdict check_Gk(const Scenario& scenario, const Eigen::VectorXd& p, int k,
                 const Tolerances& tol = {}, const Budget& budget = {}, std::size_t cap = 5000);
Verdict check_Qk(const Scenario& scenario, const Eigen::VectorXd& p, int k,
                 const Tolerances& tol = {}, const Budget& budget = {}, std::size_t cap = 5000);
Verdict check_Ck(const Scenario& scenario, const Eigen::VectorXd& p, int k,
                 const Tolerances& tol = {}, const Budget& budget = {}, std::size_t cap = 5000);

/// Re-derives a NON_MEMBER Farkas verdict from scratch: rebuilds the
/// deduplicated system plus data rows and checks the combination y against
/// the soundness condition gap > max(0, -lambda_min) * trace_bound.
bool verify_hierarchy_farkas(const Scenario& scenario, const Eigen::VectorXd& p, int k,
                             MomentFlags flags, const FarkasDual& cert,
                             const Tolerances& tol = {}, std::size_t cap = 5000);

}  // namespace ctx
