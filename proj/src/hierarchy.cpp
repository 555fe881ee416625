#include "ctx/hierarchy.hpp"

#include "ctx/sdp.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

namespace ctx {

Word WordIndex::canonical(Word w) const {
  if (flags.commutativity) std::sort(w.letters.begin(), w.letters.end());
  if (flags.collapse_repeats())
    w.letters.erase(std::unique(w.letters.begin(), w.letters.end()), w.letters.end());
  return w;
}

int WordIndex::index_of(const Word& w) const {
  auto it = lookup_.find(canonical(w).letters);
  return it == lookup_.end() ? -1 : it->second;
}

WordIndex enumerate_words(const Scenario& scenario, int k, MomentFlags flags, std::size_t cap) {
  if (k < 1) throw Error(ErrorCode::ParseError, "order must be >= 1");
  WordIndex index;
  index.order = k;
  index.flags = flags;

  // BFS over canonical forms; canonicalization is compositional, so extending
  // canonical words by one letter reaches every canonical of a raw word of
  // length <= k.
  std::set<std::vector<int>> seen;
  std::deque<Word> queue;
  seen.insert({});
  queue.push_back(Word{});
  std::vector<Word> all{Word{}};

  while (!queue.empty()) {
    Word w = std::move(queue.front());
    queue.pop_front();
    if (static_cast<int>(w.letters.size()) >= k) continue;
    for (int v = 0; v < scenario.vertex_count(); ++v) {
      Word ext = w;
      ext.letters.push_back(v);
      ext = index.canonical(std::move(ext));
      if (seen.insert(ext.letters).second) {
        if (all.size() + 1 > cap)
          throw Error(ErrorCode::SizeOverflow,
                      "word index exceeds cap of " + std::to_string(cap) + " rows");
        all.push_back(ext);
        queue.push_back(std::move(ext));
      }
    }
  }

  std::sort(all.begin(), all.end());
  index.words_ = std::move(all);
  for (int i = 0; i < index.dim(); ++i) index.lookup_[index.words_[i].letters] = i;
  return index;
}

MomentConstraintSystem build_constraints(const Scenario& scenario, const WordIndex& index,
                                         MomentFlags flags) {
  MomentConstraintSystem sys;
  sys.dim = index.dim();

  // anchor
  sys.equalities.push_back({{{0, 0, 1.0}}, 1.0});

  if (flags.normalization) {
    // One instance per (row word, edge, column word), emitted only when every
    // extension stays indexable at this order (boundary rule).
    for (int i = 0; i < index.dim(); ++i) {
      const Word& vw = index.word(i);
      for (const auto& edge : scenario.edges()) {
        std::vector<int> extended;
        extended.reserve(edge.size());
        bool indexable = true;
        for (int u : edge) {
          Word ext = vw;
          ext.letters.push_back(u);
          int pos = index.index_of(ext);
          if (pos < 0) {
            indexable = false;
            break;
          }
          extended.push_back(pos);
        }
        if (!indexable) continue;
        for (int j = 0; j < index.dim(); ++j) {
          MomentEquality eq;
          for (int pos : extended) eq.terms.emplace_back(pos, j, 1.0);
          eq.terms.emplace_back(i, j, -1.0);
          eq.rhs = 0;
          // collapse duplicate entries; drop trivial 0 = 0 rows
          std::map<std::pair<int, int>, double> acc;
          for (auto& [r, c, coeff] : eq.terms) {
            int a = std::min(r, c), b = std::max(r, c);
            acc[{a, b}] += coeff;
          }
          eq.terms.clear();
          for (auto& [rc, coeff] : acc)
            if (coeff != 0.0) eq.terms.emplace_back(rc.first, rc.second, coeff);
          if (!eq.terms.empty()) sys.equalities.push_back(std::move(eq));
        }
      }
    }
  }

  if (flags.orthogonality) {
    // Zero at (x⃗, y⃗) when some admissible letter of x⃗ is orthogonal to one
    // of y⃗. Without commutativity only the final letters are admissible;
    // with it any letter can be permuted to the end.
    Graph orth = orthogonality_graph(scenario);
    const int d = index.dim();
    std::vector<Bitset> admissible(static_cast<std::size_t>(d));
    std::vector<Bitset> reach(static_cast<std::size_t>(d));  // orth neighborhoods of admissible letters
    for (int i = 0; i < d; ++i) {
      Bitset letters(scenario.vertex_count());
      const auto& w = index.word(i).letters;
      if (!w.empty()) {
        if (flags.commutativity)
          for (int v : w) letters.set(v);
        else
          letters.set(w.back());
      }
      Bitset nbr(scenario.vertex_count());
      letters.for_each([&](int v) { nbr |= orth.adj[v]; });
      admissible[static_cast<std::size_t>(i)] = std::move(letters);
      reach[static_cast<std::size_t>(i)] = std::move(nbr);
    }
    for (int i = 0; i < d; ++i)
      for (int j = i; j < d; ++j)
        if (reach[static_cast<std::size_t>(i)].intersects(admissible[static_cast<std::size_t>(j)]))
          sys.zeros.emplace_back(i, j);
  }

  return sys;
}

namespace {

// Deterministic translation into the svec system: deduplicated structural
// rows first, then one data row per vertex.
struct SolveSystem {
  SymmetricConstraintSystem svec;
  int data_row_start = 0;

  SolveSystem(const Scenario& scenario, const WordIndex& index, const MomentConstraintSystem& sys,
              const Eigen::VectorXd& p)
      : svec(sys.dim) {
    for (const auto& eq : sys.equalities) svec.add_equality(eq.terms, eq.rhs);
    for (const auto& [r, c] : sys.zeros) svec.add_entry_pin(r, c, 0.0);
    svec.deduplicate();
    data_row_start = svec.rows();
    for (int v = 0; v < scenario.vertex_count(); ++v) {
      int idx = index.index_of(Word{{v}});
      svec.add_entry_pin(0, idx, p[v]);
    }
    svec.prepare();
  }
};

std::string family_name(MomentFlags flags, int k) {
  std::string base = flags.commutativity ? "c" : (flags.orthogonality ? "q" : "g");
  return base + std::to_string(k);
}

Verdict check_family(const Scenario& scenario, const Eigen::VectorXd& p, int k, MomentFlags flags,
                     const Tolerances& tol, const Budget& budget, std::size_t cap) {
  tol.validate();
  Verdict verdict;
  verdict.set_name = family_name(flags, k);
  verdict.tolerance = tol.sdp_eps;

  auto gate = is_model(scenario, p, tol);
  if (!gate.ok) {
    verdict.decision = Decision::NonMember;
    ViolatedConstraint c;
    c.description = "not a probabilistic model";
    if (!gate.violated_edges.empty()) {
      c.edge = gate.violated_edges.front();
      c.plus = scenario.edge(c.edge);
      c.rhs_constant = 1;
    } else {
      c.plus = {gate.out_of_range.front()};
    }
    verdict.certificate = c;
    return verdict;
  }

  WordIndex index = enumerate_words(scenario, k, flags, cap);
  MomentConstraintSystem sys = build_constraints(scenario, index, flags);
  SolveSystem solve(scenario, index, sys, p);

  SdpOptions opts;
  opts.max_iterations = budget.iterations;
  opts.feasible_eig_floor = tol.sdp_eps * 1e-2;
  opts.infeasible_min_gap = tol.sdp_eps * 1e-1;
  opts.trace_bound = flags.orthogonality ? static_cast<double>(index.dim()) : 0.0;

  SdpResult res = solve_feasibility(solve.svec, opts);
  verdict.stats.iterations = res.iterations;

  if (res.status == SdpFeasibility::Feasible) {
    MomentMatrixRef cert;
    cert.matrix = res.matrix;
    cert.order = k;
    cert.normalization = flags.normalization;
    cert.orthogonality = flags.orthogonality;
    cert.commutativity = flags.commutativity;
    auto check = verify_certificate(scenario, cert, p, tol);
    if (!check.ok) {
      verdict.decision = Decision::Inconclusive;
      return verdict;
    }
    verdict.decision = Decision::Member;
    verdict.certificate = std::move(cert);
    return verdict;
  }

  if (res.status == SdpFeasibility::Infeasible) {
    FarkasDual cert;
    cert.y = res.farkas_y;
    cert.gap = res.farkas_gap;
    cert.slack_min_eigenvalue = res.farkas_slack_min;
    cert.trace_bound = opts.trace_bound;
    // Hyperplane on model space: data-row components of y.
    cert.functional.coefficients = Eigen::VectorXd::Zero(scenario.vertex_count());
    double base_part = 0;
    for (int r = 0; r < solve.svec.rows(); ++r) {
      if (r >= solve.data_row_start) {
        cert.functional.coefficients[r - solve.data_row_start] = cert.y[r];
      }
    }
    base_part = cert.gap - cert.functional.coefficients.dot(p);
    cert.functional.classical_bound = -base_part;  // feasible data must satisfy z.q <= -base
    cert.functional.value = cert.functional.coefficients.dot(p);
    verdict.decision = Decision::NonMember;
    verdict.certificate = std::move(cert);
    return verdict;
  }

  verdict.decision = Decision::Inconclusive;
  return verdict;
}

}  // namespace

MomentMatrixRef rank_one_certificate(const Scenario& scenario, const Eigen::VectorXd& p, int k,
                                     std::size_t cap) {
  if (p.size() != scenario.vertex_count())
    throw Error(ErrorCode::LengthMismatch, "model length mismatch");
  WordIndex index = enumerate_words(scenario, k, MomentFlags::G(), cap);
  Eigen::VectorXd m(index.dim());
  for (int i = 0; i < index.dim(); ++i) {
    double prod = 1;
    for (int v : index.word(i).letters) prod *= p[v];
    m[i] = prod;
  }
  MomentMatrixRef cert;
  cert.matrix = m * m.transpose();
  cert.order = k;
  cert.normalization = true;
  cert.orthogonality = false;
  cert.commutativity = false;
  return cert;
}

MomentMatrixRef classical_certificate(const Scenario& scenario, const Eigen::VectorXd& p,
                                      const MixtureWeights& mixture, int k, std::size_t cap,
                                      double eps) {
  if (!verify_mixture(scenario, mixture, p, eps))
    throw Error(ErrorCode::NotAMixture, "weights do not reproduce the model");

  WordIndex index = enumerate_words(scenario, k, MomentFlags::C(), cap);
  const int d = index.dim();
  const int L = static_cast<int>(mixture.supports.size());

  // With commutativity + collapse, a word's entry under λ is 1 iff all its
  // letters lie in the support of p_λ.
  std::vector<Bitset> supports;
  supports.reserve(static_cast<std::size_t>(L));
  for (const auto& s : mixture.supports) {
    Bitset b(scenario.vertex_count());
    for (int v : s) b.set(v);
    supports.push_back(std::move(b));
  }

  Eigen::MatrixXd hits(d, L);  // hits(i, λ) = [letters of word i ⊆ support λ]
  for (int i = 0; i < d; ++i)
    for (int l = 0; l < L; ++l) {
      bool inside = true;
      for (int v : index.word(i).letters)
        if (!supports[static_cast<std::size_t>(l)].test(v)) {
          inside = false;
          break;
        }
      hits(i, l) = inside ? 1.0 : 0.0;
    }

  MomentMatrixRef cert;
  cert.matrix = hits * mixture.weights.asDiagonal() * hits.transpose();
  cert.order = k;
  cert.normalization = true;
  cert.orthogonality = true;
  cert.commutativity = true;
  return cert;
}

CertificateCheck verify_certificate(const Scenario& scenario, const MomentMatrixRef& certificate,
                                    const Eigen::VectorXd& p, const Tolerances& tol) {
  tol.validate();
  MomentFlags flags{certificate.normalization, certificate.orthogonality,
                    certificate.commutativity};
  WordIndex index = enumerate_words(scenario, certificate.order, flags,
                                    static_cast<std::size_t>(certificate.matrix.rows()) + 1);
  CertificateCheck check;
  if (certificate.matrix.rows() != index.dim() || certificate.matrix.cols() != index.dim())
    return check;

  const Eigen::MatrixXd& M = certificate.matrix;
  MomentConstraintSystem sys = build_constraints(scenario, index, flags);
  for (const auto& eq : sys.equalities) {
    double v = -eq.rhs;
    for (const auto& [r, c, coeff] : eq.terms) v += coeff * M(r, c);
    check.max_equality_residual = std::max(check.max_equality_residual, std::abs(v));
  }
  for (const auto& [r, c] : sys.zeros)
    check.max_zero_violation = std::max(check.max_zero_violation, std::abs(M(r, c)));
  for (int v = 0; v < scenario.vertex_count(); ++v) {
    int idx = index.index_of(Word{{v}});
    check.max_data_residual = std::max(check.max_data_residual, std::abs(M(0, idx) - p[v]));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(M);
  check.min_eigenvalue = eig.eigenvalues().minCoeff();

  check.ok = check.max_equality_residual <= tol.sdp_eps && check.max_zero_violation <= tol.sdp_eps &&
             check.max_data_residual <= tol.sdp_eps && check.min_eigenvalue >= -tol.sdp_eps;
  return check;
}

Verdict check_Gk(const Scenario& scenario, const Eigen::VectorXd& p, int k, const Tolerances& tol,
                 const Budget& budget, std::size_t cap) {
  return check_family(scenario, p, k, MomentFlags::G(), tol, budget, cap);
}
Verdict check_Qk(const Scenario& scenario, const Eigen::VectorXd& p, int k, const Tolerances& tol,
                 const Budget& budget, std::size_t cap) {
  return check_family(scenario, p, k, MomentFlags::Q(), tol, budget, cap);
}
Verdict check_Ck(const Scenario& scenario, const Eigen::VectorXd& p, int k, const Tolerances& tol,
                 const Budget& budget, std::size_t cap) {
  return check_family(scenario, p, k, MomentFlags::C(), tol, budget, cap);
}

bool verify_hierarchy_farkas(const Scenario& scenario, const Eigen::VectorXd& p, int k,
                             MomentFlags flags, const FarkasDual& cert, const Tolerances& tol,
                             std::size_t cap) {
  WordIndex index = enumerate_words(scenario, k, flags, cap);
  MomentConstraintSystem sys = build_constraints(scenario, index, flags);
  SolveSystem solve(scenario, index, sys, p);
  if (cert.y.size() != solve.svec.rows()) return false;
  auto [smin, gap] = verify_farkas(solve.svec, cert.y);
  double needed = std::max(0.0, -smin) * cert.trace_bound;
  bool exactness_ok = cert.trace_bound > 0 || smin >= -1e-13;
  return exactness_ok && gap > needed + tol.sdp_eps * 1e-1;
}

}  // namespace ctx
