#include "ctx/membership.hpp"

#include "ctx/clique.hpp"
#include "ctx/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ctx {

namespace {

ViolatedConstraint edge_violation(const Scenario& scenario, const Eigen::VectorXd& p, int edge) {
  ViolatedConstraint c;
  c.edge = edge;
  c.plus = scenario.edge(edge);
  c.rhs_constant = 1;
  double sum = 0;
  std::string rendered;
  for (int v : c.plus) {
    sum += p[v];
    if (!rendered.empty()) rendered += " + ";
    rendered += "p(" + scenario.label(v) + ")";
  }
  c.lhs_value = sum;
  c.rhs_value = 1;
  c.description = rendered + " = " + std::to_string(sum) + ", expected 1";
  return c;
}

Verdict model_gate_failure(const Scenario& scenario, const Eigen::VectorXd& p,
                           const ModelCheckResult& check, const std::string& set_name,
                           double tolerance) {
  Verdict verdict;
  verdict.set_name = set_name;
  verdict.tolerance = tolerance;
  verdict.decision = Decision::NonMember;
  if (!check.violated_edges.empty()) {
    verdict.certificate = edge_violation(scenario, p, check.violated_edges.front());
  } else {
    ViolatedConstraint c;
    int v = check.out_of_range.front();
    c.plus = {v};
    c.lhs_value = p[v];
    c.description = "p(" + scenario.label(v) + ") = " + std::to_string(p[v]) + " outside [0,1]";
    verdict.certificate = c;
  }
  return verdict;
}

}  // namespace

Verdict check_general(const Scenario& scenario, const Eigen::VectorXd& p, const Tolerances& tol) {
  auto check = is_model(scenario, p, tol);
  if (!check.ok) return model_gate_failure(scenario, p, check, "g", tol.normalization_eps);
  Verdict verdict;
  verdict.set_name = "g";
  verdict.tolerance = tol.normalization_eps;
  verdict.decision = Decision::Member;
  return verdict;
}

std::vector<NsEquality> no_signaling_equalities(const BellParams& params) {
  params.validate();
  const int n = params.parties;
  const int m = params.settings;
  const int k = params.outcomes;

  std::vector<NsEquality> out;
  std::vector<int> outs(n), sets(n);

  auto marginal_events = [&](const std::vector<int>& kept, const std::vector<int>& traced,
                             const std::vector<int>& a_kept, const std::vector<int>& x_kept,
                             const std::vector<int>& x_traced) {
    std::vector<int> events;
    std::vector<int> a_traced(traced.size(), 0);
    while (true) {
      for (std::size_t i = 0; i < kept.size(); ++i) {
        outs[kept[i]] = a_kept[i];
        sets[kept[i]] = x_kept[i];
      }
      for (std::size_t i = 0; i < traced.size(); ++i) {
        outs[traced[i]] = a_traced[i];
        sets[traced[i]] = x_traced[i];
      }
      events.push_back(bell_vertex_index(params, outs, sets));
      std::size_t pos = 0;
      while (pos < a_traced.size() && ++a_traced[pos] == k) a_traced[pos++] = 0;
      if (pos == a_traced.size()) break;
    }
    std::sort(events.begin(), events.end());
    return events;
  };

  auto render = [&](const std::vector<int>& events) {
    std::string s;
    std::vector<int> o(n), x(n);
    for (int v : events) {
      bell_vertex_decode(params, v, o, x);
      if (!s.empty()) s += " + ";
      s += "p(" + bell_vertex_label(params, o, x) + ")";
    }
    return s;
  };

  for (int mask = 1; mask + 1 < (1 << n); ++mask) {
    std::vector<int> kept, traced;
    for (int i = 0; i < n; ++i) ((mask >> i) & 1 ? kept : traced).push_back(i);

    std::vector<int> x_kept(kept.size(), 0);
    while (true) {
      std::vector<int> a_kept(kept.size(), 0);
      while (true) {
        // reference: all traced settings 0; equate every other choice to it
        std::vector<int> x_ref(traced.size(), 0);
        auto ref = marginal_events(kept, traced, a_kept, x_kept, x_ref);
        std::vector<int> x_tr(traced.size(), 0);
        while (true) {
          std::size_t pos = 0;
          while (pos < x_tr.size() && ++x_tr[pos] == m) x_tr[pos++] = 0;
          if (pos == x_tr.size()) break;
          NsEquality eq;
          eq.lhs = ref;
          eq.rhs = marginal_events(kept, traced, a_kept, x_kept, x_tr);
          eq.rendered = render(eq.lhs) + " = " + render(eq.rhs);
          out.push_back(std::move(eq));
        }
        std::size_t pos = 0;
        while (pos < a_kept.size() && ++a_kept[pos] == k) a_kept[pos++] = 0;
        if (pos == a_kept.size()) break;
      }
      std::size_t pos = 0;
      while (pos < x_kept.size() && ++x_kept[pos] == m) x_kept[pos++] = 0;
      if (pos == x_kept.size()) break;
    }
  }
  return out;
}

Verdict no_signaling_check(const BellParams& params, const Eigen::VectorXd& p,
                           const Tolerances& tol) {
  tol.validate();
  params.validate();
  const std::int64_t nv = params.vertex_count();
  if (p.size() != nv)
    throw Error(ErrorCode::LengthMismatch, "model length does not match the Bell scenario");

  Verdict verdict;
  verdict.set_name = "ns";
  verdict.tolerance = tol.lp_eps;

  const int n = params.parties;
  std::vector<int> o(n), x(n);

  for (int v = 0; v < p.size(); ++v) {
    if (p[v] >= -tol.lp_eps && p[v] <= 1 + tol.lp_eps) continue;
    bell_vertex_decode(params, v, o, x);
    ViolatedConstraint c;
    c.plus = {v};
    c.lhs_value = p[v];
    c.description = "p(" + bell_vertex_label(params, o, x) + ") outside [0,1]";
    verdict.decision = Decision::NonMember;
    verdict.certificate = c;
    return verdict;
  }

  // Per-setting normalization.
  {
    std::vector<int> settings(n, 0);
    while (true) {
      double sum = 0;
      std::vector<int> events;
      std::vector<int> outs(n, 0);
      while (true) {
        int v = bell_vertex_index(params, outs, settings);
        events.push_back(v);
        sum += p[v];
        std::size_t pos = 0;
        while (pos < outs.size() && ++outs[pos] == params.outcomes) outs[pos++] = 0;
        if (pos == outs.size()) break;
      }
      if (std::abs(sum - 1.0) > tol.lp_eps) {
        ViolatedConstraint c;
        c.plus = events;
        c.rhs_constant = 1;
        c.lhs_value = sum;
        c.rhs_value = 1;
        std::string xs;
        for (int i = 0; i < n; ++i) xs += std::to_string(settings[i]);
        c.description = "setting " + xs + " sums to " + std::to_string(sum);
        verdict.decision = Decision::NonMember;
        verdict.certificate = c;
        return verdict;
      }
      std::size_t pos = 0;
      while (pos < settings.size() && ++settings[pos] == params.settings) settings[pos++] = 0;
      if (pos == settings.size()) break;
    }
  }

  for (const auto& eq : no_signaling_equalities(params)) {
    double lhs = 0, rhs = 0;
    for (int v : eq.lhs) lhs += p[v];
    for (int v : eq.rhs) rhs += p[v];
    if (std::abs(lhs - rhs) > tol.lp_eps) {
      ViolatedConstraint c;
      c.plus = eq.lhs;
      c.minus = eq.rhs;
      c.lhs_value = lhs;
      c.rhs_value = rhs;
      c.description = eq.rendered;
      verdict.decision = Decision::NonMember;
      verdict.certificate = c;
      return verdict;
    }
  }

  verdict.decision = Decision::Member;
  return verdict;
}

Verdict check_classical(const Scenario& scenario, const Eigen::VectorXd& p, const Tolerances& tol,
                        const Budget& budget) {
  tol.validate();
  Verdict verdict;
  verdict.set_name = "classical";
  verdict.tolerance = tol.lp_eps;

  auto gate = is_model(scenario, p, tol);
  if (!gate.ok) return model_gate_failure(scenario, p, gate, "classical", tol.lp_eps);

  auto dets = enumerate_deterministic_models(scenario);
  if (dets.empty()) {
    verdict.decision = Decision::NonMember;
    verdict.certificate = EmptyClassicalSet{};
    return verdict;
  }

  const int n = scenario.vertex_count();
  const int L = static_cast<int>(dets.size());
  Eigen::MatrixXd A(n + 1, L);
  for (int j = 0; j < L; ++j) {
    A.col(j).head(n) = dets[static_cast<std::size_t>(j)].to_vector();
    A(n, j) = 1;
  }
  Eigen::VectorXd b(n + 1);
  b.head(n) = p;
  b[n] = 1;

  auto lp = phase_one_simplex(A, b, tol.lp_eps, budget.iterations);
  verdict.stats.iterations = lp.iterations;
  if (lp.budget_exhausted) {
    verdict.decision = Decision::Inconclusive;
    return verdict;
  }

  if (lp.feasible) {
    MixtureWeights cert;
    for (int j = 0; j < L; ++j) {
      if (lp.solution[j] <= 0) continue;
      cert.supports.push_back(dets[static_cast<std::size_t>(j)].chosen());
    }
    cert.weights = Eigen::VectorXd(static_cast<int>(cert.supports.size()));
    int idx = 0;
    for (int j = 0; j < L; ++j)
      if (lp.solution[j] > 0) cert.weights[idx++] = lp.solution[j];
    if (!verify_mixture(scenario, cert, p, 10 * tol.lp_eps)) {
      verdict.decision = Decision::Inconclusive;
      return verdict;
    }
    verdict.decision = Decision::Member;
    verdict.certificate = cert;
    return verdict;
  }

  // Farkas ray -> separating functional with the exact deterministic maximum.
  SeparatingFunctional f;
  f.coefficients = lp.dual_ray.head(n);
  f.value = f.coefficients.dot(p);
  f.classical_bound = -std::numeric_limits<double>::infinity();
  for (const auto& d : dets)
    f.classical_bound = std::max(f.classical_bound, f.coefficients.dot(d.to_vector()));
  if (!(f.value > f.classical_bound + tol.lp_eps)) {
    verdict.decision = Decision::Inconclusive;  // numerically too close to certify
    return verdict;
  }
  verdict.decision = Decision::NonMember;
  verdict.certificate = f;
  return verdict;
}

namespace {

Verdict ce_clique_verdict(const Scenario& scenario, const Graph& graph, const Eigen::VectorXd& w,
                          int k, const Tolerances& tol, const Budget& budget,
                          const std::string& set_name) {
  Verdict verdict;
  verdict.set_name = set_name;
  verdict.tolerance = tol.lp_eps;

  CliqueResult best = max_weight_clique(graph, w, budget.nodes);
  verdict.stats.nodes = best.nodes;

  OrthogonalSet cert;
  cert.total = best.weight;
  const int base = scenario.vertex_count();
  for (int v : best.members) cert.events.push_back(power_vertex_decode(v, base, k));

  if (best.weight > 1 + tol.lp_eps) {
    verdict.decision = Decision::NonMember;  // a found violating set certifies regardless of budget
    verdict.certificate = cert;
  } else if (best.complete) {
    verdict.decision = Decision::Member;
    verdict.certificate = cert;  // the maximum orthogonal set, weight <= 1
  } else {
    verdict.decision = Decision::Inconclusive;
    verdict.certificate = cert;
  }
  return verdict;
}

}  // namespace

Verdict check_ce1(const Scenario& scenario, const Eigen::VectorXd& p, const Tolerances& tol,
                  const Budget& budget) {
  return check_cek(scenario, p, 1, tol, budget);
}

Verdict check_cek(const Scenario& scenario, const Eigen::VectorXd& p, int k, const Tolerances& tol,
                  const Budget& budget, std::size_t vertex_cap) {
  tol.validate();
  if (k < 1) throw Error(ErrorCode::ParseError, "CE level must be >= 1");
  const std::string set_name = "ce" + std::to_string(k);

  auto gate = is_model(scenario, p, tol);
  if (!gate.ok) return model_gate_failure(scenario, p, gate, set_name, tol.lp_eps);

  Graph orth = orthogonality_graph(scenario);
  Graph gk = power_orthogonality_graph(orth, k, vertex_cap);
  Eigen::VectorXd wk = power_model(p, k, vertex_cap);
  return ce_clique_verdict(scenario, gk, wk, k, tol, budget, set_name);
}

CapacityBracket shannon_capacity_bracket(const Scenario& scenario, const Eigen::VectorXd& p,
                                         int k_max, const Tolerances& tol, const Budget& budget,
                                         std::size_t vertex_cap) {
  tol.validate();
  if (k_max < 1) throw Error(ErrorCode::ParseError, "k_max must be >= 1");
  auto gate = is_model(scenario, p, tol);
  if (!gate.ok) throw Error(ErrorCode::ScenarioMismatch, "capacity bracket needs a valid model");

  CapacityBracket out;
  Graph orth = orthogonality_graph(scenario);
  const int base = scenario.vertex_count();

  for (int k = 1; k <= k_max; ++k) {
    Graph gk;
    Eigen::VectorXd wk;
    try {
      gk = power_orthogonality_graph(orth, k, vertex_cap);
      wk = power_model(p, k, vertex_cap);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::SizeOverflow) break;
      throw;
    }
    CliqueResult c = max_weight_clique(gk, wk, budget.nodes);
    double value = std::pow(c.weight, 1.0 / k);  // any found set lower-bounds the capacity
    if (value > out.lower) {
      out.lower = value;
      out.best_k = k;
      out.witness.events.clear();
      out.witness.total = c.weight;
      for (int v : c.members) out.witness.events.push_back(power_vertex_decode(v, base, k));
    }
    if (!c.complete) out.lower_exact = false;
  }

  ThetaBracket theta = lovasz_theta({non_orthogonality_graph(scenario), p}, tol.sdp_eps * 0.1);
  out.upper = theta.upper;
  out.theta_lower = theta.lower;
  return out;
}

SeparatingFunctional rescale_functional(const Scenario& scenario, const SeparatingFunctional& f,
                                        double bound_target, double value_target) {
  double gamma = f.value, beta = f.classical_bound;
  if (!(gamma > beta))
    throw Error(ErrorCode::ParseError, "functional does not separate: value <= bound");
  double scale = (value_target - bound_target) / (gamma - beta);
  double offset = bound_target / scale - beta;  // realized along edge normalizations

  const double per_edge = offset / scenario.edge_count();
  SeparatingFunctional out;
  out.coefficients = f.coefficients;
  for (int v = 0; v < out.coefficients.size(); ++v)
    out.coefficients[v] += per_edge * static_cast<double>(scenario.edges_containing(v).size());
  out.coefficients *= scale;
  out.classical_bound = bound_target;
  out.value = value_target;
  return out;
}

bool verify_mixture(const Scenario& scenario, const MixtureWeights& cert, const Eigen::VectorXd& p,
                    double eps) {
  if (cert.weights.size() != static_cast<int>(cert.supports.size())) return false;
  double total = 0;
  Eigen::VectorXd mix = Eigen::VectorXd::Zero(scenario.vertex_count());
  for (int i = 0; i < cert.weights.size(); ++i) {
    double q = cert.weights[i];
    if (q < -eps) return false;
    total += q;
    // each support must be a deterministic model: exactly one vertex per edge
    std::vector<char> member(static_cast<std::size_t>(scenario.vertex_count()), 0);
    for (int v : cert.supports[static_cast<std::size_t>(i)]) {
      if (v < 0 || v >= scenario.vertex_count()) return false;
      member[static_cast<std::size_t>(v)] = 1;
      mix[v] += q;
    }
    for (const auto& edge : scenario.edges()) {
      int count = 0;
      for (int v : edge) count += member[static_cast<std::size_t>(v)];
      if (count != 1) return false;
    }
  }
  if (std::abs(total - 1.0) > eps) return false;
  return (mix - p).lpNorm<Eigen::Infinity>() <= eps;
}

bool verify_functional(const Scenario& scenario, const SeparatingFunctional& f,
                       const Eigen::VectorXd& p, double eps) {
  if (f.coefficients.size() != scenario.vertex_count() || p.size() != scenario.vertex_count())
    return false;
  if (std::abs(f.coefficients.dot(p) - f.value) > eps) return false;
  for (const auto& d : enumerate_deterministic_models(scenario))
    if (f.coefficients.dot(d.to_vector()) > f.classical_bound + eps) return false;
  return f.value > f.classical_bound + eps;
}

bool verify_orthogonal_set(const Scenario& scenario, const OrthogonalSet& cert,
                           const Eigen::VectorXd& p, double eps) {
  if (cert.events.empty()) return true;
  Graph orth = orthogonality_graph(scenario);
  const std::size_t k = cert.events.front().size();
  double total = 0;
  for (std::size_t i = 0; i < cert.events.size(); ++i) {
    if (cert.events[i].size() != k) return false;
    double prob = 1;
    for (int v : cert.events[i]) {
      if (v < 0 || v >= scenario.vertex_count()) return false;
      prob *= p[v];
    }
    total += prob;
    for (std::size_t j = 0; j < i; ++j) {
      // pairwise product orthogonality: some coordinate orthogonal
      bool orthogonal = false;
      for (std::size_t c = 0; c < k && !orthogonal; ++c)
        orthogonal = orth.has_edge(cert.events[i][c], cert.events[j][c]);
      if (!orthogonal) return false;
    }
  }
  return std::abs(total - cert.total) <= eps;
}

}  // namespace ctx
