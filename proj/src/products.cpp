#include "ctx/products.hpp"

#include <algorithm>
#include <set>

namespace ctx {

void BellParams::validate() const {
  if (parties < 1 || settings < 1 || outcomes < 1)
    throw Error(ErrorCode::ParseError, "Bell parameters must all be >= 1");
}

std::int64_t BellParams::vertex_count() const {
  std::int64_t n = 1;
  for (int i = 0; i < parties; ++i) {
    n *= static_cast<std::int64_t>(settings) * outcomes;
    if (n > (std::int64_t{1} << 40)) return n;  // saturate, caller checks caps
  }
  return n;
}

namespace {

std::string digit(int value) {
  // Single-character digits keep the concatenated Bell labels unambiguous for
  // m, k <= 10; larger alphabets fall back to bracketed numbers.
  if (value < 10) return std::string(1, static_cast<char>('0' + value));
  return "[" + std::to_string(value) + "]";
}

// "outs|sets" with exactly one bar is Bell form.
bool is_bell_label(const std::string& label) {
  auto bar = label.find('|');
  return bar != std::string::npos && label.find('|', bar + 1) == std::string::npos;
}

// Bell labels concatenate componentwise: "ab|xy". Everything else joins with '*'.
std::string merge_labels(const std::string& la, const std::string& lb) {
  if (is_bell_label(la) && is_bell_label(lb)) {
    auto ba = la.find('|');
    auto bb = lb.find('|');
    return la.substr(0, ba) + lb.substr(0, bb) + "|" + la.substr(ba + 1) + lb.substr(bb + 1);
  }
  return la + "*" + lb;
}

}  // namespace

Scenario single_party_scenario(int settings, int outcomes) {
  if (settings < 1 || outcomes < 1)
    throw Error(ErrorCode::ParseError, "settings and outcomes must be >= 1");
  std::vector<std::string> labels;
  std::vector<std::vector<int>> edges;
  labels.reserve(static_cast<std::size_t>(settings) * outcomes);
  for (int x = 0; x < settings; ++x) {
    std::vector<int> edge;
    for (int a = 0; a < outcomes; ++a) {
      edge.push_back(static_cast<int>(labels.size()));
      labels.push_back(digit(a) + "|" + digit(x));
    }
    edges.push_back(std::move(edge));
  }
  return validate_scenario(std::move(labels), std::move(edges));
}

FrProduct fr_product(const Scenario& a, const Scenario& b, std::size_t vertex_cap) {
  const std::size_t na = static_cast<std::size_t>(a.vertex_count());
  const std::size_t nb = static_cast<std::size_t>(b.vertex_count());
  if (na * nb > vertex_cap)
    throw Error(ErrorCode::SizeOverflow, "product would have " + std::to_string(na * nb) +
                                             " vertices, cap is " + std::to_string(vertex_cap));

  ProductVertexMap map{static_cast<int>(na), static_cast<int>(nb)};

  std::vector<std::string> labels(na * nb);
  for (int ia = 0; ia < a.vertex_count(); ++ia)
    for (int ib = 0; ib < b.vertex_count(); ++ib)
      labels[static_cast<std::size_t>(map.pair_index(ia, ib))] =
          merge_labels(a.label(ia), b.label(ib));

  std::set<std::vector<int>> edge_set;
  // Direction A: choose e_A, then an edge of B per outcome of e_A.
  auto emit_direction = [&](const Scenario& first, const Scenario& second, bool a_first) {
    for (const auto& e1 : first.edges()) {
      const std::size_t arity = e1.size();
      std::vector<std::size_t> choice(arity, 0);  // index into second.edges()
      const std::size_t n_edges = static_cast<std::size_t>(second.edge_count());
      while (true) {
        std::vector<int> edge;
        for (std::size_t i = 0; i < arity; ++i) {
          for (int w : second.edge(static_cast<int>(choice[i]))) {
            int v = a_first ? map.pair_index(e1[i], w) : map.pair_index(w, e1[i]);
            edge.push_back(v);
          }
        }
        std::sort(edge.begin(), edge.end());
        edge_set.insert(std::move(edge));
        // next function f: e1 -> E(second)
        std::size_t pos = 0;
        while (pos < arity && ++choice[pos] == n_edges) choice[pos++] = 0;
        if (pos == arity) break;
      }
    }
  };
  emit_direction(a, b, true);
  emit_direction(b, a, false);

  std::vector<std::vector<int>> edges(edge_set.begin(), edge_set.end());
  FrProduct out{validate_scenario(std::move(labels), std::move(edges)), map};
  return out;
}

Scenario bell_scenario(const BellParams& params, std::size_t vertex_cap) {
  params.validate();
  if (params.vertex_count() > static_cast<std::int64_t>(vertex_cap))
    throw Error(ErrorCode::SizeOverflow, "Bell scenario exceeds the vertex cap");
  Scenario current = single_party_scenario(params.settings, params.outcomes);
  Scenario party = current;
  for (int i = 1; i < params.parties; ++i)
    current = fr_product(current, party, vertex_cap).scenario;
  return current;
}

int bell_vertex_index(const BellParams& params, std::span<const int> outcomes,
                      std::span<const int> settings) {
  params.validate();
  if (static_cast<int>(outcomes.size()) != params.parties ||
      static_cast<int>(settings.size()) != params.parties)
    throw Error(ErrorCode::LengthMismatch, "need one outcome and one setting per party");
  int idx = 0;
  for (int i = 0; i < params.parties; ++i) {
    if (settings[i] < 0 || settings[i] >= params.settings || outcomes[i] < 0 ||
        outcomes[i] >= params.outcomes)
      throw Error(ErrorCode::ParseError, "outcome or setting out of range");
    idx = idx * (params.settings * params.outcomes) + settings[i] * params.outcomes + outcomes[i];
  }
  return idx;
}

void bell_vertex_decode(const BellParams& params, int vertex, std::vector<int>& outcomes,
                        std::vector<int>& settings) {
  params.validate();
  outcomes.assign(params.parties, 0);
  settings.assign(params.parties, 0);
  for (int i = params.parties - 1; i >= 0; --i) {
    int block = params.settings * params.outcomes;
    int d = vertex % block;
    vertex /= block;
    settings[i] = d / params.outcomes;
    outcomes[i] = d % params.outcomes;
  }
}

std::string bell_vertex_label(const BellParams& params, std::span<const int> outcomes,
                              std::span<const int> settings) {
  std::string out, set;
  for (int i = 0; i < params.parties; ++i) {
    out += digit(outcomes[i]);
    set += digit(settings[i]);
  }
  return out + "|" + set;
}

Eigen::VectorXd product_model(const Scenario& a, const Eigen::VectorXd& p, const Scenario& b,
                              const Eigen::VectorXd& q, const Tolerances& tol) {
  if (p.size() != a.vertex_count() || q.size() != b.vertex_count())
    throw Error(ErrorCode::ScenarioMismatch, "model length does not match its scenario");
  if (!is_model(a, p, tol).ok || !is_model(b, q, tol).ok)
    throw Error(ErrorCode::ScenarioMismatch, "product_model requires valid factor models");
  Eigen::VectorXd out(p.size() * q.size());
  for (int ia = 0; ia < p.size(); ++ia)
    for (int ib = 0; ib < q.size(); ++ib) out[ia * q.size() + ib] = p[ia] * q[ib];
  return out;
}

bool product_orthogonality(const Graph& ga, const Graph& gb, std::pair<int, int> u,
                           std::pair<int, int> v) {
  if (u == v) return false;
  return ga.has_edge(u.first, v.first) || gb.has_edge(u.second, v.second);
}

Graph product_orthogonality_graph(const Graph& ga, const Graph& gb, std::size_t vertex_cap) {
  const std::size_t n = static_cast<std::size_t>(ga.n) * static_cast<std::size_t>(gb.n);
  if (n > vertex_cap) throw Error(ErrorCode::SizeOverflow, "product orthogonality graph too large");
  Graph g(static_cast<int>(n));
  for (int a1 = 0; a1 < ga.n; ++a1)
    for (int b1 = 0; b1 < gb.n; ++b1) {
      int u = a1 * gb.n + b1;
      for (int a2 = a1; a2 < ga.n; ++a2)
        for (int b2 = (a2 == a1 ? b1 + 1 : 0); b2 < gb.n; ++b2) {
          if (ga.has_edge(a1, a2) || gb.has_edge(b1, b2)) g.add_edge(u, a2 * gb.n + b2);
        }
    }
  return g;
}

Graph power_orthogonality_graph(const Graph& g, int k, std::size_t vertex_cap) {
  if (k < 1) throw Error(ErrorCode::ParseError, "power must be >= 1");
  Graph out = g;
  for (int i = 1; i < k; ++i) out = product_orthogonality_graph(out, g, vertex_cap);
  return out;
}

Eigen::VectorXd power_model(const Eigen::VectorXd& p, int k, std::size_t vertex_cap) {
  if (k < 1) throw Error(ErrorCode::ParseError, "power must be >= 1");
  std::size_t n = static_cast<std::size_t>(p.size());
  std::size_t total = 1;
  for (int i = 0; i < k; ++i) {
    total *= n;
    if (total > vertex_cap) throw Error(ErrorCode::SizeOverflow, "model power too large");
  }
  Eigen::VectorXd out = p;
  for (int i = 1; i < k; ++i) {
    Eigen::VectorXd next(out.size() * p.size());
    for (int a = 0; a < out.size(); ++a)
      for (int b = 0; b < p.size(); ++b) next[a * p.size() + b] = out[a] * p[b];
    out = std::move(next);
  }
  return out;
}

std::vector<int> power_vertex_decode(int vertex, int base_size, int k) {
  std::vector<int> coords(k);
  for (int i = k - 1; i >= 0; --i) {
    coords[i] = vertex % base_size;
    vertex /= base_size;
  }
  return coords;
}

}  // namespace ctx
