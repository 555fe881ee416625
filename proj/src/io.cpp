#include "ctx/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace ctx {

json scenario_to_json(const Scenario& scenario) {
  json j;
  j["vertices"] = scenario.labels();
  j["edges"] = scenario.edges();
  return j;
}

Scenario scenario_from_json(const json& j) {
  if (!j.is_object() || !j.contains("vertices") || !j.contains("edges"))
    throw Error(ErrorCode::ParseError, "scenario JSON needs \"vertices\" and \"edges\"");
  std::vector<std::string> labels = j.at("vertices").get<std::vector<std::string>>();
  std::vector<std::vector<int>> edges = j.at("edges").get<std::vector<std::vector<int>>>();
  return validate_scenario(std::move(labels), std::move(edges));
}

json model_to_json(const Eigen::VectorXd& p) {
  json j;
  std::vector<double> values(p.data(), p.data() + p.size());
  j["p"] = values;
  return j;
}

Eigen::VectorXd model_from_json(const json& j) {
  if (!j.is_object() || !j.contains("p"))
    throw Error(ErrorCode::ParseError, "model JSON needs \"p\"");
  std::vector<double> values = j.at("p").get<std::vector<double>>();
  Eigen::VectorXd p(static_cast<int>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) p[static_cast<int>(i)] = values[i];
  return p;
}

namespace {

json vector_to_json(const Eigen::VectorXd& v) {
  return json(std::vector<double>(v.data(), v.data() + v.size()));
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

struct CertificateToJson {
  json operator()(const std::monostate&) const { return json{{"kind", "none"}}; }
  json operator()(const ViolatedConstraint& c) const {
    return json{{"kind", "violated_constraint"}, {"description", c.description},
                {"plus", c.plus},               {"minus", c.minus},
                {"rhs_constant", c.rhs_constant}, {"lhs_value", c.lhs_value},
                {"rhs_value", c.rhs_value},     {"edge", c.edge}};
  }
  json operator()(const MixtureWeights& c) const {
    return json{{"kind", "mixture"},
                {"supports", c.supports},
                {"weights", vector_to_json(c.weights)}};
  }
  json operator()(const SeparatingFunctional& c) const {
    return json{{"kind", "separating_functional"},
                {"coefficients", vector_to_json(c.coefficients)},
                {"classical_bound", c.classical_bound},
                {"value", c.value}};
  }
  json operator()(const OrthogonalSet& c) const {
    return json{{"kind", "orthogonal_set"}, {"events", c.events}, {"total", c.total}};
  }
  json operator()(const ThetaEvidence& c) const {
    return json{{"kind", "theta_bracket"}, {"lower", c.lower}, {"upper", c.upper}};
  }
  json operator()(const MomentMatrixRef& c) const {
    return json{{"kind", "moment_matrix"},
                {"order", c.order},
                {"normalization", c.normalization},
                {"orthogonality", c.orthogonality},
                {"commutativity", c.commutativity},
                {"matrix", matrix_to_json(c.matrix)}};
  }
  json operator()(const FarkasDual& c) const {
    return json{{"kind", "farkas_dual"},
                {"y", vector_to_json(c.y)},
                {"gap", c.gap},
                {"slack_min_eigenvalue", c.slack_min_eigenvalue},
                {"trace_bound", c.trace_bound},
                {"functional", (*this)(c.functional)}};
  }
  json operator()(const EmptyClassicalSet&) const { return json{{"kind", "empty_classical_set"}}; }
};

}  // namespace

json verdict_to_json(const Verdict& verdict) {
  json j;
  j["decision"] = to_string(verdict.decision);
  j["set"] = verdict.set_name;
  j["tolerance"] = verdict.tolerance;
  j["certificate"] = std::visit(CertificateToJson{}, verdict.certificate);
  j["stats"] = json{{"iterations", verdict.stats.iterations},
                    {"nodes", verdict.stats.nodes},
                    {"seconds", verdict.stats.seconds}};
  return j;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::ParseError, "cannot write " + path);
  out << content;
}

Scenario read_scenario_file(const std::string& path) {
  json j;
  try {
    j = json::parse(read_text_file(path));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, path + ": " + e.what());
  }
  return scenario_from_json(j);
}

Eigen::VectorXd read_model_file(const std::string& path) {
  json j;
  try {
    j = json::parse(read_text_file(path));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, path + ": " + e.what());
  }
  return model_from_json(j);
}

namespace {

void dump_string(const std::string& s, std::string& out) {
  out += '"';
  for (char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", ch);
          out += buf;
        } else {
          out += ch;
        }
    }
  }
  out += '"';
}

void dump_value(const json& j, std::string& out, int indent, int depth) {
  auto newline = [&](int d) {
    if (indent >= 0) {
      out += '\n';
      out.append(static_cast<std::size_t>(indent) * d, ' ');
    }
  };
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {  // nlohmann objects iterate key-sorted
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        dump_string(it.key(), out);
        out += ':';
        if (indent >= 0) out += ' ';
        dump_value(it.value(), out, indent, depth + 1);
      }
      newline(depth);
      out += '}';
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += '[';
      bool first = true;
      for (const auto& el : j) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        dump_value(el, out, indent, depth + 1);
      }
      newline(depth);
      out += ']';
      return;
    }
    case json::value_t::string:
      dump_string(j.get_ref<const std::string&>(), out);
      return;
    case json::value_t::boolean:
      out += j.get<bool>() ? "true" : "false";
      return;
    case json::value_t::number_integer:
      out += std::to_string(j.get<std::int64_t>());
      return;
    case json::value_t::number_unsigned:
      out += std::to_string(j.get<std::uint64_t>());
      return;
    case json::value_t::number_float: {
      char buf[40];
      std::snprintf(buf, sizeof(buf), "%.17g", j.get<double>());
      out += buf;
      return;
    }
    case json::value_t::null:
    default:
      out += "null";
      return;
  }
}

}  // namespace

std::string canonical_dump(const json& j, int indent) {
  std::string out;
  dump_value(j, out, indent, 0);
  if (indent >= 0) out += '\n';
  return out;
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string digest(const std::string& bytes) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "fnv1a64:%016" PRIx64, fnv1a64(bytes));
  return buf;
}

}  // namespace ctx
