// JSON interchange for scenarios, models and verdicts, plus the canonical
// serialization used for hash-stable artifacts.
#pragma once

#include "ctx/core.hpp"
#include "ctx/verdict.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>

namespace ctx {

using nlohmann::json;

// Scenario file: {"vertices": ["label", ...], "edges": [[i, j, ...], ...]}
json scenario_to_json(const Scenario& scenario);
Scenario scenario_from_json(const json& j);

// Model file: {"p": [x0, x1, ...]} aligned with the scenario's vertex order.
json model_to_json(const Eigen::VectorXd& p);
Eigen::VectorXd model_from_json(const json& j);

json verdict_to_json(const Verdict& verdict);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

Scenario read_scenario_file(const std::string& path);
Eigen::VectorXd read_model_file(const std::string& path);

/// Canonical dump: keys sorted, doubles printed with 17 significant digits,
/// no locale dependence. Equal values always produce equal bytes.
std::string canonical_dump(const json& j, int indent = -1);

/// FNV-1a 64-bit digest, rendered as "fnv1a64:<16 hex digits>".
std::uint64_t fnv1a64(const std::string& bytes);
std::string digest(const std::string& bytes);

}  // namespace ctx
