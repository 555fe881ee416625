// ctx: command-line surface for scenario construction, membership checks,
// graph invariants and hierarchy queries.

#include "ctx/hierarchy.hpp"
#include "ctx/invariants.hpp"
#include "ctx/io.hpp"
#include "ctx/membership.hpp"
#include "ctx/products.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <thread>

namespace {

constexpr const char* kVersion = "0.1.0";

// exit codes: 0 ok/MEMBER, 1 NON_MEMBER, 2 INCONCLUSIVE, 3 input error
int exit_code(ctx::Decision d) {
  switch (d) {
    case ctx::Decision::Member: return 0;
    case ctx::Decision::NonMember: return 1;
    default: return 2;
  }
}

double now_ms() {
  using namespace std::chrono;
  return duration<double, std::milli>(steady_clock::now().time_since_epoch()).count();
}

std::string command_echo(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) {
    if (i) s += ' ';
    s += argv[i];
  }
  return s;
}

ctx::json input_record(const std::string& path) {
  std::string bytes = ctx::read_text_file(path);
  return ctx::json{{"path", path}, {"digest", ctx::digest(bytes)}};
}

std::uint64_t default_budget() {
  if (const char* env = std::getenv("CTX_BUDGET")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return v;
  }
  return 50'000'000;
}

struct CheckSpec {
  std::string set = "g";
  int ce_k = 1;
  int level = 0;
  ctx::BellParams bell{2, 2, 2};
  bool bell_given = false;
  ctx::Tolerances tol;
  ctx::Budget budget;
  std::size_t cap = 5000;
};

ctx::Verdict run_check(const CheckSpec& spec, const ctx::Scenario& scenario,
                       const Eigen::VectorXd& p) {
  if (spec.set == "g") {
    if (spec.level >= 1) return ctx::check_Gk(scenario, p, spec.level, spec.tol, spec.budget, spec.cap);
    return ctx::check_general(scenario, p, spec.tol);
  }
  if (spec.set == "ns") {
    if (!spec.bell_given)
      throw ctx::Error(ctx::ErrorCode::ParseError,
                       "--set ns needs --parties/--settings/--outcomes");
    return ctx::no_signaling_check(spec.bell, p, spec.tol);
  }
  if (spec.set == "classical") return ctx::check_classical(scenario, p, spec.tol, spec.budget);
  if (spec.set == "ce") return ctx::check_cek(scenario, p, spec.ce_k, spec.tol, spec.budget);
  if (spec.set == "theta") return ctx::q1_check_via_theta(scenario, p, spec.tol);
  if (spec.set == "q")
    return ctx::check_Qk(scenario, p, std::max(1, spec.level), spec.tol, spec.budget, spec.cap);
  if (spec.set == "c")
    return ctx::check_Ck(scenario, p, std::max(1, spec.level), spec.tol, spec.budget, spec.cap);
  throw ctx::Error(ctx::ErrorCode::ParseError, "unknown set selector: " + spec.set);
}

void emit(const ctx::json& j) { std::cout << ctx::canonical_dump(j, 2); }

void write_or_print(const std::string& path, const ctx::json& j) {
  if (path.empty())
    emit(j);
  else
    ctx::write_text_file(path, ctx::canonical_dump(j, 2));
}

Eigen::VectorXd pr_box_vector() {
  ctx::BellParams params{2, 2, 2};
  Eigen::VectorXd p(16);
  std::vector<int> o(2), x(2);
  for (int v = 0; v < 16; ++v) {
    ctx::bell_vertex_decode(params, v, o, x);
    p[v] = ((o[0] ^ o[1]) == (x[0] & x[1])) ? 0.5 : 0.0;
  }
  return p;
}

Eigen::VectorXd tsirelson_vector() {
  ctx::BellParams params{2, 2, 2};
  const double r = 1.0 / std::sqrt(2.0);
  Eigen::VectorXd p(16);
  std::vector<int> o(2), x(2);
  for (int v = 0; v < 16; ++v) {
    ctx::bell_vertex_decode(params, v, o, x);
    int sign = ((o[0] ^ o[1]) == (x[0] & x[1])) ? 1 : -1;
    p[v] = (1.0 + sign * r) / 4.0;
  }
  return p;
}

Eigen::VectorXd uniform_vector(const ctx::BellParams& params) {
  params.validate();
  double value = 1.0;
  for (int i = 0; i < params.parties; ++i) value /= params.outcomes;
  Eigen::VectorXd p(params.vertex_count());
  p.setConstant(value);
  return p;
}

Eigen::VectorXd deterministic_vector_b222(int index) {
  if (index < 0 || index >= 16)
    throw ctx::Error(ctx::ErrorCode::UnknownFixture, "deterministic index must be in 0..15");
  ctx::BellParams params{2, 2, 2};
  int fa = index / 4, fb = index % 4;  // per-party strategy: bit x of f gives the outcome
  Eigen::VectorXd p = Eigen::VectorXd::Zero(16);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) {
      std::vector<int> o{(fa >> x) & 1, (fb >> y) & 1}, s{x, y};
      p[ctx::bell_vertex_index(params, o, s)] = 1.0;
    }
  return p;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"contextuality scenarios: membership, invariants, hierarchies"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  int rc = 0;
  const std::string echo = command_echo(argc, argv);

  // ---- scenario ----
  auto* scenario_cmd = app.add_subcommand("scenario", "build and inspect scenarios");
  scenario_cmd->require_subcommand(1);

  {
    auto* bell = scenario_cmd->add_subcommand("bell", "Bell scenario B_{n,m,k}");
    auto params = std::make_shared<ctx::BellParams>();
    auto out = std::make_shared<std::string>();
    bell->add_option("--parties", params->parties, "party count")->required();
    bell->add_option("--settings", params->settings, "settings per party")->required();
    bell->add_option("--outcomes", params->outcomes, "outcomes per setting")->required();
    bell->add_option("-o,--output", *out, "output file (default stdout)");
    bell->callback([params, out]() {
      ctx::Scenario s = ctx::bell_scenario(*params);
      write_or_print(*out, ctx::scenario_to_json(s));
    });
  }
  {
    auto* product = scenario_cmd->add_subcommand("product", "Foulis-Randall product of two scenarios");
    auto paths = std::make_shared<std::vector<std::string>>();
    auto out = std::make_shared<std::string>();
    product->add_option("files", *paths, "two scenario files")->expected(2);
    product->add_option("-o,--output", *out, "output file (default stdout)");
    product->callback([paths, out]() {
      ctx::Scenario a = ctx::read_scenario_file((*paths)[0]);
      ctx::Scenario b = ctx::read_scenario_file((*paths)[1]);
      write_or_print(*out, ctx::scenario_to_json(ctx::fr_product(a, b).scenario));
    });
  }
  {
    auto* validate = scenario_cmd->add_subcommand("validate", "check scenario invariants");
    auto path = std::make_shared<std::string>();
    validate->add_option("file", *path, "scenario file")->required();
    validate->callback([path]() {
      ctx::Scenario s = ctx::read_scenario_file(*path);
      emit(ctx::json{{"valid", true},
                     {"vertices", s.vertex_count()},
                     {"edges", s.edge_count()}});
    });
  }
  {
    auto* info = scenario_cmd->add_subcommand("info", "size and structure summary");
    auto path = std::make_shared<std::string>();
    info->add_option("file", *path, "scenario file")->required();
    info->callback([path]() {
      ctx::Scenario s = ctx::read_scenario_file(*path);
      std::map<std::size_t, int> histogram;
      for (const auto& e : s.edges()) histogram[e.size()]++;
      ctx::json hist = ctx::json::object();
      for (auto [size, count] : histogram) hist[std::to_string(size)] = count;
      ctx::Graph orth = ctx::orthogonality_graph(s);
      double pairs = s.vertex_count() > 1
                         ? s.vertex_count() * (s.vertex_count() - 1) / 2.0
                         : 1.0;
      emit(ctx::json{{"vertices", s.vertex_count()},
                     {"edges", s.edge_count()},
                     {"edge_size_histogram", hist},
                     {"orthogonality_density", orth.edge_count() / pairs}});
    });
  }

  // ---- model check ----
  auto* model_cmd = app.add_subcommand("model", "decide model membership");
  model_cmd->require_subcommand(1);
  {
    auto* check = model_cmd->add_subcommand("check", "membership in a correlation set");
    auto spec = std::make_shared<CheckSpec>();
    auto files = std::make_shared<std::vector<std::string>>();
    auto cert_out = std::make_shared<std::string>();
    auto out_dir = std::make_shared<std::string>();
    auto jobs = std::make_shared<int>(1);
    auto budget_scalar = std::make_shared<std::uint64_t>(default_budget());
    check->add_option("--set", spec->set, "one of g|ns|classical|ce|theta|q|c")->required();
    check->add_option("--k", spec->ce_k, "CE level (with --set ce)");
    check->add_option("--level", spec->level, "hierarchy order (with --set g|q|c)");
    auto* po = check->add_option("--parties", spec->bell.parties, "parties (for --set ns)");
    check->add_option("--settings", spec->bell.settings, "settings (for --set ns)");
    check->add_option("--outcomes", spec->bell.outcomes, "outcomes (for --set ns)");
    check->add_option("--tol", spec->tol.lp_eps, "lp tolerance override");
    check->add_option("--sdp-tol", spec->tol.sdp_eps, "sdp tolerance override");
    check->add_option("--budget", *budget_scalar, "node/iteration budget");
    check->add_option("--cap", spec->cap, "word index cap");
    check->add_option("--cert-out", *cert_out, "write the certificate to a file");
    check->add_option("--jobs", *jobs, "parallel workers for multiple models");
    check->add_option("--out-dir", *out_dir, "per-model verdict files (required for >1 model)");
    check->add_option("files", *files, "scenario.json model.json [model2.json ...]")
        ->expected(-2);
    check->callback([&rc, spec, files, cert_out, out_dir, jobs, budget_scalar, po, echo]() {
      spec->bell_given = po->count() > 0;
      spec->budget = ctx::Budget::from_scalar(*budget_scalar);
      const std::string scenario_path = files->front();
      std::vector<std::string> model_paths(files->begin() + 1, files->end());
      ctx::Scenario scenario = ctx::read_scenario_file(scenario_path);

      ctx::json report;
      report["command"] = echo;
      report["version"] = kVersion;
      report["inputs"] = ctx::json{{"scenario", input_record(scenario_path)}};
      ctx::json model_inputs = ctx::json::array();
      for (const auto& mp : model_paths) model_inputs.push_back(input_record(mp));
      report["inputs"]["models"] = model_inputs;

      std::vector<ctx::Verdict> verdicts(model_paths.size());
      std::vector<double> times(model_paths.size(), 0);

      auto run_one = [&](std::size_t i) {
        Eigen::VectorXd p = ctx::read_model_file(model_paths[i]);
        double t0 = now_ms();
        verdicts[i] = run_check(*spec, scenario, p);
        times[i] = now_ms() - t0;
      };

      if (model_paths.size() > 1 && *jobs > 1) {
        if (out_dir->empty())
          throw ctx::Error(ctx::ErrorCode::ParseError, "--out-dir required for multiple models");
        std::vector<std::thread> pool;
        std::mutex next_mutex;
        std::size_t next = 0;
        for (int t = 0; t < *jobs; ++t)
          pool.emplace_back([&]() {
            while (true) {
              std::size_t i;
              {
                std::lock_guard<std::mutex> lock(next_mutex);
                if (next >= model_paths.size()) return;
                i = next++;
              }
              run_one(i);
            }
          });
        for (auto& th : pool) th.join();
      } else {
        for (std::size_t i = 0; i < model_paths.size(); ++i) run_one(i);
      }

      ctx::json verdicts_json = ctx::json::array();
      int worst = 0;
      for (std::size_t i = 0; i < verdicts.size(); ++i) {
        ctx::json vj = ctx::verdict_to_json(verdicts[i]);
        vj["model"] = model_paths[i];
        worst = std::max(worst, exit_code(verdicts[i].decision));
        if (!out_dir->empty()) {
          std::filesystem::path dir(*out_dir);
          std::filesystem::create_directories(dir);
          auto stem = std::filesystem::path(model_paths[i]).stem().string();
          ctx::write_text_file((dir / (stem + ".verdict.json")).string(),
                               ctx::canonical_dump(vj, 2));
        }
        verdicts_json.push_back(std::move(vj));
      }
      report["verdicts"] = verdicts_json;
      ctx::json timings = ctx::json::object();
      for (std::size_t i = 0; i < times.size(); ++i) timings[model_paths[i]] = times[i];
      report["timings_ms"] = timings;
      emit(report);

      if (!cert_out->empty() && verdicts.size() == 1)
        ctx::write_text_file(*cert_out,
                             ctx::canonical_dump(ctx::verdict_to_json(verdicts[0])["certificate"], 2));
      rc = worst;
    });
  }

  // ---- invariants ----
  auto* invariant_cmd = app.add_subcommand("invariant", "weighted graph invariants of NO(H)");
  invariant_cmd->require_subcommand(1);
  {
    auto* theta = invariant_cmd->add_subcommand("theta", "weighted Lovasz number bracket");
    auto paths = std::make_shared<std::vector<std::string>>();
    auto gap = std::make_shared<double>(1e-7);
    auto witness_out = std::make_shared<std::string>();
    theta->add_option("files", *paths, "scenario.json model.json")->expected(2);
    theta->add_option("--gap", *gap, "target bracket width");
    theta->add_option("--witness-out", *witness_out, "write primal/dual witnesses");
    theta->callback([paths, gap, witness_out]() {
      ctx::Scenario s = ctx::read_scenario_file((*paths)[0]);
      Eigen::VectorXd p = ctx::read_model_file((*paths)[1]);
      if (p.size() != s.vertex_count())
        throw ctx::Error(ctx::ErrorCode::LengthMismatch, "model does not match scenario");
      ctx::WeightedGraph wg{ctx::non_orthogonality_graph(s), p};
      ctx::ThetaBracket bracket = ctx::lovasz_theta(wg, *gap);
      emit(ctx::json{{"lower", bracket.lower},
                     {"upper", bracket.upper},
                     {"width", bracket.upper - bracket.lower},
                     {"converged", bracket.converged},
                     {"iterations", bracket.iterations}});
      if (!witness_out->empty()) {
        ctx::json w;
        ctx::json primal = ctx::json::array(), slack = ctx::json::array();
        for (int r = 0; r < bracket.primal.rows(); ++r) {
          std::vector<double> row(bracket.primal.cols()), srow(bracket.dual_slack.cols());
          for (int c = 0; c < bracket.primal.cols(); ++c) {
            row[static_cast<std::size_t>(c)] = bracket.primal(r, c);
            srow[static_cast<std::size_t>(c)] = bracket.dual_slack(r, c);
          }
          primal.push_back(row);
          slack.push_back(srow);
        }
        w["primal"] = primal;
        w["dual_slack"] = slack;
        w["dual_value"] = bracket.dual_value;
        ctx::write_text_file(*witness_out, ctx::canonical_dump(w, 2));
      }
    });
  }
  {
    auto* alpha = invariant_cmd->add_subcommand("alpha", "weighted independence number of NO(H)");
    auto paths = std::make_shared<std::vector<std::string>>();
    auto budget = std::make_shared<std::uint64_t>(default_budget());
    alpha->add_option("files", *paths, "scenario.json model.json")->expected(2);
    alpha->add_option("--budget", *budget, "node budget");
    alpha->callback([paths, budget]() {
      ctx::Scenario s = ctx::read_scenario_file((*paths)[0]);
      Eigen::VectorXd p = ctx::read_model_file((*paths)[1]);
      if (p.size() != s.vertex_count())
        throw ctx::Error(ctx::ErrorCode::LengthMismatch, "model does not match scenario");
      ctx::AlphaResult a =
          ctx::weighted_independence_number({ctx::non_orthogonality_graph(s), p}, *budget);
      emit(ctx::json{{"value", a.value},
                     {"witness", a.witness},
                     {"exact", a.exact},
                     {"nodes", a.nodes}});
    });
  }
  {
    auto* capacity = invariant_cmd->add_subcommand("capacity", "Shannon capacity bracket of NO(H)");
    auto paths = std::make_shared<std::vector<std::string>>();
    auto kmax = std::make_shared<int>(2);
    auto budget = std::make_shared<std::uint64_t>(default_budget());
    capacity->add_option("files", *paths, "scenario.json model.json")->expected(2);
    capacity->add_option("--kmax", *kmax, "largest power for the lower bound");
    capacity->add_option("--budget", *budget, "node budget");
    capacity->callback([paths, kmax, budget]() {
      ctx::Scenario s = ctx::read_scenario_file((*paths)[0]);
      Eigen::VectorXd p = ctx::read_model_file((*paths)[1]);
      ctx::CapacityBracket c = ctx::shannon_capacity_bracket(
          s, p, *kmax, {}, ctx::Budget::from_scalar(*budget));
      emit(ctx::json{{"lower", c.lower},
                     {"upper", c.upper},
                     {"best_k", c.best_k},
                     {"lower_exact", c.lower_exact},
                     {"witness_events", c.witness.events},
                     {"witness_total", c.witness.total}});
    });
  }

  // ---- hierarchy ----
  auto* hierarchy_cmd = app.add_subcommand("hierarchy", "moment-matrix constraint systems");
  hierarchy_cmd->require_subcommand(1);
  {
    auto* dump = hierarchy_cmd->add_subcommand("dump-constraints", "emit the constraint system");
    auto path = std::make_shared<std::string>();
    auto level = std::make_shared<int>(1);
    auto flags_str = std::make_shared<std::string>("n");
    auto out = std::make_shared<std::string>();
    dump->add_option("file", *path, "scenario file")->required();
    dump->add_option("--level", *level, "order k")->required();
    dump->add_option("--flags", *flags_str, "any of n (normalization), o (orthogonality), c (commutativity)");
    dump->add_option("-o,--output", *out, "output file (default stdout)");
    dump->callback([path, level, flags_str, out]() {
      ctx::Scenario s = ctx::read_scenario_file(*path);
      ctx::MomentFlags flags{flags_str->find('n') != std::string::npos,
                             flags_str->find('o') != std::string::npos,
                             flags_str->find('c') != std::string::npos};
      ctx::WordIndex index = ctx::enumerate_words(s, *level, flags);
      ctx::MomentConstraintSystem sys = ctx::build_constraints(s, index, flags);
      ctx::json words = ctx::json::array();
      for (const auto& w : index.words()) words.push_back(w.letters);
      ctx::json equalities = ctx::json::array();
      for (const auto& eq : sys.equalities) {
        ctx::json terms = ctx::json::array();
        for (const auto& [r, c, coeff] : eq.terms)
          terms.push_back(ctx::json{{"row", r}, {"col", c}, {"coeff", coeff}});
        equalities.push_back(ctx::json{{"terms", terms}, {"rhs", eq.rhs}});
      }
      write_or_print(*out, ctx::json{{"dimension", sys.dim},
                                     {"order", *level},
                                     {"flags",
                                      ctx::json{{"normalization", flags.normalization},
                                                {"orthogonality", flags.orthogonality},
                                                {"commutativity", flags.commutativity}}},
                                     {"words", words},
                                     {"equalities", equalities},
                                     {"zeros", sys.zeros},
                                     {"identifications", ctx::json::array()}});
    });
  }

  // ---- fixtures ----
  auto* fixtures_cmd = app.add_subcommand("fixtures", "reference models for B_{2,2,2} and friends");
  fixtures_cmd->require_subcommand(1);
  auto add_fixture = [&](const std::string& name, const std::string& help,
                         std::function<Eigen::VectorXd(const ctx::BellParams&, int)> make,
                         bool takes_params, bool takes_index) {
    auto* cmd = fixtures_cmd->add_subcommand(name, help);
    auto params = std::make_shared<ctx::BellParams>(ctx::BellParams{2, 2, 2});
    auto index = std::make_shared<int>(0);
    auto out = std::make_shared<std::string>();
    if (takes_params) {
      cmd->add_option("--parties", params->parties, "party count");
      cmd->add_option("--settings", params->settings, "settings per party");
      cmd->add_option("--outcomes", params->outcomes, "outcomes per setting");
    }
    if (takes_index) cmd->add_option("--index", *index, "deterministic strategy index (0..15)");
    cmd->add_option("-o,--output", *out, "output file (default stdout)");
    cmd->callback([make, params, index, out]() {
      write_or_print(*out, ctx::model_to_json(make(*params, *index)));
    });
  };
  add_fixture("pr", "PR box on B_{2,2,2}",
              [](const ctx::BellParams&, int) { return pr_box_vector(); }, false, false);
  add_fixture("tsirelson", "Tsirelson-point model on B_{2,2,2}",
              [](const ctx::BellParams&, int) { return tsirelson_vector(); }, false, false);
  add_fixture("uniform", "uniform model on B_{n,m,k}",
              [](const ctx::BellParams& p, int) { return uniform_vector(p); }, true, false);
  add_fixture("deterministic", "local deterministic model on B_{2,2,2}",
              [](const ctx::BellParams&, int i) { return deterministic_vector_b222(i); }, false,
              true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 3;
  } catch (const ctx::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return rc;
}
