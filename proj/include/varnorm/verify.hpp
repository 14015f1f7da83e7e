#pragma once

// Seeded property suites behind the CLI `verify` subcommand. Every case is
// generated from a per-case seed, checked against its module contract, and
// on failure serialized with its full inputs so `--replay` can re-run the
// exact instance.

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "varnorm/duality.hpp"
#include "varnorm/errors.hpp"
#include "varnorm/generator.hpp"
#include "varnorm/io.hpp"
#include "varnorm/nakano.hpp"
#include "varnorm/phi_solver.hpp"
#include "varnorm/sequence_space.hpp"
#include "varnorm/weighted_embedding.hpp"

namespace varnorm {

struct RunConfig {
  double tol = 1e-10;
  std::size_t grid = 1024;
  double ladder_base = 0.5;
  std::uint64_t seed = 0;
  std::size_t cases = 1000;
  std::size_t max_ladder = 60;

  void validate() const {
    if (!(tol > 0.0)) throw validation_error("tol must be positive");
    if (grid == 0) throw validation_error("grid must be at least 1");
    if (cases == 0) throw validation_error("cases must be at least 1");
  }

  SolveConfig solve() const {
    SolveConfig s;
    s.abs_tol = tol;
    s.ladder_base = ladder_base;
    s.max_ladder_steps = max_ladder;
    s.initial_cells = grid;
    return s;
  }
};

struct SuiteReport {
  std::string suite;
  std::size_t cases = 0;
  json failures = json::array();

  bool ok() const { return failures.empty(); }
  json to_json() const {
    return json{{"suite", suite}, {"cases", cases}, {"failures", failures}};
  }
};

namespace detail {

inline json fail_entry(const std::string& suite, std::size_t index, const json& inputs,
                       const std::string& reason, const json& details) {
  return json{{"suite", suite}, {"case", index}, {"inputs", inputs}, {"reason", reason},
              {"details", details}};
}

}  // namespace detail

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"holder",    "pairing", "nakano-band",
                                              "estimates", "mixed",   "isometry"};
  return names;
}

// ---- per-suite generation and checking, split so replay can reuse checks --

inline json gen_holder_case(std::uint64_t case_seed) {
  InstanceGen g(case_seed);
  return json{{"f", to_json(g.step_function())},
              {"g", to_json(g.step_function())},
              {"p", to_json(g.exponent(kDualityBand).step())}};
}

inline json check_holder_case(const json& in, const RunConfig& cfg) {
  StepFunction f = step_from_json(in.at("f"));
  StepFunction g = step_from_json(in.at("g"));
  ConjugatePair pair = conjugate(validate_exponent(step_from_json(in.at("p"))));
  auto r = holder_check(f, g, pair, cfg.solve());
  double slack = r.rhs - r.lhs;
  if (slack < -cfg.tol * std::max(1.0, r.rhs))
    return json{{"lhs", r.lhs}, {"rhs", r.rhs}, {"slack", slack}};
  return json();
}

inline json gen_pairing_case(std::uint64_t case_seed) {
  InstanceGen g(case_seed);
  return json{{"x", to_json(g.step_function())},
              {"p", to_json(g.exponent(kDualityBand).step())}};
}

inline json check_pairing_case(const json& in, const RunConfig& cfg) {
  StepFunction x = step_from_json(in.at("x"));
  Exponent p = validate_exponent(step_from_json(in.at("p")));
  auto r = norming_pairing(x, p, cfg.solve());
  double scale = std::max(1.0, r.norm_x * r.norm_Jx);
  if (r.defect > cfg.tol * scale) return to_json(r);
  return json();
}

inline json gen_nakano_case(std::uint64_t case_seed) {
  InstanceGen g(case_seed);
  return json{{"f", to_json(g.step_function(32, 1.0 / 16.0, true))},
              {"p", to_json(g.exponent(kGeneralBand).step())}};
}

inline json check_nakano_case(const json& in, const RunConfig& cfg) {
  StepFunction f = step_from_json(in.at("f"));
  Exponent p = validate_exponent(step_from_json(in.at("p")));
  double ratio = equivalence_ratio(f, p, cfg.solve());
  double band_tol = std::max(cfg.tol, 1e-9);
  if (ratio < 0.5 - band_tol || ratio > 2.0 + band_tol) return json{{"ratio", ratio}};
  return json();
}

inline json gen_estimates_case(std::uint64_t case_seed) {
  InstanceGen g(case_seed);
  std::size_t n = g.cell_count(1, 8);
  json fs = json::array();
  for (auto& f : g.disjoint_family(n)) fs.push_back(to_json(f));
  return json{{"fs", fs}, {"p", to_json(g.exponent(kGeneralBand).step())}};
}

inline json check_estimates_case(const json& in, const RunConfig& cfg) {
  std::vector<StepFunction> fs;
  for (const auto& jf : in.at("fs")) fs.push_back(step_from_json(jf));
  Exponent p = validate_exponent(step_from_json(in.at("p")));
  auto r = disjoint_estimates_check(fs, p, cfg.solve());
  double eps = cfg.tol * std::max(1.0, r.sum_norm);
  if (r.sum_norm > r.upper_bound + eps || r.lower_bound > r.sum_norm + eps)
    return json{{"sum_norm", r.sum_norm},
                {"upper_bound", r.upper_bound},
                {"lower_bound", r.lower_bound}};
  return json();
}

inline json gen_mixed_case(std::uint64_t case_seed) {
  InstanceGen g(case_seed);
  std::size_t rows = g.cell_count(1, 8), cols = g.cell_count(1, 8);
  std::vector<std::vector<double>> a(rows, std::vector<double>(cols, 0.0));
  std::size_t parts = g.cell_count(2, 4);
  std::vector<json> split(parts);
  std::vector<std::vector<std::vector<double>>> sp(
      parts, std::vector<std::vector<double>>(rows, std::vector<double>(cols, 0.0)));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      double v = std::fabs(g.signed_value(0.25));
      a[i][j] = v;
      sp[g.cell_count(0, parts - 1)][i][j] = v;
    }
  double p = g.uniform(1.0, 6.0);
  double r = g.uniform(p, 6.0);
  json jas = json::array();
  for (auto& m : sp) jas.push_back(json(m));
  return json{{"A", a}, {"As", jas}, {"p", p}, {"r", r}};
}

inline json check_mixed_case(const json& in, const RunConfig& cfg) {
  NonnegMatrix a = matrix_from_json(in.at("A"));
  double p = in.at("p").get<double>(), r = in.at("r").get<double>();
  auto t = transpose_contraction_check(a, p, r);
  if (t.lhs > t.rhs + cfg.tol * std::max(1.0, t.rhs))
    return json{{"check", "transpose"}, {"lhs", t.lhs}, {"rhs", t.rhs}};
  std::vector<NonnegMatrix> as;
  for (const auto& jm : in.at("As")) as.push_back(matrix_from_json(jm));
  auto d = disjoint_matrix_sum_check(as, p, r);
  if (d.lhs > d.rhs + cfg.tol * std::max(1.0, d.rhs))
    return json{{"check", "disjoint-sum"}, {"lhs", d.lhs}, {"rhs", d.rhs}};
  return json();
}

inline json gen_isometry_case(std::uint64_t case_seed) {
  InstanceGen g(case_seed);
  return json{{"f", to_json(g.step_function())},
              {"p", to_json(g.exponent({1.0, 6.0}).step())},
              {"w", to_json(g.density().step())}};
}

inline json check_isometry_case(const json& in, const RunConfig& cfg) {
  StepFunction f = step_from_json(in.at("f"));
  WeightedSpec spec{validate_exponent(step_from_json(in.at("p"))),
                    validate_density(step_from_json(in.at("w")))};
  auto r = weight_isometry_check(f, spec, cfg.solve());
  if (std::fabs(r.norm_m - r.norm_mu_of_Tf) > cfg.tol * std::max(1.0, r.norm_m))
    return json{{"norm_m", r.norm_m}, {"norm_mu_of_Tf", r.norm_mu_of_Tf}};
  return json();
}

inline json gen_case(const std::string& suite, std::uint64_t case_seed) {
  if (suite == "holder") return gen_holder_case(case_seed);
  if (suite == "pairing") return gen_pairing_case(case_seed);
  if (suite == "nakano-band") return gen_nakano_case(case_seed);
  if (suite == "estimates") return gen_estimates_case(case_seed);
  if (suite == "mixed") return gen_mixed_case(case_seed);
  if (suite == "isometry") return gen_isometry_case(case_seed);
  throw validation_error("unknown suite: " + suite);
}

inline json check_case(const std::string& suite, const json& inputs, const RunConfig& cfg) {
  if (suite == "holder") return check_holder_case(inputs, cfg);
  if (suite == "pairing") return check_pairing_case(inputs, cfg);
  if (suite == "nakano-band") return check_nakano_case(inputs, cfg);
  if (suite == "estimates") return check_estimates_case(inputs, cfg);
  if (suite == "mixed") return check_mixed_case(inputs, cfg);
  if (suite == "isometry") return check_isometry_case(inputs, cfg);
  throw validation_error("unknown suite: " + suite);
}

inline SuiteReport run_suite(const std::string& suite, const RunConfig& cfg) {
  cfg.validate();
  SuiteReport report{suite, cfg.cases, json::array()};
  if (suite == "all") {
    std::size_t total = 0;
    for (const auto& name : suite_names()) {
      SuiteReport sub = run_suite(name, cfg);
      total += sub.cases;
      for (auto& f : sub.failures) report.failures.push_back(f);
    }
    report.cases = total;
    return report;
  }
  for (std::size_t i = 0; i < cfg.cases; ++i) {
    std::uint64_t cs = InstanceGen::case_seed(cfg.seed, i);
    json inputs = gen_case(suite, cs);
    json fail = check_case(suite, inputs, cfg);
    if (!fail.is_null())
      report.failures.push_back(
          detail::fail_entry(suite, i, inputs, "contract violated", fail));
  }
  return report;
}

// Re-run previously reported failures from their serialized inputs.
inline SuiteReport replay_failures(const json& failures, const RunConfig& cfg) {
  SuiteReport report{"replay", 0, json::array()};
  if (!failures.is_array()) throw validation_error("replay file must hold a failure array");
  for (const auto& entry : failures) {
    ++report.cases;
    const std::string suite = entry.at("suite").get<std::string>();
    json fail = check_case(suite, entry.at("inputs"), cfg);
    if (!fail.is_null())
      report.failures.push_back(detail::fail_entry(
          suite, entry.value("case", static_cast<std::size_t>(0)), entry.at("inputs"),
          "contract violated", fail));
  }
  return report;
}

}  // namespace varnorm
