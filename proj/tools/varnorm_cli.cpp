// Command-line front end. Subcommands cover every public operation; inputs
// are step-function JSON files, outputs are JSON on stdout (CSV for curves).
// Exit codes: 0 ok, 1 property failure, 2 usage/validation error,
// 3 numeric non-convergence.

#include <cmath>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "varnorm/duality.hpp"
#include "varnorm/function_model.hpp"
#include "varnorm/io.hpp"
#include "varnorm/nakano.hpp"
#include "varnorm/phi_solver.hpp"
#include "varnorm/sequence_space.hpp"
#include "varnorm/verify.hpp"
#include "varnorm/weighted_embedding.hpp"

namespace {

using varnorm::json;

int run(int argc, char** argv) {
  CLI::App app{"ODE-determined variable-exponent Lebesgue and sequence norms"};
  app.require_subcommand(1);

  varnorm::RunConfig cfg;
  std::string replay_path;
  app.add_option("--tol", cfg.tol, "absolute tolerance (default 1e-10)");
  app.add_option("--grid", cfg.grid, "base grid for sampled inputs (default 1024)");
  app.add_option("--ladder-base", cfg.ladder_base, "initial-value ladder base (default 0.5)");
  app.add_option("--max-ladder", cfg.max_ladder, "maximum ladder steps (default 60)");
  app.add_option("--seed", cfg.seed, "generator seed (default 0)");
  app.add_option("--cases", cfg.cases, "cases per verify suite (default 1000)");
  app.add_option("--replay", replay_path, "replay a failure report instead of generating");

  std::string f_path, g_path, p_path, w_path, x_path;

  auto* c_norm = app.add_subcommand("norm", "norm of a step function");
  c_norm->add_option("f", f_path, "step function JSON")->required();
  c_norm->add_option("p", p_path, "exponent JSON")->required();

  auto* c_curve = app.add_subcommand("curve", "accumulation curve as CSV");
  c_curve->add_option("f", f_path)->required();
  c_curve->add_option("p", p_path)->required();

  std::string kind = "psi";
  auto* c_nakano = app.add_subcommand("nakano", "Nakano/Luxemburg comparison norm");
  c_nakano->add_option("f", f_path)->required();
  c_nakano->add_option("p", p_path)->required();
  c_nakano->add_option("--kind", kind, "modular kind: psi | plain (default psi)");

  auto* c_holder = app.add_subcommand("holder", "Holder inequality report");
  c_holder->add_option("f", f_path)->required();
  c_holder->add_option("g", g_path)->required();
  c_holder->add_option("p", p_path)->required();

  auto* c_pair = app.add_subcommand("pair", "norming pairing report");
  c_pair->add_option("x", x_path)->required();
  c_pair->add_option("p", p_path)->required();

  std::string seq_path;
  auto* c_seq = app.add_subcommand("seqnorm", "varying-exponent sequence norm");
  c_seq->add_option("sequence", seq_path, "JSON {values, exponents, orientation}")->required();

  std::string mat_path;
  double mix_p = 1.0, mix_r = 1.0;
  auto* c_mixed = app.add_subcommand("mixed", "mixed matrix norm l^r(l^p)");
  c_mixed->add_option("matrix", mat_path, "JSON array of rows")->required();
  c_mixed->add_option("--p", mix_p, "inner exponent")->required();
  c_mixed->add_option("--r", mix_r, "outer exponent")->required();

  auto* c_var = app.add_subcommand("variation", "variation norm of a density");
  c_var->add_option("gprime", g_path, "density g' JSON")->required();
  c_var->add_option("p", p_path)->required();

  auto* c_ext = app.add_subcommand("extnorm", "extended norm ladder");
  c_ext->add_option("f", f_path)->required();
  c_ext->add_option("p", p_path)->required();

  auto* c_weighted = app.add_subcommand("weighted", "density-weighted norm");
  c_weighted->add_option("f", f_path)->required();
  c_weighted->add_option("p", p_path)->required();
  c_weighted->add_option("w", w_path, "density JSON")->required();

  std::string p_name = "affine";
  std::string f_name = "constant";
  std::size_t nodes = 4096;
  auto* c_embed = app.add_subcommand("embed-demo", "universal embedding demo");
  c_embed->add_option("--p-name", p_name, "built-in exponent: affine | sine3");
  c_embed->add_option("--f", f_name, "test function: constant | half");
  c_embed->add_option("--nodes", nodes, "tabulation cells per piece (default 4096)");

  std::string suite;
  auto* c_verify = app.add_subcommand("verify", "run a seeded property suite");
  c_verify->add_option("suite", suite,
                       "holder | pairing | nakano-band | estimates | mixed | isometry | all");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  varnorm::SolveConfig solve = cfg.solve();

  if (*c_norm) {
    auto r = varnorm::norm_result(varnorm::load_step(f_path), varnorm::load_exponent(p_path),
                                  solve);
    if (!r.converged)
      throw varnorm::convergence_error("ladder did not converge", r.final_gap);
    std::cout << json{{"norm", r.value},
                      {"ladder_steps", r.ladder_steps},
                      {"converged", r.converged}}
                     .dump(2)
              << "\n";
  } else if (*c_curve) {
    auto s = varnorm::phi_stabilized(varnorm::load_step(f_path),
                                     varnorm::load_exponent(p_path), solve);
    if (!s.converged)
      throw varnorm::convergence_error("ladder did not converge", s.final_gap);
    std::cout << varnorm::curve_to_csv(s.curve);
  } else if (*c_nakano) {
    varnorm::ModularKind mk;
    if (kind == "psi") mk = varnorm::ModularKind::NakanoPsi;
    else if (kind == "plain") mk = varnorm::ModularKind::PlainPhi;
    else throw varnorm::validation_error("unknown modular kind: " + kind);
    auto f = varnorm::load_step(f_path);
    auto p = varnorm::load_exponent(p_path);
    double lambda = varnorm::nakano_norm(f, p, mk, std::min(cfg.tol, 1e-12));
    double mod = lambda > 0.0 ? varnorm::modular(f, p, lambda, mk) : 0.0;
    std::cout << json{{"lambda", lambda}, {"modular_at_lambda", mod}}.dump(2) << "\n";
  } else if (*c_holder) {
    auto pair = varnorm::conjugate(varnorm::load_exponent(p_path));
    auto r = varnorm::holder_check(varnorm::load_step(f_path), varnorm::load_step(g_path),
                                   pair, solve);
    std::cout << json{{"lhs", r.lhs}, {"rhs", r.rhs}, {"slack", r.rhs - r.lhs}}.dump(2)
              << "\n";
  } else if (*c_pair) {
    auto r = varnorm::norming_pairing(varnorm::load_step(x_path),
                                      varnorm::load_exponent(p_path), solve);
    std::cout << varnorm::to_json(r).dump(2) << "\n";
  } else if (*c_seq) {
    json j = varnorm::load_json_file(seq_path);
    auto seq = varnorm::sequence_from_json(j);
    std::string orientation = j.value("orientation", "left");
    double value;
    if (orientation == "left") value = varnorm::seq_norm(seq);
    else if (orientation == "right") value = varnorm::seq_norm_left(seq);
    else throw varnorm::validation_error("orientation must be 'left' or 'right'");
    std::cout << json{{"value", value}, {"orientation", orientation}}.dump(2) << "\n";
  } else if (*c_mixed) {
    auto a = varnorm::matrix_from_json(varnorm::load_json_file(mat_path));
    std::cout << json{{"value", varnorm::mixed_norm(a, mix_p, mix_r)}}.dump(2) << "\n";
  } else if (*c_var) {
    auto pair = varnorm::conjugate(varnorm::load_exponent(p_path));
    auto r = varnorm::special_variation(varnorm::load_step(g_path), pair, solve);
    std::cout << json{{"value", r.value},
                      {"oracle_value", r.oracle_value},
                      {"oracle_converged", r.oracle_converged},
                      {"sweeps", r.sweeps}}
                     .dump(2)
              << "\n";
  } else if (*c_ext) {
    auto r = varnorm::extended_norm(varnorm::load_step(f_path),
                                    varnorm::load_exponent(p_path), solve);
    json ladder = json::array();
    for (auto& [n, v] : r.ladder) ladder.push_back(json::array({n, v}));
    std::cout << json{{"value", r.value}, {"ladder", ladder}}.dump(2) << "\n";
  } else if (*c_weighted) {
    varnorm::WeightedSpec spec{varnorm::load_exponent(p_path), varnorm::load_density(w_path)};
    auto r = varnorm::weighted_norm_result(varnorm::load_step(f_path), spec, solve);
    if (!r.converged)
      throw varnorm::convergence_error("ladder did not converge", r.final_gap);
    std::cout << json{{"norm", r.value},
                      {"ladder_steps", r.ladder_steps},
                      {"converged", r.converged}}
                     .dump(2)
              << "\n";
  } else if (*c_embed) {
    varnorm::SmoothExponent pe;
    if (p_name == "affine") {
      pe = {[](double t) { return 2.0 + t; }, [](double) { return 1.0; }, {{0.0, 1.0}}};
    } else if (p_name == "sine3") {
      constexpr double kSplit = 0.5235987755982988;  // pi/6, where p' changes sign
      pe = {[](double t) { return 2.0 + std::sin(3.0 * t); },
            [](double t) { return 3.0 * std::cos(3.0 * t); },
            {{0.0, kSplit}, {kSplit, 1.0}}};
    } else {
      throw varnorm::validation_error("unknown built-in exponent: " + p_name);
    }
    varnorm::StepFunction f = varnorm::StepFunction::constant(1.0);
    if (f_name == "half")
      f = varnorm::StepFunction(varnorm::Partition({0.0, 0.5, 1.0}), {1.0, 0.0});
    else if (f_name != "constant")
      throw varnorm::validation_error("unknown test function: " + f_name);
    auto map = varnorm::build_embedding(pe, nodes);
    auto iso = varnorm::embed_isometry_check(f, map, solve);
    json pieces = json::array();
    for (const auto& pc : map.pieces())
      pieces.push_back(json{
          {"source", json::array({pc.src_lo, pc.src_hi})},
          {"target", json::array({pc.target.lo, pc.target.hi})},
          {"direction", pc.src_increasing ? "increasing" : "decreasing"},
          {"range", json::array({pc.target.p_lo, pc.target.p_hi})}});
    std::cout << json{{"p", p_name},
                      {"nodes", nodes},
                      {"pieces", pieces},
                      {"max_composition_residual", map.max_residual()},
                      {"source_norm", iso.source_norm},
                      {"target_norm", iso.target_norm},
                      {"isometry_defect", std::fabs(iso.source_norm - iso.target_norm)}}
                     .dump(2)
              << "\n";
  } else if (*c_verify) {
    varnorm::SuiteReport report;
    if (!replay_path.empty()) {
      json j = varnorm::load_json_file(replay_path);
      report = varnorm::replay_failures(j.is_object() ? j.at("failures") : j, cfg);
    } else {
      if (suite.empty()) throw varnorm::validation_error("verify needs a suite name");
      report = varnorm::run_suite(suite, cfg);
    }
    std::cout << report.to_json().dump(2) << "\n";
    return report.ok() ? 0 : 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const varnorm::convergence_error& e) {
    std::cerr << "non-convergence: " << e.what() << "\n";
    return 3;
  } catch (const varnorm::validation_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
