#pragma once

// JSON and CSV interchange. Step functions travel as
//   {"partition": [0, ..., 1], "values": [...]}
// and exponents/densities reuse the schema with their validation applied on
// load. Curves leave as CSV (t, phi) rows, plot-ready.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "varnorm/duality.hpp"
#include "varnorm/errors.hpp"
#include "varnorm/function_model.hpp"
#include "varnorm/phi_solver.hpp"
#include "varnorm/sequence_space.hpp"

namespace varnorm {

using json = nlohmann::json;

inline json to_json(const StepFunction& f) {
  return json{{"partition", f.partition().points()}, {"values", f.values()}};
}

inline StepFunction step_from_json(const json& j) {
  if (!j.is_object() || !j.contains("partition") || !j.contains("values"))
    throw validation_error("expected an object with 'partition' and 'values'");
  try {
    return StepFunction(Partition(j.at("partition").get<std::vector<double>>()),
                        j.at("values").get<std::vector<double>>());
  } catch (const json::exception& e) {
    throw validation_error(std::string("malformed step function: ") + e.what());
  }
}

inline json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw validation_error("cannot open file: " + path);
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) throw validation_error("malformed JSON in " + path);
  return j;
}

inline StepFunction load_step(const std::string& path) {
  return step_from_json(load_json_file(path));
}
inline Exponent load_exponent(const std::string& path) {
  return validate_exponent(load_step(path));
}
inline Density load_density(const std::string& path) {
  return validate_density(load_step(path));
}

inline VarExpSequence sequence_from_json(const json& j) {
  if (!j.is_object() || !j.contains("values") || !j.contains("exponents"))
    throw validation_error("expected an object with 'values' and 'exponents'");
  try {
    return VarExpSequence(j.at("values").get<std::vector<double>>(),
                          j.at("exponents").get<std::vector<double>>());
  } catch (const json::exception& e) {
    throw validation_error(std::string("malformed sequence: ") + e.what());
  }
}

inline NonnegMatrix matrix_from_json(const json& j) {
  if (!j.is_array()) throw validation_error("expected a JSON array of rows");
  try {
    return NonnegMatrix(j.get<std::vector<std::vector<double>>>());
  } catch (const json::exception& e) {
    throw validation_error(std::string("malformed matrix: ") + e.what());
  }
}

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string curve_to_csv(const NormCurve& curve) {
  std::ostringstream os;
  os << "t,phi\n";
  for (std::size_t i = 0; i < curve.phi().size(); ++i)
    os << format_double(curve.partition().point(i)) << "," << format_double(curve.phi()[i])
       << "\n";
  return os.str();
}

inline json to_json(const PairingReport& r) {
  return json{{"pairing", r.pairing},
              {"norm_x", r.norm_x},
              {"norm_Jx", r.norm_Jx},
              {"defect", r.defect}};
}

}  // namespace varnorm
