#ifndef NGEO_SCENARIO_FILE_HPP
#define NGEO_SCENARIO_FILE_HPP

#include <json.hpp>

#include <string>
#include <utility>
#include <vector>

#include "ngeo/params.hpp"
#include "ngeo/scenarios.hpp"

namespace ngeo {

/// Sparse polynomial: sum of coef * prod x_k^powers[k].
struct Polynomial {
  struct Term {
    double coef = 0.0;
    std::vector<int> powers;
  };
  int nvars = 0;
  std::vector<Term> terms;

  double operator()(const Vector& x) const;
  Vector gradient(const Vector& x) const;
};

/// A number, or an array of {"coef": c, "powers": [...]} objects.
Polynomial parse_polynomial(const nlohmann::json& j, int nvars, const std::string& where);

struct ScenarioFile {
  Scenario scenario;
  bool has_boundary = false;
  SolveParams params;
};

/// Accepts a path to a JSON scenario or "builtin:<name>[:<pair>]".
ScenarioFile load_scenario(const std::string& source);
ScenarioFile parse_scenario(const nlohmann::json& j, const std::string& fallback_name = "scenario");

}  // namespace ngeo

#endif  // NGEO_SCENARIO_FILE_HPP
