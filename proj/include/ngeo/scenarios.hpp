#ifndef NGEO_SCENARIOS_HPP
#define NGEO_SCENARIOS_HPP

#include <optional>
#include <string>
#include <vector>

#include "ngeo/spacetime.hpp"
#include "ngeo/submanifold.hpp"

namespace ngeo {

/// Reference answers attached to a scenario and how they were obtained.
struct Expected {
  std::optional<double> J;
  std::optional<double> Delta;
  std::optional<SpacetimePoint> start;  // z(0)
  std::optional<CausalCharacter> character;
  double tolerance = 1e-6;
  std::string source;
};

struct Scenario {
  std::string name;
  std::string pair;
  MetricField metric;
  BoundaryPair boundary;
  std::optional<Expected> expected;
  double time_window = 10.0;
  std::string description;
};

class UnknownScenario : public Error {
 public:
  using Error::Error;
};

/// Parameter of the rotating-frame scenario.
inline constexpr double kRotationRate = 0.2;

std::vector<std::string> builtin_names();
std::vector<std::string> builtin_pairs(const std::string& name);

/// Metric only.
MetricField builtin_metric(const std::string& name);

/// Pairs: "point-point", "sphere-point" (H1) and "cylinder-cylinder" (H2).
Scenario builtin(const std::string& name, const std::string& pair = "point-point");

Sampler sampler_for(const Scenario& s, int per_axis = 7);

}  // namespace ngeo

#endif  // NGEO_SCENARIOS_HPP
