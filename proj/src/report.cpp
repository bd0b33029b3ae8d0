#include "ngeo/report.hpp"

#include <sstream>

#include "ngeo/curve_io.hpp"

namespace ngeo {

void Report::add(const std::string& key, const std::string& value) { entries_.emplace_back(key, value); }
void Report::add(const std::string& key, double value) { add(key, fmt(value)); }
void Report::add(const std::string& key, int value) { add(key, std::to_string(value)); }

void Report::append(const Report& other) {
  entries_.insert(entries_.end(), other.entries_.begin(), other.entries_.end());
}

std::string Report::str() const {
  std::ostringstream out;
  for (const auto& [k, v] : entries_) out << k << ": " << v << '\n';
  return out.str();
}

Report diagnostics_report(const MetricField& m, const SpacetimeCurve& c, const Diagnostics& d, const Tolerances& tol) {
  Report r;
  const ReducedState rs = reduced_state(c);
  r.add("segments", c.segments());
  r.add("J", eval_J(m, rs.x, rs.Delta));
  r.add("f", eval_f(m, c));
  r.add("Delta", rs.Delta);
  r.add("t0", rs.t0);
  r.add("E_z", d.conservation.E_z);
  r.add("E_z_deviation", d.conservation.E_deviation);
  r.add("C_z", d.conservation.C_z);
  r.add("C_z_deviation", d.conservation.max_deviation);
  r.add("geodesic_residual", d.geodesic_residual);
  r.add("residual_scale", d.scale);
  r.add("orthogonality_r0", d.orthogonality.r0);
  r.add("orthogonality_r1", d.orthogonality.r1);
  r.add("violation_P", d.violation_P);
  r.add("violation_Q", d.violation_Q);
  r.add("causal_character", to_string(d.character));
  r.add("certified", meets(d, tol) ? "yes" : "no");
  return r;
}

std::map<std::string, std::string> parse_report(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto colon = line.find(": ");
    if (colon == std::string::npos) continue;
    out[line.substr(0, colon)] = line.substr(colon + 2);
  }
  return out;
}

}  // namespace ngeo
