#ifndef NGEO_REPORT_HPP
#define NGEO_REPORT_HPP

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ngeo/params.hpp"
#include "ngeo/solver.hpp"

namespace ngeo {

/// Ordered `key: value` lines.
class Report {
 public:
  void add(const std::string& key, const std::string& value);
  void add(const std::string& key, double value);
  void add(const std::string& key, int value);
  void append(const Report& other);

  std::string str() const;
  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

/// Diagnostics block shared by `solve` and `diagnose`: J, E_z, C_z, deviations,
/// residuals, causal character and the certification verdict.
Report diagnostics_report(const MetricField& m, const SpacetimeCurve& c, const Diagnostics& d,
                          const Tolerances& tol);

/// Parses `key: value` lines; later keys overwrite earlier ones.
std::map<std::string, std::string> parse_report(const std::string& text);

}  // namespace ngeo

#endif  // NGEO_REPORT_HPP
