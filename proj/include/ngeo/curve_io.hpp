#ifndef NGEO_CURVE_IO_HPP
#define NGEO_CURVE_IO_HPP

#include <optional>
#include <string>
#include <vector>

#include "ngeo/spacetime.hpp"

namespace ngeo {

/// CSV with header `s,x1..xd,t` and one row per node, 17 significant digits.
/// An optional extra column (e.g. `null_check`) follows t.
std::string format_curve(const SpacetimeCurve& c, const std::string& extra_name = {},
                         const std::vector<double>& extra = {});
void write_curve(const std::string& path, const SpacetimeCurve& c, const std::string& extra_name = {},
                 const std::vector<double>& extra = {});

/// Reads a curve file; extra trailing columns are ignored. Throws ParseError.
SpacetimeCurve read_curve(const std::string& path);
SpacetimeCurve parse_curve(const std::string& text);

/// printf("%.17g").
std::string fmt(double v);

}  // namespace ngeo

#endif  // NGEO_CURVE_IO_HPP
