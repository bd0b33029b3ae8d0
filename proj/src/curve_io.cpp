#include "ngeo/curve_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace ngeo {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_curve(const SpacetimeCurve& c, const std::string& extra_name, const std::vector<double>& extra) {
  const int N = c.segments();
  const int d = c.dim();
  const bool with_extra = !extra_name.empty();
  if (with_extra && static_cast<int>(extra.size()) != N + 1) {
    throw PreconditionError("extra column needs one value per node");
  }
  std::ostringstream out;
  out << "s";
  for (int k = 1; k <= d; ++k) out << ",x" << k;
  out << ",t";
  if (with_extra) out << ',' << extra_name;
  out << '\n';
  for (int i = 0; i <= N; ++i) {
    out << fmt(static_cast<double>(i) / N);
    for (int k = 0; k < d; ++k) out << ',' << fmt(c.nodes[i].x[k]);
    out << ',' << fmt(c.nodes[i].t);
    if (with_extra) out << ',' << fmt(extra[i]);
    out << '\n';
  }
  return out.str();
}

void write_curve(const std::string& path, const SpacetimeCurve& c, const std::string& extra_name,
                 const std::vector<double>& extra) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << format_curve(c, extra_name, extra);
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

}  // namespace

SpacetimeCurve parse_curve(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("curve file is empty");
  const std::vector<std::string> header = split(line);
  // s, x1..xd, t, then optional extras.
  int t_col = -1;
  for (std::size_t k = 0; k < header.size(); ++k)
    if (header[k] == "t") t_col = static_cast<int>(k);
  if (header.empty() || header[0] != "s" || t_col < 2) throw ParseError("curve header must be s,x1..xd,t");
  const int d = t_col - 1;
  for (int k = 1; k <= d; ++k) {
    if (header[k] != "x" + std::to_string(k)) throw ParseError("curve header must be s,x1..xd,t");
  }

  SpacetimeCurve c;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    const std::vector<std::string> cells = split(line);
    if (cells.size() != header.size()) throw ParseError("row " + std::to_string(row) + " has the wrong number of columns");
    SpacetimePoint p;
    p.x.resize(d);
    try {
      for (int k = 0; k < d; ++k) p.x[k] = std::stod(cells[k + 1]);
      p.t = std::stod(cells[t_col]);
    } catch (const std::exception&) {
      throw ParseError("row " + std::to_string(row) + " is not numeric");
    }
    c.nodes.push_back(std::move(p));
  }
  if (c.nodes.size() < 2) throw ParseError("curve needs at least two rows");
  return c;
}

SpacetimeCurve read_curve(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open curve file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_curve(ss.str());
}

}  // namespace ngeo
