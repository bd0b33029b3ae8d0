#ifndef NGEO_TYPES_HPP
#define NGEO_TYPES_HPP

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace ngeo {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Axis-aligned box in R^d.
struct Box {
  Vector lower;
  Vector upper;

  int dim() const { return static_cast<int>(lower.size()); }
  bool contains(const Vector& x, double margin = 0.0) const;
  Vector center() const { return 0.5 * (lower + upper); }
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A point fell outside the chart, or too close to its edge for differencing.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The metric data violates a standing assumption (K not timelike, singular g, ...).
class ModelError : public Error {
 public:
  using Error::Error;
};

/// Caller broke an operation's precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class DegenerateSubmanifold : public Error {
 public:
  using Error::Error;
};

class DegenerateCurve : public Error {
 public:
  using Error::Error;
};

/// Scenario is ill-posed (overlapping boundary sets, wrong hypothesis flags).
class InvalidScenario : public Error {
 public:
  using Error::Error;
};

/// Malformed scenario or curve file.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace ngeo

#endif  // NGEO_TYPES_HPP
