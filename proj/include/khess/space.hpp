#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace khess {

enum class Space { Euclidean, Hyperbolic };

inline const char* to_string(Space s) {
  return s == Space::Euclidean ? "euclidean" : "hyperbolic";
}

/// Chart boundary guard: hyperbolic chart points must satisfy |x| < 1.
inline constexpr double kChartEdge = 1.0 - 1e-9;

/// Conformal factor of the Poincare ball, lambda(x) = 2 / (1 - |x|^2).
/// The hyperbolic metric on the chart is lambda^2 times the Euclidean one.
inline double conformal_factor(const Eigen::VectorXd& x) {
  const double s2 = x.squaredNorm();
  if (s2 >= kChartEdge * kChartEdge)
    throw std::domain_error("space: chart point with |x| >= 1 - 1e-9");
  return 2.0 / (1.0 - s2);
}

/// Geodesic distance from the origin of the chart point with |x| = s.
inline double geodesic_radius(double s) {
  if (s < 0.0 || s >= 1.0) throw std::domain_error("space: chart radius must lie in [0, 1)");
  return std::log((1.0 + s) / (1.0 - s));  // = 2 artanh(s)
}

/// Chart radius of the point at geodesic distance r from the origin.
inline double chart_radius(double r) {
  if (r < 0.0) throw std::domain_error("space: geodesic radius must be >= 0");
  return std::tanh(0.5 * r);
}

/// Geodesic distance of a chart point from the origin (0 for Euclidean use).
inline double geodesic_radius(Space space, const Eigen::VectorXd& x) {
  const double s = x.norm();
  return space == Space::Hyperbolic ? geodesic_radius(s) : s;
}

/// Frame components of d(log lambda) in the orthonormal frame e_a = lambda^{-1} d_a.
/// For the ball chart these equal the chart coordinates themselves.
inline Eigen::VectorXd frame_dlog_lambda(const Eigen::VectorXd& x) { return x; }

}  // namespace khess
