#pragma once

#include <Eigen/Dense>

#include <variant>
#include <vector>

#include "khess/space.hpp"

namespace khess {

/// A star-shaped region of R^n or H^n (n = 2, 3) centered at the chart
/// origin, given by a geodesic radius profile over unit directions.
class Domain {
 public:
  struct Ball {
    double R;
  };
  struct Mode {
    int m;
    double cos_coeff;
    double sin_coeff;
  };
  /// rho(theta) = R (1 + sum_m a_m cos(m theta) + b_m sin(m theta)), dim 2.
  struct Fourier {
    double R;
    std::vector<Mode> modes;
  };
  /// Euclidean ellipse (dim 2) / ellipsoid (dim 3) with given semi-axes.
  struct Ellipse {
    Eigen::VectorXd semi_axes;
  };
  using Profile = std::variant<Ball, Fourier, Ellipse>;

  Domain(int dim, Space space, Profile profile);

  static Domain ball(Space space, int dim, double R);
  static Domain fourier(Space space, double R, std::vector<Mode> modes);
  static Domain ellipse(double a, double b);
  static Domain ellipsoid(double a, double b, double c);

  int dim() const { return dim_; }
  Space space() const { return space_; }
  const Profile& profile() const { return profile_; }

  /// Geodesic radius in the given unit direction.
  double radius(const Eigen::VectorXd& dir) const;

  /// Bounds of the radius profile (sampled for Fourier profiles).
  double radius_min() const { return rho_min_; }
  double radius_max() const { return rho_max_; }

  /// Number of boundary parameters: 1 (dim 2) or 2 (dim 3: polar, azimuth).
  int boundary_params() const { return dim_ - 1; }

 private:
  int dim_;
  Space space_;
  Profile profile_;
  double rho_min_ = 0.0, rho_max_ = 0.0;
};

/// Boundary geometry at one parameter value. For dim 2 the parameter is the
/// curve parameter t in [0, 2pi); for dim 3 it is (theta, phi) with polar
/// theta in (0, pi). measure_density is d(sigma)/dt resp. d(sigma)/(dtheta
/// dphi) and includes the metric factor lambda^{n-1} in the hyperbolic case.
struct BoundaryPoint {
  Eigen::VectorXd chart_point;
  Eigen::VectorXd normal;                // outward unit normal, frame components
  Eigen::VectorXd principal_curvatures;  // n-1 values
  double measure_density = 0.0;
};

/// Normal, principal curvatures and measure density of the domain boundary.
/// Hyperbolic data comes from the Euclidean shape operator of the chart
/// image via the conformal law S_g = lambda^{-1} (S_e + d_nu(log lambda) I).
BoundaryPoint boundary_shape(const Domain& domain, const Eigen::VectorXd& param);

}  // namespace khess
