#include "khess/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace khess {

namespace {

double fourier_rho(const Domain::Fourier& f, double theta, int deriv) {
  double acc = (deriv == 0) ? 1.0 : 0.0;
  for (const auto& mode : f.modes) {
    const double m = mode.m;
    const double c = std::cos(m * theta), s = std::sin(m * theta);
    switch (deriv) {
      case 0: acc += mode.cos_coeff * c + mode.sin_coeff * s; break;
      case 1: acc += m * (-mode.cos_coeff * s + mode.sin_coeff * c); break;
      case 2: acc += m * m * (-mode.cos_coeff * c - mode.sin_coeff * s); break;
      default: throw std::logic_error("fourier_rho: deriv > 2");
    }
  }
  return f.R * acc;
}

}  // namespace

Domain::Domain(int dim, Space space, Profile profile)
    : dim_(dim), space_(space), profile_(std::move(profile)) {
  if (dim_ != 2 && dim_ != 3) throw std::invalid_argument("Domain: dim must be 2 or 3");
  if (const auto* b = std::get_if<Ball>(&profile_)) {
    if (!(b->R > 0.0)) throw std::invalid_argument("Domain: ball radius must be > 0");
    rho_min_ = rho_max_ = b->R;
  } else if (const auto* f = std::get_if<Fourier>(&profile_)) {
    if (dim_ != 2) throw std::invalid_argument("Domain: Fourier profiles are dim-2 only");
    if (!(f->R > 0.0)) throw std::invalid_argument("Domain: Fourier base radius must be > 0");
    rho_min_ = std::numeric_limits<double>::infinity();
    rho_max_ = 0.0;
    for (int i = 0; i < 4096; ++i) {
      const double rho = fourier_rho(*f, 2.0 * M_PI * i / 4096.0, 0);
      rho_min_ = std::min(rho_min_, rho);
      rho_max_ = std::max(rho_max_, rho);
    }
    if (!(rho_min_ > 0.0))
      throw std::invalid_argument("Domain: degenerate Fourier profile (rho <= 0)");
  } else {
    const auto& el = std::get<Ellipse>(profile_);
    if (space_ != Space::Euclidean)
      throw std::invalid_argument("Domain: ellipse/ellipsoid profiles are Euclidean only");
    if (el.semi_axes.size() != dim_)
      throw std::invalid_argument("Domain: semi-axis count must match dim");
    if (el.semi_axes.minCoeff() <= 0.0)
      throw std::invalid_argument("Domain: semi-axes must be > 0");
    rho_min_ = el.semi_axes.minCoeff();
    rho_max_ = el.semi_axes.maxCoeff();
  }
  if (space_ == Space::Hyperbolic && dim_ == 3 && !std::holds_alternative<Ball>(profile_))
    throw std::invalid_argument("Domain: dim-3 hyperbolic supports geodesic balls only");
}

Domain Domain::ball(Space space, int dim, double R) { return Domain(dim, space, Ball{R}); }

Domain Domain::fourier(Space space, double R, std::vector<Mode> modes) {
  return Domain(2, space, Fourier{R, std::move(modes)});
}

Domain Domain::ellipse(double a, double b) {
  Eigen::VectorXd ax(2);
  ax << a, b;
  return Domain(2, Space::Euclidean, Ellipse{ax});
}

Domain Domain::ellipsoid(double a, double b, double c) {
  Eigen::VectorXd ax(3);
  ax << a, b, c;
  return Domain(3, Space::Euclidean, Ellipse{ax});
}

double Domain::radius(const Eigen::VectorXd& dir) const {
  if (const auto* b = std::get_if<Ball>(&profile_)) return b->R;
  if (const auto* f = std::get_if<Fourier>(&profile_))
    return fourier_rho(*f, std::atan2(dir[1], dir[0]), 0);
  const auto& el = std::get<Ellipse>(profile_);
  double q = 0.0;
  for (int i = 0; i < dim_; ++i) q += (dir[i] / el.semi_axes[i]) * (dir[i] / el.semi_axes[i]);
  return 1.0 / std::sqrt(q);
}

namespace {

// Planar curve data (chart image): point, outward normal, curvature, |c'|.
struct CurveData {
  Eigen::Vector2d point, normal;
  double curvature, speed;
};

// Curve given in polar form r(t) about the origin.
CurveData polar_curve(double r, double dr, double ddr, double t) {
  const Eigen::Vector2d dir(std::cos(t), std::sin(t));
  const Eigen::Vector2d perp(-std::sin(t), std::cos(t));
  CurveData c;
  c.point = r * dir;
  c.speed = std::sqrt(r * r + dr * dr);
  c.normal = (r * dir - dr * perp) / c.speed;
  c.curvature = (r * r + 2.0 * dr * dr - r * ddr) / (c.speed * c.speed * c.speed);
  return c;
}

// Surface data for X(theta, phi): point, outward normal, principal
// curvatures (positive for a sphere with outward normal), area density.
struct SurfaceData {
  Eigen::Vector3d point, normal;
  Eigen::Vector2d curvatures;
  double area_density;
};

SurfaceData surface_shape(const Eigen::Vector3d& x, const Eigen::Vector3d& xt,
                          const Eigen::Vector3d& xp, const Eigen::Vector3d& xtt,
                          const Eigen::Vector3d& xtp, const Eigen::Vector3d& xpp) {
  SurfaceData s;
  s.point = x;
  const Eigen::Vector3d cross = xt.cross(xp);
  s.area_density = cross.norm();
  if (s.area_density < 1e-14) throw std::domain_error("boundary_shape: degenerate parametrization");
  s.normal = cross / s.area_density;

  Eigen::Matrix2d first, second;
  first << xt.dot(xt), xt.dot(xp), xt.dot(xp), xp.dot(xp);
  // Sign chosen so a sphere with outward normal has positive curvatures.
  second << -xtt.dot(s.normal), -xtp.dot(s.normal), -xtp.dot(s.normal), -xpp.dot(s.normal);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::Matrix2d> es(second, first);
  s.curvatures = es.eigenvalues();
  return s;
}

}  // namespace

BoundaryPoint boundary_shape(const Domain& domain, const Eigen::VectorXd& param) {
  if (param.size() != domain.boundary_params())
    throw std::invalid_argument("boundary_shape: wrong parameter count");
  const bool hyper = domain.space() == Space::Hyperbolic;
  BoundaryPoint bp;

  if (domain.dim() == 2) {
    const double t = param[0];
    CurveData c;
    if (const auto* el = std::get_if<Domain::Ellipse>(&domain.profile())) {
      const double a = el->semi_axes[0], b = el->semi_axes[1];
      const Eigen::Vector2d x(a * std::cos(t), b * std::sin(t));
      const Eigen::Vector2d dx(-a * std::sin(t), b * std::cos(t));
      c.point = x;
      c.speed = dx.norm();
      c.normal = Eigen::Vector2d(b * std::cos(t), a * std::sin(t)).normalized();
      c.curvature = a * b / (c.speed * c.speed * c.speed);
    } else {
      double rho, drho, ddrho;
      if (const auto* b = std::get_if<Domain::Ball>(&domain.profile())) {
        rho = b->R;
        drho = ddrho = 0.0;
      } else {
        const auto& f = std::get<Domain::Fourier>(domain.profile());
        rho = fourier_rho(f, t, 0);
        drho = fourier_rho(f, t, 1);
        ddrho = fourier_rho(f, t, 2);
      }
      if (!hyper) {
        c = polar_curve(rho, drho, ddrho, t);
      } else {
        // Chart radius s = tanh(rho/2) and its parameter derivatives.
        const double half = 0.5 * rho;
        const double sech2 = 1.0 / (std::cosh(half) * std::cosh(half));
        const double s = std::tanh(half);
        const double ds = 0.5 * drho * sech2;
        const double dds = 0.5 * ddrho * sech2 - 0.5 * drho * drho * sech2 * s;
        c = polar_curve(s, ds, dds, t);
      }
    }
    bp.chart_point = c.point;
    bp.normal = c.normal;
    bp.principal_curvatures.resize(1);
    if (!hyper) {
      bp.principal_curvatures[0] = c.curvature;
      bp.measure_density = c.speed;
    } else {
      const double lambda = conformal_factor(c.point);
      const double dnu = (lambda * c.point).dot(c.normal);  // d_nu log(lambda)
      bp.principal_curvatures[0] = (c.curvature + dnu) / lambda;
      bp.measure_density = lambda * c.speed;
    }
    return bp;
  }

  // dim 3: param = (theta, phi)
  const double th = param[0], ph = param[1];
  const double st = std::sin(th), ct = std::cos(th);
  const double sp = std::sin(ph), cp = std::cos(ph);
  Eigen::Vector3d ax(1.0, 1.0, 1.0);
  if (const auto* el = std::get_if<Domain::Ellipse>(&domain.profile())) {
    ax = el->semi_axes;
  } else {
    const double R = std::get<Domain::Ball>(domain.profile()).R;
    ax *= hyper ? chart_radius(R) : R;
  }
  const Eigen::Vector3d x(ax[0] * st * cp, ax[1] * st * sp, ax[2] * ct);
  const Eigen::Vector3d xt(ax[0] * ct * cp, ax[1] * ct * sp, -ax[2] * st);
  const Eigen::Vector3d xp(-ax[0] * st * sp, ax[1] * st * cp, 0.0);
  const Eigen::Vector3d xtt(-ax[0] * st * cp, -ax[1] * st * sp, -ax[2] * ct);
  const Eigen::Vector3d xtp(-ax[0] * ct * sp, ax[1] * ct * cp, 0.0);
  const Eigen::Vector3d xpp(-ax[0] * st * cp, -ax[1] * st * sp, 0.0);
  SurfaceData s = surface_shape(x, xt, xp, xtt, xtp, xpp);

  bp.chart_point = s.point;
  bp.normal = s.normal;
  bp.principal_curvatures = s.curvatures;
  if (!hyper) {
    bp.measure_density = s.area_density;
  } else {
    const double lambda = conformal_factor(s.point);
    const double dnu = (lambda * s.point).dot(s.normal);
    bp.principal_curvatures = ((s.curvatures.array() + dnu) / lambda).matrix();
    bp.measure_density = lambda * lambda * s.area_density;
  }
  return bp;
}

}  // namespace khess
