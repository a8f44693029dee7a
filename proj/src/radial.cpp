#include "khess/radial.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace khess {

namespace {

constexpr int kGridSteps = 4096;
constexpr double kCenterEps = 1e-9;

double tangential_coeff(Space space, double r) {
  return space == Space::Hyperbolic ? 1.0 / std::tanh(r) : 1.0 / r;
}

// sigma_k(diag(lr, lt, ..., lt)) with lt of multiplicity n-1.
double sigma_of_radial(int n, int k, double lr, double lt) {
  return binomial(n - 1, k) * std::pow(lt, k) +
         binomial(n - 1, k - 1) * lr * std::pow(lt, k - 1);
}

// The ODE is linear in the radial eigenvalue once the tangential one is
// known; at the center both eigenvalues coincide and sigma_k(W) = C(n,k)
// forces the value 1 on the branch continuous from W = I.
double radial_eigenvalue(int n, int k, double lt) {
  if (!(lt > 1e-10))
    throw std::domain_error("radial: tangential eigenvalue left the admissible branch");
  return (binomial(n, k) - binomial(n - 1, k) * std::pow(lt, k)) /
         (binomial(n - 1, k - 1) * std::pow(lt, k - 1));
}

}  // namespace

double RadialSolution::u(double r) const {
  if (kind_ == Kind::ClosedForm) {
    if (space_ == Space::Euclidean) return 0.5 * (r * r - c0_ * c0_);
    return std::cosh(r) / std::cosh(R_) - 1.0;
  }
  const int last = static_cast<int>(grid_u_.size()) - 2;
  const int i = std::clamp(static_cast<int>(r / step_), 0, last);
  const double t = r / step_ - i;
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * grid_u_[i] + (t3 - 2 * t2 + t) * step_ * grid_v_[i] +
         (-2 * t3 + 3 * t2) * grid_u_[i + 1] + (t3 - t2) * step_ * grid_v_[i + 1];
}

double RadialSolution::du(double r) const {
  if (kind_ == Kind::ClosedForm) {
    if (space_ == Space::Euclidean) return r;
    return std::sinh(r) / std::cosh(R_);
  }
  const int last = static_cast<int>(grid_u_.size()) - 2;
  const int i = std::clamp(static_cast<int>(r / step_), 0, last);
  const double t = r / step_ - i;
  const double t2 = t * t;
  return ((6 * t2 - 6 * t) * (grid_u_[i] - grid_u_[i + 1])) / step_ +
         (3 * t2 - 4 * t + 1) * grid_v_[i] + (3 * t2 - 2 * t) * grid_v_[i + 1];
}

double RadialSolution::ddu(double r) const {
  if (kind_ == Kind::ClosedForm) {
    if (space_ == Space::Euclidean) return 1.0;
    return std::cosh(r) / std::cosh(R_);
  }
  // Recover u'' from the equation itself rather than differencing the grid.
  const double hu = space_ == Space::Hyperbolic ? u(r) : 0.0;
  double lt;
  if (r < kCenterEps) {
    return 1.0 + hu;
  }
  lt = du(r) * tangential_coeff(space_, r) - hu;
  return radial_eigenvalue(n_, k_, lt) + hu;
}

void RadialSolution::validate() const {
  if (k_ < 1 || k_ > n_) throw std::invalid_argument("radial: need 1 <= k <= n");
  const double tol = kind_ == Kind::ClosedForm ? 1e-12 : 1e-9;
  if (std::abs(u(R_)) > tol || std::abs(du(R_) - c0_) > tol)
    throw std::logic_error("radial: boundary data u(R) = 0, u'(R) = c0 violated");
  for (int i = 0; i <= 64; ++i) {
    const double r = R_ * i / 64.0 * (1.0 - 1e-9);
    if (!(u(r) < 0.0)) throw std::logic_error("radial: u must be negative on [0, R)");
  }
}

RadialSolution euclidean_exact(int n, int k, double c0) {
  if (!(c0 > 0.0)) throw std::invalid_argument("euclidean_exact: c0 must be > 0");
  RadialSolution sol;
  sol.n_ = n;
  sol.k_ = k;
  sol.space_ = Space::Euclidean;
  sol.R_ = c0;
  sol.c0_ = c0;
  sol.kind_ = RadialSolution::Kind::ClosedForm;
  sol.validate();
  return sol;
}

RadialSolution hyperbolic_exact(int n, int k, double c0) {
  if (!(c0 > 0.0 && c0 < 1.0))
    throw std::invalid_argument(
        "hyperbolic_exact: tanh R = c0 requires c0 in (0, 1), got c0 = " + std::to_string(c0));
  RadialSolution sol;
  sol.n_ = n;
  sol.k_ = k;
  sol.space_ = Space::Hyperbolic;
  sol.R_ = std::atanh(c0);
  sol.c0_ = c0;
  sol.kind_ = RadialSolution::Kind::ClosedForm;
  sol.validate();
  return sol;
}

double radial_ode_residual(const RadialSolution& sol, double r) {
  if (r < 0.0 || r > sol.R() * (1.0 + 1e-12))
    throw std::invalid_argument("radial_ode_residual: r outside [0, R]");
  const double hu = sol.space() == Space::Hyperbolic ? sol.u(r) : 0.0;
  const double lr = sol.ddu(r) - hu;
  const double lt = r < kCenterEps ? lr : sol.du(r) * tangential_coeff(sol.space(), r) - hu;
  return sigma_of_radial(sol.n(), sol.k(), lr, lt) - binomial(sol.n(), sol.k());
}

namespace {

struct OdeState {
  double u, v;
};

// RK4 over [0, R] with fixed step; returns the full grid of (u, u').
void integrate_profile(int n, int k, Space space, double R, double u0,
                       std::vector<double>& us, std::vector<double>& vs) {
  const double h = R / kGridSteps;
  const bool hyper = space == Space::Hyperbolic;
  auto accel = [&](double r, const OdeState& y) {
    const double hu = hyper ? y.u : 0.0;
    if (r < kCenterEps) return 1.0 + hu;
    const double lt = y.v * tangential_coeff(space, r) - hu;
    return radial_eigenvalue(n, k, lt) + hu;
  };
  us.assign(kGridSteps + 1, 0.0);
  vs.assign(kGridSteps + 1, 0.0);
  OdeState y{u0, 0.0};
  us[0] = y.u;
  for (int i = 0; i < kGridSteps; ++i) {
    const double r = i * h;
    const double a1 = accel(r, y);
    const OdeState y2{y.u + 0.5 * h * y.v, y.v + 0.5 * h * a1};
    const double a2 = accel(r + 0.5 * h, y2);
    const OdeState y3{y.u + 0.5 * h * y2.v, y.v + 0.5 * h * a2};
    const double a3 = accel(r + 0.5 * h, y3);
    const OdeState y4{y.u + h * y3.v, y.v + h * a3};
    const double a4 = accel(r + h, y4);
    y.u += h / 6.0 * (y.v + 2.0 * y2.v + 2.0 * y3.v + y4.v);
    y.v += h / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
    us[i + 1] = y.u;
    vs[i + 1] = y.v;
  }
}

}  // namespace

RadialSolution shoot_radial(int n, int k, Space space, double R) {
  if (!(R > 0.0)) throw std::invalid_argument("shoot_radial: R must be > 0");
  if (k < 1 || k > n) throw std::invalid_argument("shoot_radial: need 1 <= k <= n");

  std::vector<double> us, vs;
  auto miss = [&](double u0) {
    integrate_profile(n, k, space, R, u0, us, vs);
    return us.back();
  };

  // Bracket a sign change of u(R; u0) on a coarse scan.
  const double lo_limit = space == Space::Hyperbolic ? -1.0 + 1e-6 : -(R * R + 1.0);
  const double hi_limit = -1e-8;
  const int scans = 48;
  double lo = lo_limit, hi = hi_limit;
  double flo = miss(lo);
  bool bracketed = false;
  for (int i = 1; i <= scans; ++i) {
    const double x = lo_limit + (hi_limit - lo_limit) * i / scans;
    const double fx = miss(x);
    if (flo * fx <= 0.0) {
      hi = x;
      bracketed = true;
      break;
    }
    lo = x;
    flo = fx;
  }
  if (!bracketed)
    throw std::runtime_error("shoot_radial: no sign change of u(R) for u(0) in [" +
                             std::to_string(lo_limit) + ", " + std::to_string(hi_limit) + "]");

  double fhi = miss(hi);
  for (int i = 0; i < 20 && hi - lo > 1e-6; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = miss(mid);
    if (flo * fmid <= 0.0) {
      hi = mid;
      fhi = fmid;
    } else {
      lo = mid;
      flo = fmid;
    }
  }
  double a = lo, fa = flo, b = hi, fb = fhi;
  for (int i = 0; i < 40 && std::abs(fb) > 1e-14; ++i) {
    if (fb == fa) break;
    const double c = b - fb * (b - a) / (fb - fa);
    a = b;
    fa = fb;
    b = c;
    fb = miss(b);
  }
  if (std::abs(fb) > 1e-10)
    throw std::runtime_error("shoot_radial: root finder stalled with |u(R)| = " +
                             std::to_string(std::abs(fb)));

  integrate_profile(n, k, space, R, b, us, vs);
  RadialSolution sol;
  sol.n_ = n;
  sol.k_ = k;
  sol.space_ = space;
  sol.R_ = R;
  sol.c0_ = vs.back();
  sol.kind_ = RadialSolution::Kind::Numeric;
  sol.grid_u_ = std::move(us);
  sol.grid_v_ = std::move(vs);
  sol.step_ = R / kGridSteps;
  sol.validate();
  return sol;
}

ScalarField RadialSolution::as_field() const {
  const int dim = n_;
  if (kind_ == Kind::ClosedForm) {
    if (space_ == Space::Euclidean) {
      const double c0 = c0_;
      return ScalarField(
          dim, space_,
          [c0](const Eigen::VectorXd& x) { return 0.5 * (x.squaredNorm() - c0 * c0); },
          ScalarField::Exact{[](const Eigen::VectorXd& x) -> Eigen::VectorXd { return x; },
                             [](const Eigen::VectorXd& x) -> Eigen::MatrixXd {
                               return Eigen::MatrixXd::Identity(x.size(), x.size());
                             }});
    }
    // u = V / cosh R - 1 on the chart; scale the exact V derivatives.
    const double scale = 1.0 / std::cosh(R_);
    return ScalarField(
        dim, space_,
        [scale](const Eigen::VectorXd& x) {
          const double s2 = x.squaredNorm();
          return scale * (1.0 + s2) / (1.0 - s2) - 1.0;
        },
        ScalarField::Exact{
            [scale](const Eigen::VectorXd& x) -> Eigen::VectorXd {
              const double w = 1.0 - x.squaredNorm();
              return scale * 4.0 * x / (w * w);
            },
            [scale, dim](const Eigen::VectorXd& x) -> Eigen::MatrixXd {
              const double w = 1.0 - x.squaredNorm();
              return scale * ((4.0 / (w * w)) * Eigen::MatrixXd::Identity(dim, dim) +
                              (16.0 / (w * w * w)) * x * x.transpose());
            }});
  }
  RadialSolution copy = *this;
  const Space space = space_;
  return ScalarField(
      dim, space_,
      [copy, space](const Eigen::VectorXd& x) { return copy.u(geodesic_radius(space, x)); },
      ScalarField::FiniteDifference{1e-4, 1});
}

std::vector<ConeReport> admissibility_check(const ScalarField& u,
                                            const std::vector<Eigen::VectorXd>& points, int k) {
  std::vector<ConeReport> reports;
  reports.reserve(points.size());
  for (const auto& x : points) reports.push_back(cone_membership(operator_matrix(u, x), k));
  return reports;
}

std::vector<ConeReport> admissibility_check(const RadialSolution& sol,
                                            const std::vector<double>& radii, int k) {
  std::vector<ConeReport> reports;
  reports.reserve(radii.size());
  for (double r : radii) {
    const double hu = sol.space() == Space::Hyperbolic ? sol.u(r) : 0.0;
    const double lr = sol.ddu(r) - hu;
    const double lt =
        r < kCenterEps ? lr : sol.du(r) * tangential_coeff(sol.space(), r) - hu;
    Eigen::VectorXd diag = Eigen::VectorXd::Constant(sol.n(), lt);
    diag[0] = lr;
    reports.push_back(cone_membership(diag.asDiagonal().toDenseMatrix(), k));
  }
  return reports;
}

ScalarField p_value_field(const ScalarField& u, double step) {
  const Space space = u.space();
  return ScalarField(
      u.dim(), space,
      [u, space](const Eigen::VectorXd& x) {
        const FrameJet jet = covariant_jet(u, x);
        const double g2 = jet.grad_norm * jet.grad_norm;
        return space == Space::Euclidean ? g2 - 2.0 * jet.value
                                         : g2 - jet.value * jet.value - 2.0 * jet.value;
      },
      ScalarField::FiniteDifference{step, 1});
}

PFunctionSample p_function(const ScalarField& u, const Eigen::VectorXd& x, int k) {
  const FrameJet jet = covariant_jet(u, x);
  PFunctionSample sample;
  sample.point = x;
  const double g2 = jet.grad_norm * jet.grad_norm;
  sample.p_value = u.space() == Space::Euclidean
                       ? g2 - 2.0 * jet.value
                       : g2 - jet.value * jet.value - 2.0 * jet.value;
  const Eigen::MatrixXd w = operator_matrix(u.space(), jet);
  const Eigen::MatrixXd s = sigma_gradient(w, k);
  const Eigen::MatrixXd hess_p = covariant_jet(p_value_field(u), x).hess;
  sample.hess_trace_pairing = (s.cwiseProduct(hess_p)).sum();
  return sample;
}

std::vector<double> p_subsolution_residual(const RadialSolution& sol,
                                           const std::vector<Eigen::VectorXd>& points, int k) {
  const ScalarField field = sol.as_field();
  std::vector<double> residuals;
  residuals.reserve(points.size());
  for (const auto& x : points) residuals.push_back(p_function(field, x, k).hess_trace_pairing);
  return residuals;
}

}  // namespace khess
