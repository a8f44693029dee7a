#pragma once

#include <Eigen/Dense>

#include <vector>

#include "khess/fields.hpp"
#include "khess/space.hpp"
#include "khess/symfun.hpp"

namespace khess {

/// A radial solution of sigma_k(W) = C(n,k) on a (geodesic) ball of radius
/// R, vanishing on the boundary with normal derivative c0. Closed-form
/// solutions carry exact profile derivatives; shot solutions interpolate a
/// dense integration grid.
class RadialSolution {
 public:
  enum class Kind { ClosedForm, Numeric };

  int n() const { return n_; }
  int k() const { return k_; }
  Space space() const { return space_; }
  double R() const { return R_; }
  double c0() const { return c0_; }
  Kind kind() const { return kind_; }

  double u(double r) const;
  double du(double r) const;
  double ddu(double r) const;

  /// The solution as a chart scalar field (exact derivatives for closed
  /// forms, finite differences of the interpolated profile otherwise).
  ScalarField as_field() const;

  friend RadialSolution euclidean_exact(int n, int k, double c0);
  friend RadialSolution hyperbolic_exact(int n, int k, double c0);
  friend RadialSolution shoot_radial(int n, int k, Space space, double R);

 private:
  RadialSolution() = default;
  void validate() const;

  int n_ = 0, k_ = 0;
  Space space_ = Space::Euclidean;
  double R_ = 0.0, c0_ = 0.0;
  Kind kind_ = Kind::ClosedForm;
  // numeric profile (uniform grid on [0, R]): values and first derivatives
  std::vector<double> grid_u_, grid_v_;
  double step_ = 0.0;
};

/// u(r) = (r^2 - c0^2)/2 on the ball of radius R = c0; sigma_k(D^2 u) = C(n,k).
RadialSolution euclidean_exact(int n, int k, double c0);

/// u(r) = cosh r / cosh R - 1 with tanh R = c0; W = D^2 u - u I = I.
RadialSolution hyperbolic_exact(int n, int k, double c0);

/// sigma_k(diag(lambda_rad, lambda_tan, ...)) - C(n,k) at radius r, with
/// lambda_rad = u'' - u, lambda_tan = u' coth r - u (hyperbolic; Euclidean
/// drops the -u and uses u'/r). r = 0 uses the smooth-center limit.
double radial_ode_residual(const RadialSolution& sol, double r);

/// Integrate the radial ODE from the center (u'(0) = 0) and shoot on u(0)
/// until u(R) = 0 within 1e-10; bisection bracket then secant polish.
RadialSolution shoot_radial(int n, int k, Space space, double R);

/// Gamma_k membership of W at each sample point / radius.
std::vector<ConeReport> admissibility_check(const ScalarField& u,
                                            const std::vector<Eigen::VectorXd>& points, int k);
std::vector<ConeReport> admissibility_check(const RadialSolution& sol,
                                            const std::vector<double>& radii, int k);

struct PFunctionSample {
  Eigen::VectorXd point;
  double p_value = 0.0;           // |Du|^2 - 2u resp. |Du|^2 - u^2 - 2u
  double hess_trace_pairing = 0.0;  // sigma_k^{ij}(W) P_ij
};

/// P (Euclidean) resp. P-tilde (hyperbolic) at x, plus the contraction of
/// its covariant Hessian against sigma_k^{ij}(W). The Hessian of P comes
/// from finite differences of the P values (third-order data in u).
PFunctionSample p_function(const ScalarField& u, const Eigen::VectorXd& x, int k);

/// The P value of u as a derived scalar field (finite-difference mode).
ScalarField p_value_field(const ScalarField& u, double step = 1e-3);

/// hess_trace_pairing of the solution's P function at each sample point;
/// zero (up to the finite-difference floor) for the exact solutions and
/// never significantly negative.
std::vector<double> p_subsolution_residual(const RadialSolution& sol,
                                           const std::vector<Eigen::VectorXd>& points, int k);

}  // namespace khess
