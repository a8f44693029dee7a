#pragma once

#include <Eigen/Dense>

#include <functional>
#include <variant>

#include "khess/space.hpp"
#include "khess/symfun.hpp"

namespace khess {

/// Value, gradient and covariant Hessian of a scalar field at one chart
/// point, expressed in the orthonormal frame e_a = lambda^{-1} d_a
/// (plain coordinates in the Euclidean case).
struct FrameJet {
  Eigen::VectorXd point;
  double value = 0.0;
  Eigen::VectorXd grad;
  Eigen::MatrixXd hess;
  double grad_norm = 0.0;
};

/// A scalar function on a coordinate chart. Derivatives come either from
/// closed-form chart-coordinate suppliers or from central finite differences
/// of the value (step h, optionally one Richardson level).
class ScalarField {
 public:
  using ValueFn = std::function<double(const Eigen::VectorXd&)>;
  using GradFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
  using HessFn = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;

  struct Exact {
    GradFn gradient;
    HessFn hessian;
  };
  struct FiniteDifference {
    double step = 1e-4;
    int richardson = 1;
  };

  ScalarField(int dim, Space space, ValueFn value, Exact exact)
      : dim_(dim), space_(space), value_(std::move(value)), mode_(std::move(exact)) {}
  ScalarField(int dim, Space space, ValueFn value, FiniteDifference fd)
      : dim_(dim), space_(space), value_(std::move(value)), mode_(fd) {
    if (!(fd.step > 0.0 && fd.step <= 1e-2))
      throw std::invalid_argument("ScalarField: finite-difference step must lie in (0, 1e-2]");
  }

  int dim() const { return dim_; }
  Space space() const { return space_; }
  double operator()(const Eigen::VectorXd& x) const { return value_(x); }

  bool exact() const { return std::holds_alternative<Exact>(mode_); }

  /// Chart-coordinate gradient and Hessian (no metric correction).
  Eigen::VectorXd chart_gradient(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd chart_hessian(const Eigen::VectorXd& x) const;

 private:
  int dim_;
  Space space_;
  ValueFn value_;
  std::variant<Exact, FiniteDifference> mode_;

  double fd_step(const Eigen::VectorXd& x) const;
};

/// Covariant jet of u at x in the orthonormal frame. In the hyperbolic case
/// the coordinate Hessian is corrected by the Christoffel symbols of the
/// conformal metric,
///   Gamma^k_ij = delta_ik d_j(log lambda) + delta_jk d_i(log lambda)
///              - delta_ij d_k(log lambda),
/// and the result rescaled to the frame e_a = lambda^{-1} d_a.
FrameJet covariant_jet(const ScalarField& u, const Eigen::VectorXd& x);

/// V = cosh(r) on the hyperbolic chart, with exact derivatives; in the
/// Euclidean case the potential |x|^2 / 2 whose gradient is the position field.
ScalarField v_field(Space space, int dim);

/// W = D^2 u (Euclidean) or W = D^2 u - u I (hyperbolic), frame components.
Eigen::MatrixXd operator_matrix(const ScalarField& u, const Eigen::VectorXd& x);
Eigen::MatrixXd operator_matrix(Space space, const FrameJet& jet);

/// (k-1)-th curvature of the level set of u through x:
///   H_{k-1} = sigma_k^{ij}(D^2 u) u_i u_j / |Du|^{k+1}.
/// Rejects near-critical points (|Du| < 1e-8).
double level_set_curvature(const ScalarField& u, const Eigen::VectorXd& x, int k);

/// Max-norm commutator residual of sigma_k^{ij}(W) u_il = sigma_k^{il}(W) u_ij,
/// i.e. || [sigma_gradient(W, k), hess] ||_max. Pointwise algebraic identity.
double index_exchange_residual(const ScalarField& u, const Eigen::VectorXd& x, int k);

/// Covariant divergence of the tensor field sigma_k^{ij}(W(.)) at x, frame
/// components, by central differences of step `step` plus connection terms.
/// Vanishes (up to O(step^2)) for any C^3 field u.
Eigen::VectorXd divergence_free_residual(const ScalarField& u, const Eigen::VectorXd& x, int k,
                                         double step = 1e-3);

}  // namespace khess
