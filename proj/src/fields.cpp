#include "khess/fields.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace khess {

namespace {

// Second-order central differences at step h. A single Richardson level
// combines D(h) and D(h/2) to cancel the leading h^2 truncation term.
Eigen::VectorXd central_gradient(const ScalarField::ValueFn& f, const Eigen::VectorXd& x,
                                 double h) {
  const int n = static_cast<int>(x.size());
  Eigen::VectorXd g(n);
  Eigen::VectorXd xp = x, xm = x;
  for (int i = 0; i < n; ++i) {
    xp[i] = x[i] + h;
    xm[i] = x[i] - h;
    g[i] = (f(xp) - f(xm)) / (2.0 * h);
    xp[i] = x[i];
    xm[i] = x[i];
  }
  return g;
}

Eigen::MatrixXd central_hessian(const ScalarField::ValueFn& f, const Eigen::VectorXd& x,
                                double h) {
  const int n = static_cast<int>(x.size());
  Eigen::MatrixXd hess(n, n);
  const double f0 = f(x);
  Eigen::VectorXd y = x;
  for (int i = 0; i < n; ++i) {
    y[i] = x[i] + h;
    const double fp = f(y);
    y[i] = x[i] - h;
    const double fm = f(y);
    y[i] = x[i];
    hess(i, i) = (fp - 2.0 * f0 + fm) / (h * h);
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      double acc = 0.0;
      for (int si : {+1, -1}) {
        for (int sj : {+1, -1}) {
          y[i] = x[i] + si * h;
          y[j] = x[j] + sj * h;
          acc += si * sj * f(y);
        }
      }
      y[i] = x[i];
      y[j] = x[j];
      hess(i, j) = hess(j, i) = acc / (4.0 * h * h);
    }
  }
  return hess;
}

}  // namespace

double ScalarField::fd_step(const Eigen::VectorXd& x) const {
  const auto& fd = std::get<FiniteDifference>(mode_);
  if (space_ == Space::Euclidean) return fd.step;
  // Shrink the step near the chart edge so every stencil point stays inside.
  const double margin = kChartEdge - x.norm();
  if (margin <= 0.0)
    throw std::domain_error("ScalarField: finite-difference stencil leaves the chart");
  return std::min(fd.step, margin / 3.0);
}

Eigen::VectorXd ScalarField::chart_gradient(const Eigen::VectorXd& x) const {
  if (const auto* e = std::get_if<Exact>(&mode_)) return e->gradient(x);
  const auto& fd = std::get<FiniteDifference>(mode_);
  const double h = fd_step(x);
  Eigen::VectorXd g = central_gradient(value_, x, h);
  if (fd.richardson > 0) {
    const Eigen::VectorXd g2 = central_gradient(value_, x, 0.5 * h);
    g = (4.0 * g2 - g) / 3.0;
  }
  return g;
}

Eigen::MatrixXd ScalarField::chart_hessian(const Eigen::VectorXd& x) const {
  if (const auto* e = std::get_if<Exact>(&mode_)) return e->hessian(x);
  const auto& fd = std::get<FiniteDifference>(mode_);
  const double h = fd_step(x);
  Eigen::MatrixXd hess = central_hessian(value_, x, h);
  if (fd.richardson > 0) {
    const Eigen::MatrixXd h2 = central_hessian(value_, x, 0.5 * h);
    hess = (4.0 * h2 - hess) / 3.0;
  }
  return hess;
}

FrameJet covariant_jet(const ScalarField& u, const Eigen::VectorXd& x) {
  FrameJet jet;
  jet.point = x;
  jet.value = u(x);
  const Eigen::VectorXd grad_chart = u.chart_gradient(x);
  const Eigen::MatrixXd hess_chart = u.chart_hessian(x);

  if (u.space() == Space::Euclidean) {
    jet.grad = grad_chart;
    jet.hess = hess_chart;
  } else {
    const int n = u.dim();
    const double lambda = conformal_factor(x);
    const Eigen::VectorXd mu = lambda * x;  // mu_a = d_a(log lambda)
    // u_{;ij} = d_i d_j u - Gamma^k_ij d_k u for the conformal Christoffels.
    Eigen::MatrixXd cov = hess_chart;
    cov -= mu * grad_chart.transpose();
    cov -= grad_chart * mu.transpose();
    cov += mu.dot(grad_chart) * Eigen::MatrixXd::Identity(n, n);
    jet.grad = grad_chart / lambda;
    jet.hess = cov / (lambda * lambda);
  }
  jet.grad_norm = jet.grad.norm();
  return jet;
}

ScalarField v_field(Space space, int dim) {
  if (space == Space::Euclidean) {
    return ScalarField(
        dim, space, [](const Eigen::VectorXd& x) { return 0.5 * x.squaredNorm(); },
        ScalarField::Exact{
            [](const Eigen::VectorXd& x) -> Eigen::VectorXd { return x; },
            [](const Eigen::VectorXd& x) -> Eigen::MatrixXd {
              return Eigen::MatrixXd::Identity(x.size(), x.size());
            }});
  }
  // V(x) = cosh r(x) = (1 + |x|^2) / (1 - |x|^2) on the ball chart.
  return ScalarField(
      dim, space,
      [](const Eigen::VectorXd& x) {
        const double s2 = x.squaredNorm();
        return (1.0 + s2) / (1.0 - s2);
      },
      ScalarField::Exact{
          [](const Eigen::VectorXd& x) -> Eigen::VectorXd {
            const double w = 1.0 - x.squaredNorm();
            return 4.0 * x / (w * w);
          },
          [](const Eigen::VectorXd& x) -> Eigen::MatrixXd {
            const double w = 1.0 - x.squaredNorm();
            const int n = static_cast<int>(x.size());
            return (4.0 / (w * w)) * Eigen::MatrixXd::Identity(n, n) +
                   (16.0 / (w * w * w)) * x * x.transpose();
          }});
}

Eigen::MatrixXd operator_matrix(Space space, const FrameJet& jet) {
  if (space == Space::Euclidean) return jet.hess;
  const int n = static_cast<int>(jet.hess.rows());
  return jet.hess - jet.value * Eigen::MatrixXd::Identity(n, n);
}

Eigen::MatrixXd operator_matrix(const ScalarField& u, const Eigen::VectorXd& x) {
  return operator_matrix(u.space(), covariant_jet(u, x));
}

double level_set_curvature(const ScalarField& u, const Eigen::VectorXd& x, int k) {
  const FrameJet jet = covariant_jet(u, x);
  if (jet.grad_norm < 1e-8)
    throw std::domain_error("level_set_curvature: critical point (|Du| < 1e-8)");
  const Eigen::MatrixXd s = sigma_gradient(jet.hess, k);
  return jet.grad.dot(s * jet.grad) / std::pow(jet.grad_norm, k + 1);
}

double index_exchange_residual(const ScalarField& u, const Eigen::VectorXd& x, int k) {
  const FrameJet jet = covariant_jet(u, x);
  const Eigen::MatrixXd w = operator_matrix(u.space(), jet);
  const Eigen::MatrixXd s = sigma_gradient(w, k);
  return (s * jet.hess - jet.hess * s).cwiseAbs().maxCoeff();
}

Eigen::VectorXd divergence_free_residual(const ScalarField& u, const Eigen::VectorXd& x, int k,
                                         double step) {
  const int n = u.dim();
  if (u.space() == Space::Hyperbolic && x.norm() + step >= kChartEdge)
    throw std::domain_error("divergence_free_residual: stencil leaves the chart");

  auto tensor = [&](const Eigen::VectorXd& y) -> Eigen::MatrixXd {
    return sigma_gradient(operator_matrix(u, y), k);
  };

  // Chart-direction derivatives of the frame components, d_a T_{ij}.
  std::vector<Eigen::MatrixXd> dT(n);
  Eigen::VectorXd y = x;
  for (int a = 0; a < n; ++a) {
    y[a] = x[a] + step;
    const Eigen::MatrixXd tp = tensor(y);
    y[a] = x[a] - step;
    const Eigen::MatrixXd tm = tensor(y);
    y[a] = x[a];
    dT[a] = (tp - tm) / (2.0 * step);
  }

  Eigen::VectorXd div = Eigen::VectorXd::Zero(n);
  if (u.space() == Space::Euclidean) {
    for (int j = 0; j < n; ++j)
      for (int a = 0; a < n; ++a) div[j] += dT[a](a, j);
    return div;
  }

  // div(T)_j = e_a(T_{aj}) + n m_a T_{aj} - m_j tr(T) in the orthonormal
  // frame, where m = frame components of d(log lambda).
  const double lambda = conformal_factor(x);
  const Eigen::VectorXd m = frame_dlog_lambda(x);
  const Eigen::MatrixXd t0 = tensor(x);
  for (int j = 0; j < n; ++j) {
    double acc = 0.0;
    for (int a = 0; a < n; ++a) acc += dT[a](a, j) / lambda + n * m[a] * t0(a, j);
    div[j] = acc - m[j] * t0.trace();
  }
  return div;
}

}  // namespace khess
