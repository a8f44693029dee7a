#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace khess {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// C(n,k) as a double; exact for every n we handle.
inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

/// sigma_k of explicitly given values (e.g. principal curvatures), by the
/// one-value-at-a-time polynomial accumulation.
inline double elementary_symmetric(const Eigen::VectorXd& values, int k) {
  const int n = static_cast<int>(values.size());
  if (k < 0 || k > n) return 0.0;
  std::vector<double> e(static_cast<size_t>(k) + 1, 0.0);
  e[0] = 1.0;
  for (int i = 0; i < n; ++i)
    for (int j = std::min(k, i + 1); j >= 1; --j) e[j] += values[i] * e[j - 1];
  return e[k];
}

/// Largest entrywise asymmetry |a_ij - a_ji|.
template <typename Derived>
typename Derived::Scalar asymmetry(const Eigen::MatrixBase<Derived>& a) {
  return (a - a.transpose()).cwiseAbs().maxCoeff();
}

template <typename Derived>
void require_symmetric(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  if (a.rows() != a.cols() || a.rows() < 1)
    throw std::invalid_argument("symfun: matrix must be square with dim >= 1");
  const Scalar scale = std::max(Scalar(1), a.cwiseAbs().maxCoeff());
  if (asymmetry(a) > Scalar(1e-12) * scale)
    throw std::invalid_argument("symfun: matrix is not symmetric (asymmetry beyond 1e-12)");
}

/// Tolerance scale for quantities of degree k in the matrix: 1 + ||A||^k.
template <typename Derived>
double sigma_scale(const Eigen::MatrixBase<Derived>& a, int k) {
  return 1.0 + std::pow(static_cast<double>(a.norm()), k);
}

/// All elementary symmetric functions sigma_0..sigma_n of the eigenvalues,
/// by symmetric eigendecomposition followed by Newton-identity accumulation
///   m e_m = sum_{i=1..m} (-1)^{i-1} e_{m-i} p_i,   p_i = sum_j lambda_j^i.
template <typename Derived>
VectorX<typename Derived::Scalar> sigma_all(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  require_symmetric(a);
  const int n = static_cast<int>(a.rows());

  Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> es(a, Eigen::EigenvaluesOnly);
  const VectorX<Scalar> lam = es.eigenvalues();

  VectorX<Scalar> pow_sum(n + 1);  // p_0 unused
  VectorX<Scalar> cur = VectorX<Scalar>::Ones(n);
  for (int i = 1; i <= n; ++i) {
    cur = cur.cwiseProduct(lam);
    pow_sum[i] = cur.sum();
  }

  VectorX<Scalar> e = VectorX<Scalar>::Zero(n + 1);
  e[0] = Scalar(1);
  for (int m = 1; m <= n; ++m) {
    Scalar acc = Scalar(0);
    Scalar sign = Scalar(1);
    for (int i = 1; i <= m; ++i) {
      acc += sign * e[m - i] * pow_sum[i];
      sign = -sign;
    }
    e[m] = acc / Scalar(m);
  }
  return e;
}

/// sigma_k of the eigenvalues of a symmetric matrix; sigma_0 = 1.
template <typename Derived>
typename Derived::Scalar sigma(const Eigen::MatrixBase<Derived>& a, int k) {
  const int n = static_cast<int>(a.rows());
  if (k < 0 || k > n)
    throw std::invalid_argument("symfun: sigma_k needs 0 <= k <= n, got k=" + std::to_string(k));
  return sigma_all(a)[k];
}

/// The matrix of partial derivatives d sigma_k / d a_ij with all n^2 entries
/// treated as independent, via the recursion
///   sigma_k^{ij}(A) = sigma_{k-1}(A) delta_ij - sum_l sigma_{k-1}^{il}(A) a_jl
/// with base sigma_1^{ij} = delta_ij.
template <typename Derived>
MatrixX<typename Derived::Scalar> sigma_gradient(const Eigen::MatrixBase<Derived>& a, int k) {
  using Scalar = typename Derived::Scalar;
  const int n = static_cast<int>(a.rows());
  if (k < 1 || k > n)
    throw std::invalid_argument("symfun: sigma_gradient needs 1 <= k <= n, got k=" + std::to_string(k));
  const VectorX<Scalar> e = sigma_all(a);

  MatrixX<Scalar> g = MatrixX<Scalar>::Identity(n, n);
  for (int m = 2; m <= k; ++m)
    g = (e[m - 1] * MatrixX<Scalar>::Identity(n, n) - g * a.transpose()).eval();
  return g;
}

struct ConeReport {
  int k = 0;
  Eigen::VectorXd sigma_values;  // sigma_1 .. sigma_k
  bool in_cone = false;
};

/// Garding cone membership: A in Gamma_k iff sigma_1(A),...,sigma_k(A) > 0.
template <typename Derived>
ConeReport cone_membership(const Eigen::MatrixBase<Derived>& a, int k) {
  const int n = static_cast<int>(a.rows());
  if (k < 1 || k > n)
    throw std::invalid_argument("symfun: cone_membership needs 1 <= k <= n");
  const auto e = sigma_all(a);
  ConeReport rep;
  rep.k = k;
  rep.sigma_values.resize(k);
  rep.in_cone = true;
  for (int j = 1; j <= k; ++j) {
    rep.sigma_values[j - 1] = static_cast<double>(e[j]);
    if (!(e[j] > 0)) rep.in_cone = false;
  }
  return rep;
}

struct TraceResiduals {
  double pairing = 0.0;         // |k sigma_k - sum_ij sigma_k^{ij} a_ij|
  double trace = 0.0;           // |(n-k+1) sigma_{k-1} - sum_i sigma_k^{ii}|
  double square_pairing = 0.0;  // |sum_ij sigma_k^{ij} (A^2)_ij - (sigma_1 sigma_k - (k+1) sigma_{k+1})|
};

/// Residuals of the three classical trace identities. For k = n the third
/// identity is evaluated with sigma_{n+1} = 0.
template <typename Derived>
TraceResiduals trace_identities(const Eigen::MatrixBase<Derived>& a, int k) {
  using Scalar = typename Derived::Scalar;
  const int n = static_cast<int>(a.rows());
  if (k < 1 || k > n)
    throw std::invalid_argument("symfun: trace_identities needs 1 <= k <= n");
  const VectorX<Scalar> e = sigma_all(a);
  const MatrixX<Scalar> g = sigma_gradient(a, k);

  TraceResiduals r;
  r.pairing = std::abs(static_cast<double>(Scalar(k) * e[k] - (g.cwiseProduct(a)).sum()));
  r.trace = std::abs(static_cast<double>(Scalar(n - k + 1) * e[k - 1] - g.trace()));
  const MatrixX<Scalar> a2 = a * a;
  const Scalar sig_next = (k + 1 <= n) ? e[k + 1] : Scalar(0);
  r.square_pairing = std::abs(static_cast<double>(
      (g.cwiseProduct(a2)).sum() - (e[1] * e[k] - Scalar(k + 1) * sig_next)));
  return r;
}

struct InequalitySlacks {
  double newton = 0.0;     // k(n-k) sigma_k^2 - (n-k+1)(k+1) sigma_{k-1} sigma_{k+1}
  double maclaurin = 0.0;  // min_l (sigma_l/C_n^l)^{1/l} - (sigma_k/C_n^k)^{1/k}
  double quotient = 0.0;   // min_l of the normalized-ratio monotonicity slack
};

/// Slacks of the Newton, MacLaurin and quotient inequalities. MacLaurin and
/// quotient slacks require A in Gamma_k and minimize over l = 1..k-1; both
/// are zero by convention at k = 1. All three vanish when the eigenvalues
/// are equal.
template <typename Derived>
InequalitySlacks classical_inequalities(const Eigen::MatrixBase<Derived>& a, int k) {
  using Scalar = typename Derived::Scalar;
  const int n = static_cast<int>(a.rows());
  if (k < 1 || k > n)
    throw std::invalid_argument("symfun: classical_inequalities needs 1 <= k <= n");
  const VectorX<Scalar> e = sigma_all(a);

  InequalitySlacks s;
  if (k <= n - 1) {
    s.newton = static_cast<double>(Scalar(k * (n - k)) * e[k] * e[k] -
                                   Scalar((n - k + 1) * (k + 1)) * e[k - 1] * e[k + 1]);
  } else {
    s.newton = 0.0;  // Newton compares sigma_{k-1}, sigma_k, sigma_{k+1}; void at k = n
  }

  ConeReport cone = cone_membership(a, k);
  if (!cone.in_cone) {
    throw std::domain_error(
        "symfun: MacLaurin/quotient slacks need A in Gamma_" + std::to_string(k) +
        "; first nonpositive sigma at j with sigma_j = " +
        std::to_string(*std::min_element(cone.sigma_values.data(),
                                         cone.sigma_values.data() + cone.sigma_values.size())));
  }

  auto normalized = [&](int j) { return static_cast<double>(e[j]) / binomial(n, j); };

  double mac = std::numeric_limits<double>::infinity();
  double quo = std::numeric_limits<double>::infinity();
  const double ratio_k = std::pow(normalized(k), 1.0 / k);
  const double quot_k = normalized(k) / normalized(k - 1);  // sigma_0 / C_n^0 = 1
  for (int l = 1; l < k; ++l) {
    mac = std::min(mac, std::pow(normalized(l), 1.0 / l) - ratio_k);
    quo = std::min(quo, normalized(l) / normalized(l - 1) - quot_k);
  }
  s.maclaurin = (k == 1) ? 0.0 : mac;
  s.quotient = (k == 1) ? 0.0 : quo;
  return s;
}

}  // namespace khess
