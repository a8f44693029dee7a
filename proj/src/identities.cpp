#include "khess/identities.hpp"

#include <cmath>
#include <limits>

namespace khess {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using nlohmann::json;

double pick(double tolerance, int dim) {
  return tolerance > 0.0 ? tolerance : Tolerances::identity(dim);
}

json mesh_params(const QuadMesh& mesh) {
  return json{{"space", to_string(mesh.space)},
              {"dim", mesh.dim},
              {"n_r", mesh.res.n_r},
              {"n_theta", mesh.res.n_theta},
              {"n_phi", mesh.res.n_phi}};
}

// Everything the identity integrands need at one node, evaluated once.
struct NodeData {
  FrameJet jet;
  MatrixXd w;        // operator matrix
  VectorXd sigmas;   // sigma_0..sigma_n of w
  double v = 1.0;    // potential value (cosh r | |x|^2/2 Euclidean)
  VectorXd v_grad;   // frame gradient of the potential (grad cosh r | x)
};

NodeData node_data(const ScalarField& u, const VectorXd& x) {
  NodeData d;
  d.jet = covariant_jet(u, x);
  d.w = operator_matrix(u.space(), d.jet);
  d.sigmas = sigma_all(d.w);
  if (u.space() == Space::Hyperbolic) {
    const double s2 = x.squaredNorm(), w = 1.0 - s2;
    d.v = (1.0 + s2) / w;
    d.v_grad = 2.0 * x / w;  // lambda^{-1} * 4x/w^2
  } else {
    d.v = 0.5 * x.squaredNorm();
    d.v_grad = x;
  }
  return d;
}

// Fail the run (not the identity) when a hypothesis does not hold.
void require(bool ok, const char* check, const std::string& detail) {
  if (!ok) throw PreconditionError(check, detail);
}

void check_dirichlet(const ScalarField& u, const QuadMesh& mesh, double tol) {
  double sup = 0.0;
  for (Eigen::Index i = 0; i < mesh.boundary_size(); ++i)
    sup = std::max(sup, std::abs(u(mesh.bnd_nodes.col(i))));
  require(sup <= tol, "dirichlet-data",
          "sup |u| on boundary nodes = " + std::to_string(sup) + " > " + std::to_string(tol));
}

void check_neumann(const ScalarField& u, double c0, const QuadMesh& mesh, double tol) {
  double dev = 0.0;
  for (Eigen::Index i = 0; i < mesh.boundary_size(); ++i) {
    const FrameJet jet = covariant_jet(u, mesh.bnd_nodes.col(i));
    dev = std::max(dev, std::abs(jet.grad_norm - c0));
  }
  require(dev <= tol, "neumann-data",
          "sup ||Du| - c0| on boundary nodes = " + std::to_string(dev));
}

}  // namespace

IdentityReport make_report(std::string name, double lhs, double rhs, double tolerance,
                           json params) {
  IdentityReport rep;
  rep.name = std::move(name);
  rep.lhs = lhs;
  rep.rhs = rhs;
  rep.residual = std::abs(lhs - rhs) / (1.0 + std::abs(lhs) + std::abs(rhs));
  rep.tolerance = tolerance;
  rep.pass = rep.residual <= tolerance;
  rep.params = std::move(params);
  return rep;
}

namespace {

IdentityReport minkowski(const char* name, Space expected, const Domain& domain, int k,
                         const QuadMesh& mesh, double tolerance) {
  const int n = mesh.dim;
  if (domain.space() != expected || mesh.space != expected)
    throw std::invalid_argument(std::string(name) + ": use the variant matching the space");
  if (k < 1 || k > n - 1)
    throw std::invalid_argument("minkowski: need 1 <= k <= n-1");
  const bool hyper = expected == Space::Hyperbolic;

  auto weight = [&](Eigen::Index i, const VectorXd& x, bool outer) {
    // outer: x.gamma resp. V_gamma; inner: 1 resp. V.
    if (!hyper) return outer ? x.dot(mesh.bnd_normals.col(i)) : 1.0;
    const double s2 = x.squaredNorm(), w = 1.0 - s2;
    return outer ? (2.0 * x / w).dot(mesh.bnd_normals.col(i)) : (1.0 + s2) / w;
  };
  const double lhs = integrate_boundary(mesh, [&](Eigen::Index i, const VectorXd& x) {
    return elementary_symmetric(mesh.bnd_curvatures.col(i), k) / binomial(n - 1, k) *
           weight(i, x, true);
  });
  const double rhs = integrate_boundary(mesh, [&](Eigen::Index i, const VectorXd& x) {
    return elementary_symmetric(mesh.bnd_curvatures.col(i), k - 1) / binomial(n - 1, k - 1) *
           weight(i, x, false);
  });
  json params = mesh_params(mesh);
  params["k"] = k;
  return make_report(name, lhs, rhs, pick(tolerance, n), std::move(params));
}

void check_equation_dev(double dev, int n, int k) {
  const double target = binomial(n, k);
  require(dev <= 1e-8 * (1.0 + target), "hessian-equation",
          "sup |sigma_k(W) - C(n,k)| on volume nodes = " + std::to_string(dev));
}

}  // namespace

IdentityReport minkowski_euclidean(const Domain& domain, int k, const QuadMesh& mesh,
                                   double tolerance) {
  return minkowski("minkowski-euclidean", Space::Euclidean, domain, k, mesh, tolerance);
}

IdentityReport minkowski_hyperbolic(const Domain& domain, int k, const QuadMesh& mesh,
                                    double tolerance) {
  return minkowski("minkowski-hyperbolic", Space::Hyperbolic, domain, k, mesh, tolerance);
}

IdentityReport pohozaev_euclidean(const ScalarField& u, int k, const QuadMesh& mesh,
                                  double tolerance) {
  const int n = mesh.dim;
  if (u.space() != Space::Euclidean || mesh.space != Space::Euclidean)
    throw std::invalid_argument("pohozaev_euclidean: needs Euclidean field and mesh");
  check_dirichlet(u, mesh, 1e-9);

  std::vector<double> t_u(mesh.volume_size()), t_grad(mesh.volume_size());
  double eq_dev = 0.0;
  for (Eigen::Index i = 0; i < mesh.volume_size(); ++i) {
    const NodeData d = node_data(u, mesh.vol_nodes.col(i));
    eq_dev = std::max(eq_dev, std::abs(d.sigmas[k] - binomial(n, k)));
    t_u[i] = mesh.vol_weights[i] * d.jet.value;
    t_grad[i] = mesh.vol_weights[i] * d.sigmas[k - 1] * d.jet.grad_norm * d.jet.grad_norm;
  }
  check_equation_dev(eq_dev, n, k);

  const double lhs = integrate_boundary(mesh, [&](Eigen::Index i, const VectorXd& x) {
    const NodeData d = node_data(u, x);
    const MatrixXd s = sigma_gradient(d.w, k);
    return 0.5 * mesh.bnd_normals.col(i).dot(s * x) * d.jet.grad_norm * d.jet.grad_norm;
  });
  const double rhs = -k * binomial(n, k) * detail::pairwise_sum(t_u) +
                     0.5 * (n - k + 1) * detail::pairwise_sum(t_grad);
  json params = mesh_params(mesh);
  params["k"] = k;
  return make_report("pohozaev-euclidean", lhs, rhs, pick(tolerance, n), std::move(params));
}

IdentityReport pohozaev_hyperbolic(const ScalarField& u, int k, const QuadMesh& mesh,
                                   double tolerance) {
  const int n = mesh.dim;
  if (u.space() != Space::Hyperbolic || mesh.space != Space::Hyperbolic)
    throw std::invalid_argument("pohozaev_hyperbolic: needs hyperbolic field and mesh");
  check_dirichlet(u, mesh, 1e-9);

  std::vector<double> t_u2v(mesh.volume_size()), t_uv(mesh.volume_size()),
      t_grad(mesh.volume_size());
  double eq_dev = 0.0;
  for (Eigen::Index i = 0; i < mesh.volume_size(); ++i) {
    const NodeData d = node_data(u, mesh.vol_nodes.col(i));
    eq_dev = std::max(eq_dev, std::abs(d.sigmas[k] - binomial(n, k)));
    const double uval = d.jet.value;
    t_u2v[i] = mesh.vol_weights[i] * d.sigmas[k - 1] * uval * uval * d.v;
    t_uv[i] = mesh.vol_weights[i] * uval * d.v;
    t_grad[i] =
        mesh.vol_weights[i] * d.sigmas[k - 1] * d.jet.grad_norm * d.jet.grad_norm * d.v;
  }
  check_equation_dev(eq_dev, n, k);

  const double lhs = integrate_boundary(mesh, [&](Eigen::Index i, const VectorXd& x) {
    const NodeData d = node_data(u, x);
    const MatrixXd s = sigma_gradient(d.w, k);
    return 0.5 * d.v_grad.dot(s * mesh.bnd_normals.col(i)) * d.jet.grad_norm * d.jet.grad_norm;
  });
  const double rhs = -0.5 * (n - k + 1) * detail::pairwise_sum(t_u2v) -
                     k * binomial(n, k) * detail::pairwise_sum(t_uv) +
                     0.5 * (n - k + 1) * detail::pairwise_sum(t_grad);
  json params = mesh_params(mesh);
  params["k"] = k;
  return make_report("pohozaev-hyperbolic", lhs, rhs, pick(tolerance, n), std::move(params));
}

double boundary_reduction(const ScalarField& u, double c0, int k, const QuadMesh& mesh) {
  check_dirichlet(u, mesh, 1e-8);
  check_neumann(u, c0, mesh, 1e-8);
  const bool hyper = mesh.space == Space::Hyperbolic;
  double worst = 0.0;
  for (Eigen::Index i = 0; i < mesh.boundary_size(); ++i) {
    const VectorXd x = mesh.bnd_nodes.col(i);
    const NodeData d = node_data(u, x);
    const MatrixXd s = sigma_gradient(d.w, k);
    const VectorXd weight_grad = hyper ? d.v_grad : VectorXd(x);
    const double g2 = d.jet.grad_norm * d.jet.grad_norm;
    const double a = mesh.bnd_normals.col(i).dot(s * weight_grad) * g2;
    const double b =
        d.jet.grad.dot(s * d.jet.grad) * weight_grad.dot(mesh.bnd_normals.col(i));
    worst = std::max(worst, std::abs(a - b) / (1.0 + std::abs(a) + std::abs(b)));
  }
  return worst;
}

IdentityReport boundary_to_volume(const ScalarField& u, double c0, int k, const QuadMesh& mesh,
                                  double tolerance) {
  const int n = mesh.dim;
  check_dirichlet(u, mesh, 1e-8);
  check_neumann(u, c0, mesh, 1e-8);
  const bool hyper = mesh.space == Space::Hyperbolic;

  const double lhs = integrate_boundary(mesh, [&](Eigen::Index i, const VectorXd& x) {
    const NodeData d = node_data(u, x);
    const double weight =
        hyper ? d.v_grad.dot(mesh.bnd_normals.col(i)) : x.dot(mesh.bnd_normals.col(i));
    if (k == 1) return d.jet.grad.squaredNorm() * weight;
    // Level-set curvature form of the integrand, via the mesh curvatures.
    const double hk1 = elementary_symmetric(mesh.bnd_curvatures.col(i), k - 1);
    return hk1 * std::pow(d.jet.grad_norm, k + 1) * weight;
  });

  std::vector<double> terms(mesh.volume_size());
  for (Eigen::Index i = 0; i < mesh.volume_size(); ++i) {
    const NodeData d = node_data(u, mesh.vol_nodes.col(i));
    terms[i] = mesh.vol_weights[i] * d.sigmas[k - 1] * (hyper ? d.v : 1.0);
  }
  const double rhs = (n - k + 1) * c0 * c0 * detail::pairwise_sum(terms);
  json params = mesh_params(mesh);
  params["k"] = k;
  params["c0"] = c0;
  return make_report("boundary-to-volume", lhs, rhs, pick(tolerance, n), std::move(params));
}

IdentityReport equality_chain(const RadialSolution& sol, int k, const QuadMesh& mesh,
                              double tolerance) {
  if (sol.kind() != RadialSolution::Kind::ClosedForm)
    throw std::invalid_argument("equality_chain: needs a closed-form solution");
  const int n = mesh.dim;
  const bool hyper = mesh.space == Space::Hyperbolic;
  const ScalarField u = sol.as_field();
  const double c0sq = sol.c0() * sol.c0();
  const double sigma_target = binomial(n, k - 1);

  double p_excess = -std::numeric_limits<double>::infinity();  // max P - c0^2
  double p_dev = 0.0;                                          // max |P - c0^2|
  double sigma_dev = 0.0;  // max |sigma_{k-1}(W) - C(n,k-1)|
  std::vector<double> t_lhs(mesh.volume_size()), t_rhs(mesh.volume_size());
  for (Eigen::Index i = 0; i < mesh.volume_size(); ++i) {
    const NodeData d = node_data(u, mesh.vol_nodes.col(i));
    const double uval = d.jet.value;
    const double g2 = d.jet.grad_norm * d.jet.grad_norm;
    const double p = hyper ? g2 - uval * uval - 2.0 * uval : g2 - 2.0 * uval;
    p_excess = std::max(p_excess, p - c0sq);
    p_dev = std::max(p_dev, std::abs(p - c0sq));
    sigma_dev = std::max(sigma_dev, std::abs(d.sigmas[k - 1] - sigma_target));
    const double vw = hyper ? d.v : 1.0;
    t_lhs[i] = mesh.vol_weights[i] * k * binomial(n, k) * uval * vw;
    t_rhs[i] = mesh.vol_weights[i] * 0.5 * (n - k + 1) * d.sigmas[k - 1] * vw *
               (g2 - (hyper ? uval * uval : 0.0) - c0sq);
  }
  const double lhs = detail::pairwise_sum(t_lhs);
  const double rhs = detail::pairwise_sum(t_rhs);

  json params = mesh_params(mesh);
  params["k"] = k;
  params["c0"] = sol.c0();
  params["p_max_excess"] = p_excess;
  params["p_max_deviation"] = p_dev;
  params["sigma_prev_max_deviation"] = sigma_dev;
  IdentityReport rep =
      make_report("equality-chain", lhs, rhs, pick(tolerance, n), std::move(params));
  rep.pass = rep.pass && p_dev <= 1e-9 && sigma_dev <= 1e-8;
  return rep;
}

std::vector<IdentityReport> calculus_steps(const ScalarField& u, int k, const QuadMesh& mesh,
                                           double tolerance) {
  const int n = mesh.dim;
  const double tol = pick(tolerance, n);
  const bool hyper = mesh.space == Space::Hyperbolic;
  json params = mesh_params(mesh);
  params["k"] = k;
  std::vector<IdentityReport> reports;

  // Shared flux factors on the boundary.
  auto flux = [&](auto&& integrand) { return integrate_boundary(mesh, integrand); };

  // Step 1: int_bnd sigma_k^{ij}(W) u_i gamma_j
  //           = int [ k sigma_k(W) + (n-k+1) u sigma_{k-1}(W) ]   (hyperbolic)
  //           = k int sigma_k(D^2 u)                               (Euclidean)
  {
    const double lhs = flux([&](Eigen::Index i, const VectorXd& x) {
      const NodeData d = node_data(u, x);
      return mesh.bnd_normals.col(i).dot(sigma_gradient(d.w, k) * d.jet.grad);
    });
    std::vector<double> terms(mesh.volume_size());
    for (Eigen::Index i = 0; i < mesh.volume_size(); ++i) {
      const NodeData d = node_data(u, mesh.vol_nodes.col(i));
      double val = k * d.sigmas[k];
      if (hyper) val += (n - k + 1) * d.jet.value * d.sigmas[k - 1];
      terms[i] = mesh.vol_weights[i] * val;
    }
    reports.push_back(make_report("calculus-sigma-flux", lhs,
                                  detail::pairwise_sum(terms), tol, params));
  }

  // Step 2: int sigma_k^{ij}(W) (|Du|^2)_i q_j
  //           = int_bnd sigma_k^{ij}(W) |Du|^2 q_j gamma_i
  //             - (n-k+1) int sigma_{k-1}(W) |Du|^2 (1 | V)
  // with q = position field (Euclidean) resp. q = DV (hyperbolic).
  {
    std::vector<double> terms(mesh.volume_size());
    for (Eigen::Index i = 0; i < mesh.volume_size(); ++i) {
      const NodeData d = node_data(u, mesh.vol_nodes.col(i));
      const MatrixXd s = sigma_gradient(d.w, k);
      const VectorXd grad_g2 = 2.0 * d.jet.hess * d.jet.grad;  // (|Du|^2)_i
      const double pairing = d.v_grad.dot(s * grad_g2);
      const double remainder =
          (n - k + 1) * d.sigmas[k - 1] * d.jet.grad.squaredNorm() * (hyper ? d.v : 1.0);
      terms[i] = mesh.vol_weights[i] * (pairing + remainder);
    }
    const double fluxval = flux([&](Eigen::Index i, const VectorXd& x) {
      const NodeData d = node_data(u, x);
      return d.jet.grad.squaredNorm() *
             mesh.bnd_normals.col(i).dot(sigma_gradient(d.w, k) * d.v_grad);
    });
    reports.push_back(make_report("calculus-gradient-pairing", detail::pairwise_sum(terms),
                                  fluxval, tol, params));
  }

  // Step 3 (hyperbolic only):
  //   2 int sigma_k^{ij}(W) u_j u V_i = int_bnd sigma_k^{ij}(W) u^2 V_i gamma_j
  //                                     - (n-k+1) int sigma_{k-1}(W) u^2 V
  if (hyper) {
    std::vector<double> terms(mesh.volume_size());
    for (Eigen::Index i = 0; i < mesh.volume_size(); ++i) {
      const NodeData d = node_data(u, mesh.vol_nodes.col(i));
      const MatrixXd s = sigma_gradient(d.w, k);
      const double pairing = 2.0 * d.jet.value * d.v_grad.dot(s * d.jet.grad);
      const double remainder =
          (n - k + 1) * d.sigmas[k - 1] * d.jet.value * d.jet.value * d.v;
      terms[i] = mesh.vol_weights[i] * (pairing + remainder);
    }
    const double fluxval = flux([&](Eigen::Index i, const VectorXd& x) {
      const NodeData d = node_data(u, x);
      return d.jet.value * d.jet.value *
             mesh.bnd_normals.col(i).dot(sigma_gradient(d.w, k) * d.v_grad);
    });
    reports.push_back(make_report("calculus-potential-pairing", detail::pairwise_sum(terms),
                                  fluxval, tol, params));
  }
  return reports;
}

}  // namespace khess
