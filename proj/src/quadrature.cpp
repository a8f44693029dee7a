#include "khess/quadrature.hpp"

#include <cmath>
#include <functional>

namespace khess {

void gauss_legendre(int n, Eigen::VectorXd& nodes, Eigen::VectorXd& weights) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  // Jacobi matrix of the Legendre recurrence; eigenvalues are the nodes and
  // the squared first eigenvector components give the weights.
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) {
    const double b = i / std::sqrt(4.0 * i * i - 1.0);
    jacobi(i, i - 1) = jacobi(i - 1, i) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
  nodes = es.eigenvalues();
  weights.resize(n);
  for (int i = 0; i < n; ++i) {
    const double v = es.eigenvectors()(0, i);
    weights[i] = 2.0 * v * v;
  }
}

namespace detail {

double pairwise_sum(const std::vector<double>& v) {
  // Fixed-order recursive halving; base case small enough to stay cheap.
  std::function<double(size_t, size_t)> sum = [&](size_t lo, size_t hi) -> double {
    if (hi - lo <= 8) {
      double acc = 0.0;
      for (size_t i = lo; i < hi; ++i) acc += v[i];
      return acc;
    }
    const size_t mid = lo + (hi - lo) / 2;
    return sum(lo, mid) + sum(mid, hi);
  };
  return v.empty() ? 0.0 : sum(0, v.size());
}

void throw_nonfinite(const char* where, const Eigen::VectorXd& node) {
  std::string msg = std::string(where) + ": non-finite integrand at node (";
  for (Eigen::Index i = 0; i < node.size(); ++i)
    msg += (i ? ", " : "") + std::to_string(node[i]);
  throw std::domain_error(msg + ")");
}

}  // namespace detail

namespace {

double metric_density(Space space, int dim, double r) {
  const double base = (space == Space::Hyperbolic) ? std::sinh(r) : r;
  return dim == 2 ? base : base * base;
}

}  // namespace

QuadMesh build_mesh(const Domain& domain, const Resolution& res) {
  const int dim = domain.dim();
  if (res.n_r < 8 || res.n_theta < 8 || (dim == 3 && res.n_phi < 8))
    throw std::invalid_argument("build_mesh: resolution must be >= 8 per axis");

  QuadMesh mesh;
  mesh.dim = dim;
  mesh.space = domain.space();
  mesh.res = res;
  const bool hyper = domain.space() == Space::Hyperbolic;

  Eigen::VectorXd gl_nodes, gl_weights;
  gauss_legendre(res.n_r, gl_nodes, gl_weights);

  // Angular rule over directions: trapezoid (dim 2) or Gauss-Legendre in
  // cos(theta) x trapezoid in phi (dim 3), spectrally accurate for smooth
  // integrands on the circle/sphere.
  std::vector<Eigen::VectorXd> dirs;
  std::vector<double> dir_weights;
  if (dim == 2) {
    for (int j = 0; j < res.n_theta; ++j) {
      const double t = 2.0 * M_PI * j / res.n_theta;
      dirs.push_back(Eigen::Vector2d(std::cos(t), std::sin(t)));
      dir_weights.push_back(2.0 * M_PI / res.n_theta);
    }
  } else {
    Eigen::VectorXd cu, cw;
    gauss_legendre(res.n_theta, cu, cw);
    for (int i = 0; i < res.n_theta; ++i) {
      const double ct = cu[i], st = std::sqrt(1.0 - ct * ct);
      for (int j = 0; j < res.n_phi; ++j) {
        const double p = 2.0 * M_PI * j / res.n_phi;
        dirs.push_back(Eigen::Vector3d(st * std::cos(p), st * std::sin(p), ct));
        dir_weights.push_back(cw[i] * 2.0 * M_PI / res.n_phi);
      }
    }
  }

  const Eigen::Index nv = static_cast<Eigen::Index>(dirs.size()) * res.n_r;
  mesh.vol_nodes.resize(dim, nv);
  mesh.vol_weights.resize(nv);
  Eigen::Index col = 0;
  for (size_t d = 0; d < dirs.size(); ++d) {
    const double rho = domain.radius(dirs[d]);
    for (int q = 0; q < res.n_r; ++q, ++col) {
      const double r = 0.5 * rho * (gl_nodes[q] + 1.0);
      const double wr = 0.5 * rho * gl_weights[q];
      const double chart_r = hyper ? chart_radius(r) : r;
      mesh.vol_nodes.col(col) = chart_r * dirs[d];
      mesh.vol_weights[col] = wr * metric_density(domain.space(), dim, r) * dir_weights[d];
    }
  }

  // Boundary rule reuses the angular grids as boundary parameters.
  if (dim == 2) {
    const Eigen::Index nb = res.n_theta;
    mesh.bnd_nodes.resize(dim, nb);
    mesh.bnd_weights.resize(nb);
    mesh.bnd_normals.resize(dim, nb);
    mesh.bnd_curvatures.resize(dim - 1, nb);
    for (Eigen::Index j = 0; j < nb; ++j) {
      Eigen::VectorXd param(1);
      param[0] = 2.0 * M_PI * static_cast<double>(j) / res.n_theta;
      const BoundaryPoint bp = boundary_shape(domain, param);
      mesh.bnd_nodes.col(j) = bp.chart_point;
      mesh.bnd_normals.col(j) = bp.normal;
      mesh.bnd_curvatures.col(j) = bp.principal_curvatures;
      mesh.bnd_weights[j] = bp.measure_density * 2.0 * M_PI / res.n_theta;
    }
  } else {
    Eigen::VectorXd cu, cw;
    gauss_legendre(res.n_theta, cu, cw);
    const Eigen::Index nb = static_cast<Eigen::Index>(res.n_theta) * res.n_phi;
    mesh.bnd_nodes.resize(dim, nb);
    mesh.bnd_weights.resize(nb);
    mesh.bnd_normals.resize(dim, nb);
    mesh.bnd_curvatures.resize(dim - 1, nb);
    Eigen::Index b = 0;
    for (int i = 0; i < res.n_theta; ++i) {
      const double theta = std::acos(cu[i]);
      // The cos(theta) rule integrates sin(theta) dtheta dphi; divide the
      // parametric area density by sin(theta) to pair with it.
      const double st = std::sin(theta);
      for (int j = 0; j < res.n_phi; ++j, ++b) {
        Eigen::VectorXd param(2);
        param << theta, 2.0 * M_PI * j / res.n_phi;
        const BoundaryPoint bp = boundary_shape(domain, param);
        mesh.bnd_nodes.col(b) = bp.chart_point;
        mesh.bnd_normals.col(b) = bp.normal;
        mesh.bnd_curvatures.col(b) = bp.principal_curvatures;
        mesh.bnd_weights[b] = (bp.measure_density / st) * cw[i] * 2.0 * M_PI / res.n_phi;
      }
    }
  }

  if ((mesh.vol_weights.array() <= 0.0).any() || (mesh.bnd_weights.array() <= 0.0).any())
    throw std::logic_error("build_mesh: nonpositive quadrature weight");
  return mesh;
}

}  // namespace khess
