#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "khess/domain.hpp"

namespace khess {

struct Resolution {
  int n_r = 0;
  int n_theta = 0;
  int n_phi = 0;  // unused in dim 2

  static Resolution defaults(int dim) {
    return dim == 2 ? Resolution{64, 256, 0} : Resolution{48, 96, 192};
  }
  Resolution doubled() const { return {2 * n_r, 2 * n_theta, 2 * n_phi}; }
};

/// Gauss-Legendre rule on [-1, 1] via the Golub-Welsch eigenvalue method.
void gauss_legendre(int n, Eigen::VectorXd& nodes, Eigen::VectorXd& weights);

/// Paired volume and boundary quadrature for a star-shaped domain. Volume
/// weights already contain the metric volume density (r^{n-1} Euclidean,
/// sinh^{n-1} r hyperbolic); boundary weights the induced measure. Normals
/// are frame components; curvatures are the n-1 boundary principal
/// curvatures per node.
struct QuadMesh {
  int dim = 0;
  Space space = Space::Euclidean;
  Resolution res;

  Eigen::MatrixXd vol_nodes;  // dim x Nv, chart coordinates
  Eigen::VectorXd vol_weights;

  Eigen::MatrixXd bnd_nodes;  // dim x Nb
  Eigen::VectorXd bnd_weights;
  Eigen::MatrixXd bnd_normals;     // dim x Nb
  Eigen::MatrixXd bnd_curvatures;  // (dim-1) x Nb

  Eigen::Index volume_size() const { return vol_weights.size(); }
  Eigen::Index boundary_size() const { return bnd_weights.size(); }
};

QuadMesh build_mesh(const Domain& domain, const Resolution& res);
inline QuadMesh build_mesh(const Domain& domain) {
  return build_mesh(domain, Resolution::defaults(domain.dim()));
}

namespace detail {
/// Deterministic pairwise sum, independent of accumulation chunking.
double pairwise_sum(const std::vector<double>& v);

[[noreturn]] void throw_nonfinite(const char* where, const Eigen::VectorXd& node);
}  // namespace detail

/// sum_i w_i f(x_i) over the volume nodes. f must be finite at every node.
template <typename F>
double integrate_volume(const QuadMesh& mesh, F&& f) {
  std::vector<double> terms(static_cast<size_t>(mesh.volume_size()));
  for (Eigen::Index i = 0; i < mesh.volume_size(); ++i) {
    const double v = f(mesh.vol_nodes.col(i));
    if (!std::isfinite(v)) detail::throw_nonfinite("integrate_volume", mesh.vol_nodes.col(i));
    terms[static_cast<size_t>(i)] = mesh.vol_weights[i] * v;
  }
  return detail::pairwise_sum(terms);
}

/// sum_b w_b f(b) over boundary nodes; f receives the node index and chart
/// point (normals and curvatures are available from the mesh by index).
template <typename F>
double integrate_boundary(const QuadMesh& mesh, F&& f) {
  std::vector<double> terms(static_cast<size_t>(mesh.boundary_size()));
  for (Eigen::Index i = 0; i < mesh.boundary_size(); ++i) {
    const double v = f(i, mesh.bnd_nodes.col(i));
    if (!std::isfinite(v)) detail::throw_nonfinite("integrate_boundary", mesh.bnd_nodes.col(i));
    terms[static_cast<size_t>(i)] = mesh.bnd_weights[i] * v;
  }
  return detail::pairwise_sum(terms);
}

}  // namespace khess
