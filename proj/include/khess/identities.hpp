#pragma once

#include <nlohmann/json.hpp>

#include <stdexcept>
#include <string>
#include <vector>

#include "khess/fields.hpp"
#include "khess/quadrature.hpp"
#include "khess/radial.hpp"

namespace khess {

/// One verified identity: both sides, the normalized residual
/// |lhs - rhs| / (1 + |lhs| + |rhs|), and the inputs it was computed from.
struct IdentityReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  nlohmann::json params;
};

IdentityReport make_report(std::string name, double lhs, double rhs, double tolerance,
                           nlohmann::json params);

/// An identity's hypotheses failed on the given inputs; the identity itself
/// was not evaluated. Distinct from an identity failure.
class PreconditionError : public std::runtime_error {
 public:
  PreconditionError(std::string check, const std::string& detail)
      : std::runtime_error(check + ": " + detail), check_(std::move(check)) {}
  const std::string& check() const { return check_; }

 private:
  std::string check_;
};

/// Default identity tolerances: 1e-8 (dim 2), 1e-6 (dim 3), 1e-5 for
/// quantities built from third-order finite differences.
struct Tolerances {
  static double identity(int dim) { return dim == 2 ? 1e-8 : 1e-6; }
  static constexpr double third_order = 1e-5;
};

/// int_bnd H_k/C(n-1,k) (x.gamma) = int_bnd H_{k-1}/C(n-1,k-1), 1 <= k <= n-1.
IdentityReport minkowski_euclidean(const Domain& domain, int k, const QuadMesh& mesh,
                                   double tolerance = -1.0);

/// int_bnd H_k/C(n-1,k) V_gamma = int_bnd H_{k-1}/C(n-1,k-1) V.
IdentityReport minkowski_hyperbolic(const Domain& domain, int k, const QuadMesh& mesh,
                                    double tolerance = -1.0);

/// Rellich-Pohozaev identity for sigma_k(D^2 u) = C(n,k), u = 0 on the boundary:
///   1/2 int_bnd sigma_k^{ij} x_j gamma_i |Du|^2
///     = -k C(n,k) int u + (n-k+1)/2 int sigma_{k-1} |Du|^2.
/// Preconditions (u = 0 on boundary nodes, sigma_k(W) = C(n,k) on volume
/// nodes) are checked and raise PreconditionError when violated.
IdentityReport pohozaev_euclidean(const ScalarField& u, int k, const QuadMesh& mesh,
                                  double tolerance = -1.0);

/// Hyperbolic counterpart with weight V = cosh r and W = D^2 u - u I:
///   1/2 int_bnd sigma_k^{ij}(W) V_i gamma_j |Du|^2
///     = -(n-k+1)/2 int sigma_{k-1}(W) u^2 V - k C(n,k) int u V
///       + (n-k+1)/2 int sigma_{k-1}(W) |Du|^2 V.
IdentityReport pohozaev_hyperbolic(const ScalarField& u, int k, const QuadMesh& mesh,
                                   double tolerance = -1.0);

/// Max scale-adjusted boundary-node residual of
///   sigma_k^{ij}(W) x_j gamma_i |Du|^2 = sigma_k^{ij}(W) u_i u_j (x.gamma)
/// (Euclidean; V_j and V_gamma in the hyperbolic case). Requires the
/// overdetermined data u = 0, |Du| = c0 on the boundary.
double boundary_reduction(const ScalarField& u, double c0, int k, const QuadMesh& mesh);

/// int_bnd sigma_k^{ij}(W) u_i u_j (x.gamma | V_gamma)
///   = (n-k+1) c0^2 int sigma_{k-1}(W) (1 | V).
/// k >= 2 evaluates the left side through the level-set curvature form
/// H_{k-1} |Du|^{k+1}; k = 1 uses sigma_1^{ij} = delta directly.
IdentityReport boundary_to_volume(const ScalarField& u, double c0, int k, const QuadMesh& mesh,
                                  double tolerance = -1.0);

/// Equality-case checks for an exact solution: (a) P <= c0^2 with equality,
/// (b) the assembled integral identity
///   k C(n,k) int u (V) = (n-k+1)/2 int sigma_{k-1}(W) (V) (|Du|^2 (- u^2) - c0^2),
/// (c) sigma_{k-1}(W) = C(n,k-1) pointwise. (a) and (c) ride along in params.
IdentityReport equality_chain(const RadialSolution& sol, int k, const QuadMesh& mesh,
                              double tolerance = -1.0);

/// Pure-calculus divergence steps, valid for any smooth u (no solution
/// property): each step compares a volume integral against its boundary
/// flux plus remainder. Two steps in the Euclidean case, three hyperbolic.
std::vector<IdentityReport> calculus_steps(const ScalarField& u, int k, const QuadMesh& mesh,
                                           double tolerance = -1.0);

}  // namespace khess
