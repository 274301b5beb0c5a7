#pragma once

#include <optional>
#include <vector>

#include "listflow/grid.hpp"

namespace listflow {

inline constexpr double kDefaultLambdaMin = 1e-8;

/// Γ^k_{ij}, stored once per unordered pair (i, j) so lower-index symmetry is exact.
class ChristoffelField {
 public:
  explicit ChristoffelField(const PeriodicGrid& grid);

  const PeriodicGrid& grid() const noexcept { return comps_.front().grid(); }
  int dim() const noexcept { return dim_; }

  const ScalarField& operator()(int k, int i, int j) const { return comps_[slot(k, i, j)]; }
  ScalarField& operator()(int k, int i, int j) { return comps_[slot(k, i, j)]; }

 private:
  std::size_t slot(int k, int i, int j) const {
    return static_cast<std::size_t>(k * SymTensorField::component_count(dim_) + SymTensorField::index(dim_, i, j));
  }

  int dim_;
  std::vector<ScalarField> comps_;
};

/// Throws DegenerationError if any node has smallest eigenvalue below `lambda_min`.
/// Returns the global smallest eigenvalue.
double validate_metric(const SymTensorField& h, double lambda_min = kDefaultLambdaMin);

/// Node-wise inverse of an SPD metric (indices up).
SymTensorField inverse_metric(const SymTensorField& h, double lambda_min = kDefaultLambdaMin);

/// dh[m](i, j) = ∂_m h_ij.
std::vector<SymTensorField> metric_derivatives(const SymTensorField& h, StencilOrder order);

ChristoffelField christoffel(const SymTensorField& h, const SymTensorField& h_inv, StencilOrder order);
ChristoffelField christoffel_from_derivatives(std::span<const SymTensorField> dh, const SymTensorField& h_inv);

struct RicciResult {
  SymTensorField ricci;
  ScalarField scalar;
  /// |Rm|^2, only defined for dim <= 3 where Ricci determines Rm.
  std::optional<ScalarField> riemann_norm_sq;
};

/// R_ij = ∂_k Γ^k_ij − ½(∂_i Γ^k_kj + ∂_j Γ^k_ki) + Γ^k_kl Γ^l_ij − Γ^k_il Γ^l_kj.
RicciResult ricci(const SymTensorField& h, const SymTensorField& h_inv, const ChristoffelField& gamma,
                  StencilOrder order);

struct ScalarDerivatives {
  VectorField du;         // ∂_i u
  VectorField grad;       // ∇^i u
  ScalarField grad_norm_sq;
  SymTensorField hessian;  // (D²u)_ij
  ScalarField hessian_norm_sq;
  ScalarField laplacian;
};

ScalarDerivatives scalar_ops(const ScalarField& u, const SymTensorField& h, const SymTensorField& h_inv,
                             const ChristoffelField& gamma, StencilOrder order);

/// h^{ij}(∂_i∂_j f − Γ^k_ij ∂_k f).
ScalarField laplace_beltrami(const ScalarField& f, const SymTensorField& h_inv, const ChristoffelField& gamma,
                             StencilOrder order);

/// h^{ik} h^{jl} T_ij T_kl per node.
ScalarField tensor_norm_sq(const SymTensorField& t, const SymTensorField& h_inv);

/// Largest |eigenvalue| of h^{-1}T per node.
ScalarField operator_norm(const SymTensorField& t, const SymTensorField& h);

/// Everything derived from one (h, u) snapshot.
struct GeometryCache {
  StencilOrder order;
  double metric_min_eigenvalue;
  SymTensorField h_inv;
  std::vector<SymTensorField> metric_derivs;
  ChristoffelField christoffel;
  SymTensorField ricci;
  ScalarField scalar_curv;
  ScalarField riemann_norm_sq;
  VectorField du;
  VectorField grad_u;
  ScalarField grad_u_norm_sq;
  SymTensorField hess_u;
  ScalarField hess_u_norm_sq;
  ScalarField lap_u;
  SymTensorField s_tensor;  // R_ij − ∂_i u ∂_j u
  ScalarField s_scalar;     // R − |∇u|²
};

/// Base manifolds of dimension 2 or 3 only.
GeometryCache build_cache(const SymTensorField& h, const ScalarField& u, StencilOrder order,
                          double lambda_min = kDefaultLambdaMin);

}  // namespace listflow
