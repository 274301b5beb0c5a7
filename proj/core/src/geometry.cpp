#include "listflow/geometry.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "listflow/error.hpp"

namespace listflow {

namespace {

template <int N>
using Mat = Eigen::Matrix<double, N, N>;

template <int N>
Mat<N> node_matrix(const SymTensorField& t, std::size_t node) {
  Mat<N> m;
  for (int i = 0; i < N; ++i) {
    for (int j = i; j < N; ++j) {
      const double v = t(i, j)[node];
      m(i, j) = v;
      m(j, i) = v;
    }
  }
  return m;
}

template <int N>
Eigen::Matrix<double, N, 1> eigenvalues(const Mat<N>& m) {
  Eigen::SelfAdjointEigenSolver<Mat<N>> solver;
  if constexpr (N <= 3) {
    solver.computeDirect(m, Eigen::EigenvaluesOnly);
  } else {
    solver.compute(m, Eigen::EigenvaluesOnly);
  }
  return solver.eigenvalues();
}

template <class F>
decltype(auto) dispatch_dim(int dim, F&& f) {
  switch (dim) {
    case 2:
      return f(std::integral_constant<int, 2>{});
    case 3:
      return f(std::integral_constant<int, 3>{});
    case 4:
      return f(std::integral_constant<int, 4>{});
    default:
      throw FieldError("unsupported dimension " + std::to_string(dim));
  }
}

void require_same_grid(const PeriodicGrid& a, const PeriodicGrid& b, const char* what) {
  if (!(a == b)) {
    throw FieldError(std::string(what) + ": fields live on different grids");
  }
}

template <int N>
double validate_metric_impl(const SymTensorField& h, double lambda_min, SymTensorField* inverse) {
  double global_min = std::numeric_limits<double>::infinity();
  for (std::size_t node = 0; node < h.grid().node_count(); ++node) {
    const Mat<N> m = node_matrix<N>(h, node);
    const double lmin = eigenvalues<N>(m).minCoeff();
    if (!(lmin >= lambda_min)) {
      throw DegenerationError(node, lmin);
    }
    global_min = std::min(global_min, lmin);
    if (inverse != nullptr) {
      const Mat<N> inv = m.inverse();
      for (int i = 0; i < N; ++i) {
        for (int j = i; j < N; ++j) {
          (*inverse)(i, j)[node] = 0.5 * (inv(i, j) + inv(j, i));
        }
      }
    }
  }
  return global_min;
}

}  // namespace

ChristoffelField::ChristoffelField(const PeriodicGrid& grid)
    : dim_(grid.dim()),
      comps_(static_cast<std::size_t>(grid.dim() * SymTensorField::component_count(grid.dim())), ScalarField(grid)) {}

double validate_metric(const SymTensorField& h, double lambda_min) {
  if (!h.all_finite()) {
    throw FieldError("metric contains non-finite entries");
  }
  return dispatch_dim(h.dim(), [&](auto n) { return validate_metric_impl<decltype(n)::value>(h, lambda_min, nullptr); });
}

SymTensorField inverse_metric(const SymTensorField& h, double lambda_min) {
  if (!h.all_finite()) {
    throw FieldError("metric contains non-finite entries");
  }
  SymTensorField inv(h.grid());
  dispatch_dim(h.dim(), [&](auto n) { return validate_metric_impl<decltype(n)::value>(h, lambda_min, &inv); });
  return inv;
}

std::vector<SymTensorField> metric_derivatives(const SymTensorField& h, StencilOrder order) {
  const int n = h.dim();
  std::vector<SymTensorField> dh(static_cast<std::size_t>(n), SymTensorField(h.grid()));
  for (int m = 0; m < n; ++m) {
    for (int c = 0; c < h.components(); ++c) {
      detail::diff1(h.component(c).values(), dh[static_cast<std::size_t>(m)].component(c).values(), h.grid(), m,
                    order);
    }
  }
  return dh;
}

ChristoffelField christoffel_from_derivatives(std::span<const SymTensorField> dh, const SymTensorField& h_inv) {
  const int n = h_inv.dim();
  const PeriodicGrid& grid = h_inv.grid();
  const std::size_t nodes = grid.node_count();
  const int cc = SymTensorField::component_count(n);
  ChristoffelField gamma(grid);
  std::vector<ScalarField> first(static_cast<std::size_t>(n * cc), ScalarField(grid));  // Γ_{l,ij}
  auto first_at = [&](int l, int i, int j) -> ScalarField& {
    return first[static_cast<std::size_t>(l * cc + SymTensorField::index(n, i, j))];
  };
  for (int l = 0; l < n; ++l) {
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        const auto a = dh[i](j, l).values();
        const auto b = dh[j](i, l).values();
        const auto c = dh[l](i, j).values();
        auto out = first_at(l, i, j).values();
        for (std::size_t node = 0; node < nodes; ++node) {
          out[node] = 0.5 * (a[node] + b[node] - c[node]);
        }
      }
    }
  }
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        auto acc = gamma(k, i, j).values();
        for (int l = 0; l < n; ++l) {
          const auto hk = h_inv(k, l).values();
          const auto f = first_at(l, i, j).values();
          for (std::size_t node = 0; node < nodes; ++node) {
            acc[node] += hk[node] * f[node];
          }
        }
      }
    }
  }
  return gamma;
}

ChristoffelField christoffel(const SymTensorField& h, const SymTensorField& h_inv, StencilOrder order) {
  require_same_grid(h.grid(), h_inv.grid(), "christoffel");
  const auto dh = metric_derivatives(h, order);
  return christoffel_from_derivatives(dh, h_inv);
}

RicciResult ricci(const SymTensorField& h, const SymTensorField& h_inv, const ChristoffelField& gamma,
                  StencilOrder order) {
  require_same_grid(h.grid(), gamma.grid(), "ricci");
  const int n = h.dim();
  const PeriodicGrid& grid = h.grid();
  const std::size_t nodes = grid.node_count();

  // ∂_k Γ^k_ij summed over k.
  SymTensorField div_gamma(grid);
  ScalarField scratch(grid);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      auto acc = div_gamma(i, j).values();
      for (int k = 0; k < n; ++k) {
        detail::diff1(gamma(k, i, j).values(), scratch.values(), grid, k, order);
        for (std::size_t node = 0; node < nodes; ++node) {
          acc[node] += scratch[node];
        }
      }
    }
  }

  // V_j = Γ^k_kj and its derivatives ∂_i V_j.
  std::vector<ScalarField> trace(static_cast<std::size_t>(n), ScalarField(grid));
  for (int j = 0; j < n; ++j) {
    auto v = trace[static_cast<std::size_t>(j)].values();
    for (int k = 0; k < n; ++k) {
      const auto g = gamma(k, k, j).values();
      for (std::size_t node = 0; node < nodes; ++node) {
        v[node] += g[node];
      }
    }
  }
  std::vector<ScalarField> grad_trace(static_cast<std::size_t>(n * n), ScalarField(grid));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      detail::diff1(trace[static_cast<std::size_t>(j)].values(), grad_trace[static_cast<std::size_t>(i * n + j)].values(),
                    grid, i, order);
    }
  }

  RicciResult out{SymTensorField(grid), ScalarField(grid), std::nullopt};
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      auto r = out.ricci(i, j).values();
      const auto div = div_gamma(i, j).values();
      const auto gij = grad_trace[static_cast<std::size_t>(i * n + j)].values();
      const auto gji = grad_trace[static_cast<std::size_t>(j * n + i)].values();
      for (std::size_t node = 0; node < nodes; ++node) {
        r[node] = div[node] - 0.5 * (gij[node] + gji[node]);
      }
      for (int l = 0; l < n; ++l) {
        const auto v = trace[static_cast<std::size_t>(l)].values();
        const auto g_lij = gamma(l, i, j).values();
        for (std::size_t node = 0; node < nodes; ++node) {
          r[node] += v[node] * g_lij[node];
        }
        for (int k = 0; k < n; ++k) {
          const auto g_kil = gamma(k, i, l).values();
          const auto g_lkj = gamma(l, k, j).values();
          for (std::size_t node = 0; node < nodes; ++node) {
            r[node] -= g_kil[node] * g_lkj[node];
          }
        }
      }
      const double weight = i == j ? 1.0 : 2.0;
      const auto hi = h_inv(i, j).values();
      auto scalar = out.scalar.values();
      for (std::size_t node = 0; node < nodes; ++node) {
        scalar[node] += weight * hi[node] * r[node];
      }
    }
  }

  if (n == 2) {
    ScalarField rm_sq(grid);
    for (std::size_t node = 0; node < nodes; ++node) {
      rm_sq[node] = out.scalar[node] * out.scalar[node];
    }
    out.riemann_norm_sq = std::move(rm_sq);
  } else if (n == 3) {
    // Weyl vanishes: |Rm|² = 4|Ric|² − R².
    ScalarField rm_sq = tensor_norm_sq(out.ricci, h_inv);
    for (std::size_t node = 0; node < nodes; ++node) {
      rm_sq[node] = 4.0 * rm_sq[node] - out.scalar[node] * out.scalar[node];
    }
    out.riemann_norm_sq = std::move(rm_sq);
  }
  return out;
}

ScalarField tensor_norm_sq(const SymTensorField& t, const SymTensorField& h_inv) {
  const int n = t.dim();
  const std::size_t nodes = t.grid().node_count();
  // M = h^{-1} T, |T|^2 = tr(M M).
  std::vector<ScalarField> m(static_cast<std::size_t>(n * n), ScalarField(t.grid()));
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      auto acc = m[static_cast<std::size_t>(a * n + b)].values();
      for (int c = 0; c < n; ++c) {
        const auto hi = h_inv(a, c).values();
        const auto tc = t(c, b).values();
        for (std::size_t node = 0; node < nodes; ++node) {
          acc[node] += hi[node] * tc[node];
        }
      }
    }
  }
  ScalarField out(t.grid());
  auto tr = out.values();
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const auto mab = m[static_cast<std::size_t>(a * n + b)].values();
      const auto mba = m[static_cast<std::size_t>(b * n + a)].values();
      for (std::size_t node = 0; node < nodes; ++node) {
        tr[node] += mab[node] * mba[node];
      }
    }
  }
  return out;
}

ScalarField operator_norm(const SymTensorField& t, const SymTensorField& h) {
  require_same_grid(t.grid(), h.grid(), "operator_norm");
  ScalarField out(t.grid());
  dispatch_dim(t.dim(), [&](auto nc) {
    constexpr int N = decltype(nc)::value;
    for (std::size_t node = 0; node < t.grid().node_count(); ++node) {
      const Eigen::LLT<Mat<N>> llt(node_matrix<N>(h, node));
      const Mat<N> linv = llt.matrixL().solve(Mat<N>::Identity());
      const Mat<N> m = linv * node_matrix<N>(t, node) * linv.transpose();
      out[node] = eigenvalues<N>(0.5 * (m + m.transpose())).cwiseAbs().maxCoeff();
    }
    return 0;
  });
  return out;
}

ScalarField laplace_beltrami(const ScalarField& f, const SymTensorField& h_inv, const ChristoffelField& gamma,
                             StencilOrder order) {
  const int n = h_inv.dim();
  const PeriodicGrid& grid = h_inv.grid();
  const std::size_t nodes = grid.node_count();
  std::vector<ScalarField> df;
  df.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    df.push_back(detail::d1(f, k, order));
  }
  ScalarField out(grid);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const ScalarField second = detail::d2(f, i, j, order);
      const double w = i == j ? 1.0 : 2.0;
      for (std::size_t node = 0; node < nodes; ++node) {
        double hij = second[node];
        for (int k = 0; k < n; ++k) {
          hij -= gamma(k, i, j)[node] * df[static_cast<std::size_t>(k)][node];
        }
        out[node] += w * h_inv(i, j)[node] * hij;
      }
    }
  }
  return out;
}

ScalarDerivatives scalar_ops(const ScalarField& u, const SymTensorField& h, const SymTensorField& h_inv,
                             const ChristoffelField& gamma, StencilOrder order) {
  require_same_grid(u.grid(), h.grid(), "scalar_ops");
  const int n = h.dim();
  const PeriodicGrid& grid = h.grid();
  const std::size_t nodes = grid.node_count();

  ScalarDerivatives out{VectorField(grid),    VectorField(grid), ScalarField(grid),
                        SymTensorField(grid), ScalarField(grid), ScalarField(grid)};
  for (int k = 0; k < n; ++k) {
    out.du[k] = detail::d1(u, k, order);
  }
  for (std::size_t node = 0; node < nodes; ++node) {
    double norm = 0.0;
    for (int k = 0; k < n; ++k) {
      double g = 0.0;
      for (int i = 0; i < n; ++i) {
        g += h_inv(k, i)[node] * out.du[i][node];
      }
      out.grad[k][node] = g;
      norm += g * out.du[k][node];
    }
    out.grad_norm_sq[node] = norm;
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      ScalarField hij = detail::d2(u, i, j, order);
      for (std::size_t node = 0; node < nodes; ++node) {
        for (int k = 0; k < n; ++k) {
          hij[node] -= gamma(k, i, j)[node] * out.du[k][node];
        }
      }
      out.hessian(i, j) = std::move(hij);
    }
  }
  for (std::size_t node = 0; node < nodes; ++node) {
    double lap = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        lap += (i == j ? 1.0 : 2.0) * h_inv(i, j)[node] * out.hessian(i, j)[node];
      }
    }
    out.laplacian[node] = lap;
  }
  out.hessian_norm_sq = tensor_norm_sq(out.hessian, h_inv);
  return out;
}

GeometryCache build_cache(const SymTensorField& h, const ScalarField& u, StencilOrder order, double lambda_min) {
  if (h.dim() > 3) {
    throw FieldError("build_cache: base dimension must be 2 or 3");
  }
  require_same_grid(h.grid(), u.grid(), "build_cache");
  u.require_finite("build_cache: u");
  if (!h.all_finite()) {
    throw FieldError("build_cache: metric contains non-finite entries");
  }
  const PeriodicGrid& grid = h.grid();
  const int n = h.dim();

  SymTensorField h_inv(grid);
  const double min_eig =
      dispatch_dim(n, [&](auto nc) { return validate_metric_impl<decltype(nc)::value>(h, lambda_min, &h_inv); });
  auto dh = metric_derivatives(h, order);
  ChristoffelField gamma = christoffel_from_derivatives(dh, h_inv);
  RicciResult ric = ricci(h, h_inv, gamma, order);
  ScalarDerivatives sd = scalar_ops(u, h, h_inv, gamma, order);

  SymTensorField s_tensor(grid);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      ScalarField s = ric.ricci(i, j);
      for (std::size_t node = 0; node < grid.node_count(); ++node) {
        s[node] -= sd.du[i][node] * sd.du[j][node];
      }
      s_tensor(i, j) = std::move(s);
    }
  }
  ScalarField s_scalar = ric.scalar;
  for (std::size_t node = 0; node < grid.node_count(); ++node) {
    s_scalar[node] -= sd.grad_norm_sq[node];
  }

  return GeometryCache{order,
                       min_eig,
                       std::move(h_inv),
                       std::move(dh),
                       std::move(gamma),
                       std::move(ric.ricci),
                       std::move(ric.scalar),
                       std::move(*ric.riemann_norm_sq),
                       std::move(sd.du),
                       std::move(sd.grad),
                       std::move(sd.grad_norm_sq),
                       std::move(sd.hessian),
                       std::move(sd.hessian_norm_sq),
                       std::move(sd.laplacian),
                       std::move(s_tensor),
                       std::move(s_scalar)};
}

}  // namespace listflow
