#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "gridtomo/image.hpp"
#include "gridtomo/projector.hpp"

namespace gridtomo {

struct SolverConfig {
  /// Maximum number of CGLS iterations.
  int kappa = 0;
  /// Stop early once ‖Aᵀ(A x - p)‖₂ <= residual_tol.
  std::optional<double> residual_tol;
  /// Force single-threaded matrix products.
  bool deterministic = true;
};

struct SolverTrace {
  int iterations_run = 0;
  std::vector<double> residual_norms;    ///< ‖A x_i - p‖₂, i = 0..iterations_run
  std::vector<double> normal_residuals;  ///< ‖Aᵀ(A x_i - p)‖₂
};

struct CglsResult {
  Image x;
  SolverTrace trace;
};

/// Called after every iteration with (iteration, x_iteration); return false to stop.
using IterationObserver = std::function<bool(int, const Image&)>;

/// Conjugate gradient on the normal equations, started from zero so every
/// iterate stays in range(Aᵀ) and the limit is the minimum-norm solution.
/// Throws DimensionMismatch, or NonFinite on breakdown.
CglsResult cgls(const SparseProjectionMatrix& a, const ProjectionVector& p,
                const SolverConfig& cfg, const IterationObserver& observer = {});

/// R = sqrt(‖p‖₁ / d - ‖x*‖₂²), the common distance of all binary solutions
/// from the central solution. Throws NegativeRadicand.
double central_radius(const ProjectionVector& p, const Image& xstar, int d);

}  // namespace gridtomo
