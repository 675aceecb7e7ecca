#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gridtomo/bra.hpp"
#include "gridtomo/ghost.hpp"
#include "gridtomo/image.hpp"
#include "gridtomo/projector.hpp"

namespace gridtomo {

struct EnumerationResult {
  /// Sorted lexicographically by pixel values.
  std::vector<Image> solutions;
  bool truncated = false;
};

/// All binary x with A x = p, found by depth-first search with per-line
/// interval pruning. Stops after `cap` solutions and sets truncated.
EnumerationResult enumerate_binary_solutions(const SparseProjectionMatrix& a,
                                             std::span<const std::int64_t> p, std::size_t cap);
/// Same, for a projection vector of integral values (throws InvalidArgument otherwise).
EnumerationResult enumerate_binary_solutions(const SparseProjectionMatrix& a,
                                             const ProjectionVector& p, std::size_t cap);

/// Integral copy of p. Throws InvalidArgument on fractional or negative entries.
std::vector<std::int64_t> integral_projection(const ProjectionVector& p);

/// Minimum-norm least-squares solution by a dense complete orthogonal
/// decomposition. Throws IllConditioned when the retained pivots span more
/// than 1/tol.
Image dense_min_norm(const SparseProjectionMatrix& a, const ProjectionVector& p,
                     double tol = 1e-12);

/// Numerical rank of the dense matrix.
std::size_t dense_rank(const SparseProjectionMatrix& a);

/// n - rank(A).
std::size_t null_space_dimension(const SparseProjectionMatrix& a);

/// -Σ_t c_t x̄(λ_t + u) / 18: the weight of g_u if it were orthogonal to every other ghost.
double alpha_closed_form(const Image& xbar, const BadConfiguration& b, Vec2 u);

/// The exact weights of x* - x̄ in the ghost basis, from the Gram system
/// Σ_v <g_u, g_v> α_v = -<g_u, x̄>.
GhostWeights exact_alphas(const Image& xbar, const BadConfiguration& b, EnlargingRegion e);

}  // namespace gridtomo
