#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gridtomo/ghost.hpp"
#include "gridtomo/image.hpp"
#include "gridtomo/lattice.hpp"
#include "gridtomo/projector.hpp"
#include "gridtomo/solver.hpp"

namespace gridtomo {

/// Nearest integer, ties away from zero.
double round_half_away(double v);

/// α*_u for every u of the enlarging region, in region index order.
struct GhostWeights {
  EnlargingRegion region;
  std::vector<double> alpha;

  double at(Vec2 u) const { return alpha[region.index(u)]; }
  double max_abs() const;
};

/// α_u = x(λ0 + u) - round(x(λ0 + u)).
GhostWeights compute_alphas(const Image& xk, const BadConfiguration& b, EnlargingRegion e);

/// w*(p) = Σ_u α_u g_u(p): 0 outside H, ±2α_u on λ_δ + u, Σ_{E+} α - Σ_{E-} α elsewhere.
Image minimal_weights(const GhostWeights& w, const GhostRegionIndex& g);

/// x - w*. Throws InconsistentIndex when the index and configuration disagree.
Image apply_rounding(const Image& xk, const GhostWeights& w, const GhostRegionIndex& g,
                     const BadConfiguration& b);

/// < 1/2 -> 0, >= 1/2 -> 1 (values outside [0, 1] clamp accordingly).
Image binary_round(const Image& x);

/// Every pixel of H is reached by exactly one translate.
bool simple_rounding_applicable(const GhostRegionIndex& g);

struct BraOptions {
  int kappa = 0;
  std::optional<double> residual_tol;
  bool deterministic = true;
  /// Run on sets failing the uniqueness check (with a warning) instead of refusing.
  bool force = false;
  /// Round x_κ directly when simple_rounding_applicable holds. When the two
  /// paths disagree, the candidate whose projections match p is kept (ties and
  /// calls without p keep the weight-subtraction path).
  bool fast_path = true;
  /// Pixels of the pre-round image within this distance of 1/2 are reported.
  double near_half_margin = 1e-3;
};

struct BraDiagnostics {
  std::size_t pixels_in_h = 0;
  std::size_t pixels_outside_h = 0;
  std::vector<Vec2> near_half_in_h;
  std::vector<Vec2> near_half_outside_h;
  double max_abs_alpha = 0.0;
  /// Some |α| exceeded 4/9: the iterate is not yet close to x*.
  bool alpha_out_of_bounds = false;
  bool not_converged = false;
  bool simple_rounding = false;
  /// Direct rounding was evaluated.
  bool fast_path_used = false;
  /// The output is the direct rounding of x_κ.
  bool fast_path_selected = false;
  /// Pixels where direct rounding differs from the weight-subtraction path.
  std::size_t fast_path_disagreements = 0;
  /// Σ|A b - p| of the output, when p was available.
  std::optional<double> projection_residual;
  std::vector<std::string> warnings;
};

struct ReconstructionResult {
  Image binary;
  GhostWeights weights;
  Image wstar;
  /// x_κ - w*, before binary round-off.
  Image corrected;
  Image xk;
  int kappa_used = 0;
  SolverTrace trace;
  BraDiagnostics diagnostics;
};

/// Precomputed geometry for one (S, grid) pair: projection matrix, F_S,
/// enlarging region and ghost index. Reusable across projections and κ.
class BinaryReconstructor {
 public:
  /// Throws NotUniquenessSet unless S is a set of binary uniqueness (or force).
  BinaryReconstructor(const DirectionSet& s, GridDims g, bool force = false);

  const DirectionSet& directions() const { return dirs_; }
  GridDims grid() const { return grid_; }
  const UniquenessReport& report() const { return report_; }
  const SparseProjectionMatrix& matrix() const { return matrix_; }
  const BadConfiguration& configuration() const { return config_; }
  const EnlargingRegion& region() const { return region_; }
  const GhostRegionIndex& index() const { return index_; }
  bool simple_rounding() const { return simple_; }

  /// Steps 3-10 on a given CGLS iterate. p, when given, arbitrates between the
  /// fast and general paths.
  ReconstructionResult finish(const Image& xk, const BraOptions& opt,
                              const ProjectionVector* p = nullptr) const;

  /// The whole pipeline: κ CGLS iterations then finish().
  ReconstructionResult reconstruct(const ProjectionVector& p, const BraOptions& opt) const;

 private:
  double projection_residual(const Image& b, const ProjectionVector& p) const;

  DirectionSet dirs_;
  GridDims grid_;
  UniquenessReport report_;
  bool forced_ = false;
  SparseProjectionMatrix matrix_;
  BadConfiguration config_;
  EnlargingRegion region_;
  GhostRegionIndex index_;
  bool simple_ = false;
};

ReconstructionResult bra(const DirectionSet& s, GridDims g, const ProjectionVector& p,
                         const BraOptions& opt);

}  // namespace gridtomo
