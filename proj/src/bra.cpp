#include "gridtomo/bra.hpp"

#include <algorithm>
#include <cmath>

#include "gridtomo/error.hpp"

namespace gridtomo {

namespace {

constexpr double kAlphaBound = 4.0 / 9.0;

}  // namespace

double round_half_away(double v) { return std::round(v); }

double GhostWeights::max_abs() const {
  double m = 0.0;
  for (double a : alpha) m = std::max(m, std::abs(a));
  return m;
}

GhostWeights compute_alphas(const Image& xk, const BadConfiguration& b, EnlargingRegion e) {
  GhostWeights w{e, std::vector<double>(e.size())};
  const Vec2 l0 = b.lambda0();
  for (std::size_t i = 0; i < e.size(); ++i) {
    const Vec2 p = l0 + e.point(i);
    if (!xk.dims().contains(p)) {
      throw Error(ErrorCode::OutOfRegion, "λ0 + u = " + to_string(p) + " is outside the grid");
    }
    const double v = xk.at(p);
    w.alpha[i] = v - round_half_away(v);
  }
  return w;
}

Image minimal_weights(const GhostWeights& w, const GhostRegionIndex& g) {
  if (w.region.width != g.region().width || w.region.height != g.region().height) {
    throw Error(ErrorCode::InconsistentIndex, "weights and ghost index use different regions");
  }
  Image ws = Image::zeros(g.grid());
  auto vals = ws.values();
  const auto& pixels = g.pixels();
  for (std::size_t slot = 0; slot < pixels.size(); ++slot) {
    double s = 0.0;
    for (const auto& c : g.covers_at(slot)) s += c.weight * w.alpha[static_cast<std::size_t>(c.u_index)];
    vals[pixels[slot]] = s;
  }
  return ws;
}

Image apply_rounding(const Image& xk, const GhostWeights& w, const GhostRegionIndex& g,
                     const BadConfiguration& b) {
  if (xk.dims() != g.grid()) {
    throw Error(ErrorCode::DimensionMismatch, "iterate and ghost index grids differ");
  }
  if (g.delta_term() != static_cast<std::size_t>(b.delta_index)) {
    throw Error(ErrorCode::InconsistentIndex, "ghost index built from another configuration");
  }
  const auto& pixels = g.pixels();
  for (std::size_t slot = 0; slot < pixels.size(); ++slot) {
    const auto covers = g.covers_at(slot);
    if (covers.empty()) {
      throw Error(ErrorCode::InconsistentIndex,
                  "pixel " + to_string(g.grid().point(pixels[slot])) + " of H has no translate");
    }
    for (const auto& c : covers) {
      const auto t = static_cast<std::size_t>(c.term);
      if (t >= b.pixels.size() || b.pixels[t].weight != c.weight ||
          b.pixels[t].pos + g.region().point(static_cast<std::size_t>(c.u_index)) !=
              g.grid().point(pixels[slot])) {
        throw Error(ErrorCode::InconsistentIndex, "ghost index disagrees with F_S");
      }
    }
  }
  Image out = xk.as_real();
  const Image ws = minimal_weights(w, g);
  auto o = out.values();
  const auto wv = ws.values();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] -= wv[i];
  return out;
}

Image binary_round(const Image& x) {
  std::vector<double> v(x.values().begin(), x.values().end());
  for (double& e : v) e = e >= 0.5 ? 1.0 : 0.0;
  return Image::binary(x.dims(), std::move(v));
}

bool simple_rounding_applicable(const GhostRegionIndex& g) { return g.max_coverage() <= 1; }

BinaryReconstructor::BinaryReconstructor(const DirectionSet& s, GridDims g, bool force)
    : dirs_(s), grid_(g), matrix_(build_matrix(s, g)) {
  if (s.size() != 4) {
    throw Error(ErrorCode::NotUniquenessSet, "BRA needs four directions, got " +
                                                 std::to_string(s.size()));
  }
  report_ = check_binary_uniqueness(s, g);
  if (!report_.is_binary_uniqueness_set) {
    if (!force) {
      throw Error(ErrorCode::NotUniquenessSet, to_string(s) + " on " + std::to_string(g.width) +
                                                   "x" + std::to_string(g.height) + ": " +
                                                   report_.reason);
    }
    if (!report_.structure || !report_.valid) {
      throw Error(ErrorCode::NotUniquenessSet,
                  "cannot force: " + report_.reason + " leaves no ghost model");
    }
    forced_ = true;
  }
  config_ = build_bad_configuration(s, *report_.structure);
  region_ = enlarging_region(s, g);
  index_ = build_ghost_index(config_, region_, g);
  simple_ = simple_rounding_applicable(index_);
}

double BinaryReconstructor::projection_residual(const Image& b, const ProjectionVector& p) const {
  const ProjectionVector ab = forward_project(matrix_, b, true);
  double r = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) r += std::abs(ab.values[i] - p.values[i]);
  return r;
}

ReconstructionResult BinaryReconstructor::finish(const Image& xk, const BraOptions& opt,
                                                 const ProjectionVector* p) const {
  if (xk.dims() != grid_) throw Error(ErrorCode::DimensionMismatch, "iterate grid");
  ReconstructionResult res;
  res.xk = xk;
  res.kappa_used = opt.kappa;
  res.weights = compute_alphas(xk, config_, region_);

  auto& diag = res.diagnostics;
  diag.simple_rounding = simple_;
  diag.max_abs_alpha = res.weights.max_abs();
  diag.alpha_out_of_bounds = diag.max_abs_alpha > kAlphaBound + 1e-6;
  if (forced_) diag.warnings.push_back("forced run: " + report_.reason);

  res.wstar = minimal_weights(res.weights, index_);
  res.corrected = apply_rounding(xk, res.weights, index_, config_);
  res.binary = binary_round(res.corrected);
  if (p) diag.projection_residual = projection_residual(res.binary, *p);
  if (opt.fast_path && simple_) {
    diag.fast_path_used = true;
    Image direct = binary_round(xk);
    std::size_t disagree = 0;
    const auto gv = res.binary.values();
    const auto dv = direct.values();
    for (std::size_t i = 0; i < gv.size(); ++i) disagree += gv[i] != dv[i];
    diag.fast_path_disagreements = disagree;
    if (disagree == 0) {
      diag.fast_path_selected = true;
    } else {
      std::string pick = "kept weight subtraction";
      if (p) {
        const double r = projection_residual(direct, *p);
        if (r < *diag.projection_residual) {
          diag.fast_path_selected = true;
          diag.projection_residual = r;
          res.corrected = xk.as_real();
          res.binary = std::move(direct);
          pick = "kept direct rounding";
        }
      }
      diag.warnings.push_back("direct rounding and weight subtraction disagree on " +
                              std::to_string(disagree) + " pixels; " + pick);
    }
  }

  diag.pixels_in_h = index_.pixels().size();
  diag.pixels_outside_h = grid_.pixel_count() - diag.pixels_in_h;
  const auto vals = res.corrected.values();
  for (std::size_t i = 0; i < vals.size(); ++i) {
    if (std::abs(vals[i] - 0.5) < opt.near_half_margin) {
      const Vec2 p = grid_.point(i);
      (index_.in_h(p) ? diag.near_half_in_h : diag.near_half_outside_h).push_back(p);
    }
  }
  if (diag.alpha_out_of_bounds) {
    diag.warnings.push_back("max |alpha| = " + std::to_string(diag.max_abs_alpha) +
                            " exceeds 4/9; iterate is far from x*");
  }
  if (!diag.near_half_in_h.empty() || !diag.near_half_outside_h.empty()) {
    diag.warnings.push_back(std::to_string(diag.near_half_in_h.size() +
                                           diag.near_half_outside_h.size()) +
                            " pixels within the near-half margin; more iterations may change them");
  }
  diag.not_converged = diag.alpha_out_of_bounds || !diag.near_half_in_h.empty() ||
                       !diag.near_half_outside_h.empty();
  return res;
}

ReconstructionResult BinaryReconstructor::reconstruct(const ProjectionVector& p,
                                                      const BraOptions& opt) const {
  if (p.size() != matrix_.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "projection has " + std::to_string(p.size()) +
                                                  " bins, layout has " +
                                                  std::to_string(matrix_.rows()));
  }
  SolverConfig cfg{opt.kappa, opt.residual_tol, opt.deterministic};
  CglsResult sol = cgls(matrix_, p, cfg);
  ReconstructionResult res = finish(sol.x, opt, &p);
  res.kappa_used = sol.trace.iterations_run;
  const bool nonzero = std::any_of(p.values.begin(), p.values.end(), [](double v) { return v != 0.0; });
  if (nonzero && sol.trace.iterations_run == 0) {
    res.diagnostics.not_converged = true;
    res.diagnostics.warnings.push_back("no CGLS iterations were run");
  }
  res.trace = std::move(sol.trace);
  return res;
}

ReconstructionResult bra(const DirectionSet& s, GridDims g, const ProjectionVector& p,
                         const BraOptions& opt) {
  return BinaryReconstructor(s, g, opt.force).reconstruct(p, opt);
}

}  // namespace gridtomo
