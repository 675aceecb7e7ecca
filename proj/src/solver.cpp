#include "gridtomo/solver.hpp"

#include <cmath>
#include <numeric>

#include "gridtomo/error.hpp"

namespace gridtomo {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

void require_finite(double v, int iteration) {
  if (!std::isfinite(v)) {
    throw Error(ErrorCode::NonFinite, "CGLS breakdown at iteration " + std::to_string(iteration));
  }
}

}  // namespace

CglsResult cgls(const SparseProjectionMatrix& a, const ProjectionVector& p,
                const SolverConfig& cfg, const IterationObserver& observer) {
  if (p.size() != a.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "projection has " + std::to_string(p.size()) +
                                                  " bins, matrix has " + std::to_string(a.rows()));
  }
  if (cfg.kappa < 0) throw Error(ErrorCode::InvalidArgument, "kappa must be >= 0");
  for (double v : p.values) require_finite(v, 0);

  const bool det = cfg.deterministic;
  CglsResult out{Image::zeros(a.grid()), {}};
  auto x = out.x.values();

  std::vector<double> r = p.values;  // r = p - A x, x = 0
  std::vector<double> s(a.cols());
  a.apply_transpose(r, s, det);
  std::vector<double> d = s;
  std::vector<double> q(a.rows());

  double gamma = dot(s, s);
  auto& tr = out.trace;
  tr.residual_norms.push_back(std::sqrt(dot(r, r)));
  tr.normal_residuals.push_back(std::sqrt(gamma));

  for (int it = 1; it <= cfg.kappa; ++it) {
    if (cfg.residual_tol && tr.normal_residuals.back() <= *cfg.residual_tol) break;
    if (gamma == 0.0) break;  // exact solution already

    a.apply(d, q, det);
    const double qq = dot(q, q);
    require_finite(qq, it);
    if (qq == 0.0) break;
    const double alpha = gamma / qq;
    for (std::size_t j = 0; j < x.size(); ++j) x[j] += alpha * d[j];
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= alpha * q[i];
    a.apply_transpose(r, s, det);
    const double gamma_next = dot(s, s);
    require_finite(gamma_next, it);
    const double beta = gamma_next / gamma;
    for (std::size_t j = 0; j < d.size(); ++j) d[j] = s[j] + beta * d[j];
    gamma = gamma_next;

    tr.iterations_run = it;
    tr.residual_norms.push_back(std::sqrt(dot(r, r)));
    tr.normal_residuals.push_back(std::sqrt(gamma));
    if (observer && !observer(it, out.x)) break;
  }
  return out;
}

double central_radius(const ProjectionVector& p, const Image& xstar, int d) {
  if (d <= 0) throw Error(ErrorCode::InvalidArgument, "direction count must be positive");
  double l1 = 0.0;
  for (double v : p.values) l1 += std::abs(v);
  const double xx = dot(xstar.values(), xstar.values());
  const double radicand = l1 / d - xx;
  if (radicand < 0.0) {
    // Tolerate rounding noise around an exact zero.
    if (radicand > -1e-9 * std::max(1.0, l1)) return 0.0;
    throw Error(ErrorCode::NegativeRadicand,
                "‖p‖₁/d - ‖x*‖² = " + std::to_string(radicand) + " (x* not converged?)");
  }
  return std::sqrt(radicand);
}

}  // namespace gridtomo
