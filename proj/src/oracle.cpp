#include "gridtomo/oracle.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "gridtomo/error.hpp"

namespace gridtomo {

namespace {

class Enumerator {
 public:
  Enumerator(const SparseProjectionMatrix& a, std::span<const std::int64_t> p, std::size_t cap)
      : a_(a), p_(p), cap_(cap), d_(a.layout().blocks().size()) {
    const std::size_t n = a.cols();
    bins_.resize(n * d_);
    for (std::size_t j = 0; j < n; ++j) {
      a.column(j, std::span<int>(bins_).subspan(j * d_, d_));
    }
    remaining_.resize(a.rows());
    for (std::size_t r = 0; r < a.rows(); ++r) remaining_[r] = static_cast<std::int64_t>(a.row(r).size());
    sum_.assign(a.rows(), 0);

    // Walk the lines of the shortest direction so lines close early.
    const auto& blocks = a.layout().blocks();
    std::size_t best = 0;
    auto norm2 = [](Direction d) { return d.a() * d.a() + d.b() * d.b(); };
    for (std::size_t k = 1; k < blocks.size(); ++k) {
      if (norm2(blocks[k].direction) < norm2(blocks[best].direction)) best = k;
    }
    const auto& blk = blocks[best];
    for (int i = 0; i < blk.count; ++i) {
      for (std::uint32_t j : a.row(static_cast<std::size_t>(blk.offset + i))) order_.push_back(j);
    }
    value_.assign(n, 0.0);
  }

  EnumerationResult run() {
    for (std::size_t r = 0; r < p_.size(); ++r) {
      if (p_[r] < 0 || p_[r] > remaining_[r]) return {};
    }
    dfs(0);
    std::sort(out_.solutions.begin(), out_.solutions.end(), [](const Image& l, const Image& r) {
      return std::lexicographical_compare(l.values().begin(), l.values().end(), r.values().begin(),
                                          r.values().end());
    });
    return std::move(out_);
  }

 private:
  bool feasible(std::size_t j, int v) const {
    for (std::size_t k = 0; k < d_; ++k) {
      const auto r = static_cast<std::size_t>(bins_[j * d_ + k]);
      const std::int64_t s = sum_[r] + v;
      if (s > p_[r] || s + remaining_[r] - 1 < p_[r]) return false;
    }
    return true;
  }

  void set(std::size_t j, int v, int sign) {
    for (std::size_t k = 0; k < d_; ++k) {
      const auto r = static_cast<std::size_t>(bins_[j * d_ + k]);
      sum_[r] += sign * v;
      remaining_[r] -= sign;
    }
  }

  void dfs(std::size_t depth) {
    if (stop_) return;
    if (depth == order_.size()) {
      if (out_.solutions.size() == cap_) {
        out_.truncated = true;
        stop_ = true;
        return;
      }
      out_.solutions.push_back(Image::binary(a_.grid(), value_));
      return;
    }
    const std::size_t j = order_[depth];
    for (int v = 0; v <= 1 && !stop_; ++v) {
      if (!feasible(j, v)) continue;
      value_[j] = v;
      set(j, v, 1);
      dfs(depth + 1);
      set(j, v, -1);
      value_[j] = 0.0;
    }
  }

  const SparseProjectionMatrix& a_;
  std::span<const std::int64_t> p_;
  std::size_t cap_;
  std::size_t d_;
  std::vector<int> bins_;
  std::vector<std::int64_t> sum_;
  std::vector<std::int64_t> remaining_;
  std::vector<std::size_t> order_;
  std::vector<double> value_;
  EnumerationResult out_;
  bool stop_ = false;
};

Eigen::MatrixXd dense(const SparseProjectionMatrix& a) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(a.rows()),
                                            static_cast<Eigen::Index>(a.cols()));
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::uint32_t j : a.row(i)) m(static_cast<Eigen::Index>(i), j) = 1.0;
  }
  return m;
}

}  // namespace

std::vector<std::int64_t> integral_projection(const ProjectionVector& p) {
  std::vector<std::int64_t> out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double v = p.values[i];
    if (!(v >= 0.0) || v != std::floor(v)) {
      throw Error(ErrorCode::InvalidArgument,
                  "bin " + std::to_string(i) + " is not a non-negative integer");
    }
    out[i] = static_cast<std::int64_t>(v);
  }
  return out;
}

EnumerationResult enumerate_binary_solutions(const SparseProjectionMatrix& a,
                                             std::span<const std::int64_t> p, std::size_t cap) {
  if (p.size() != a.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "projection has " + std::to_string(p.size()) +
                                                  " bins, matrix has " + std::to_string(a.rows()));
  }
  return Enumerator(a, p, cap).run();
}

EnumerationResult enumerate_binary_solutions(const SparseProjectionMatrix& a,
                                             const ProjectionVector& p, std::size_t cap) {
  const auto ip = integral_projection(p);
  return enumerate_binary_solutions(a, ip, cap);
}

Image dense_min_norm(const SparseProjectionMatrix& a, const ProjectionVector& p, double tol) {
  if (p.size() != a.rows()) throw Error(ErrorCode::DimensionMismatch, "projection length");
  const Eigen::MatrixXd m = dense(a);
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(m);
  const Eigen::Index r = cod.rank();
  if (r > 0) {
    const auto diag = cod.matrixQTZ().diagonal().head(r).cwiseAbs();
    const double cond = diag.maxCoeff() / diag.minCoeff();
    if (cond * tol > 1.0) {
      throw Error(ErrorCode::IllConditioned, "condition estimate " + std::to_string(cond));
    }
  }
  const Eigen::Map<const Eigen::VectorXd> rhs(p.values.data(), static_cast<Eigen::Index>(p.size()));
  const Eigen::VectorXd x = cod.solve(rhs);
  return Image(a.grid(), std::vector<double>(x.data(), x.data() + x.size()), ImageKind::Real);
}

std::size_t dense_rank(const SparseProjectionMatrix& a) {
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(dense(a));
  return static_cast<std::size_t>(cod.rank());
}

std::size_t null_space_dimension(const SparseProjectionMatrix& a) {
  return a.cols() - dense_rank(a);
}

double alpha_closed_form(const Image& xbar, const BadConfiguration& b, Vec2 u) {
  double s = 0.0;
  for (const auto& px : b.pixels) {
    const Vec2 q = px.pos + u;
    if (!xbar.dims().contains(q)) throw Error(ErrorCode::OutOfRegion, "g_u leaves the grid");
    s += px.weight * xbar.at(q);
  }
  return -s / 18.0;
}

GhostWeights exact_alphas(const Image& xbar, const BadConfiguration& b, EnlargingRegion e) {
  const GridDims g = xbar.dims();
  const auto n = static_cast<Eigen::Index>(e.size());
  // Pixel -> (u, weight) incidences of the translated configurations.
  std::vector<std::vector<std::pair<Eigen::Index, int>>> hits(g.pixel_count());
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vec2 u = e.point(static_cast<std::size_t>(i));
    for (const auto& px : b.pixels) {
      const Vec2 q = px.pos + u;
      if (!g.contains(q)) throw Error(ErrorCode::OutOfRegion, "g_u leaves the grid");
      hits[g.index(q)].emplace_back(i, px.weight);
      rhs(i) -= px.weight * xbar.at(q);
    }
  }
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(n, n);
  for (const auto& h : hits) {
    for (const auto& [i, wi] : h) {
      for (const auto& [j, wj] : h) gram(i, j) += wi * wj;
    }
  }
  const Eigen::VectorXd alpha = gram.ldlt().solve(rhs);
  return GhostWeights{e, std::vector<double>(alpha.data(), alpha.data() + alpha.size())};
}

}  // namespace gridtomo
