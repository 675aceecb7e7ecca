#include "gridtomo/projector.hpp"

#include <cstdlib>
#include <limits>

#include "gridtomo/error.hpp"
#include "gridtomo/parallel.hpp"

namespace gridtomo {

std::int64_t bin_count(Direction d, GridDims g) {
  const std::int64_t a = d.a();
  const std::int64_t b = std::abs(d.b());
  return (g.width - a) * b + (g.height - b) * a + a * b;
}

BinLayout::BinLayout(const DirectionSet& s, GridDims g) : dirs_(s), grid_(g) {
  int offset = 0;
  for (const auto& d : s) {
    BinBlock block;
    block.direction = d;
    block.offset = offset;
    block.t_min = std::numeric_limits<int>::max();
    block.t_max = std::numeric_limits<int>::min();
    for (int y = 0; y < g.height; y += std::max(1, g.height - 1)) {
      for (int x = 0; x < g.width; x += std::max(1, g.width - 1)) {
        const int t = line_of({x, y}, d);
        block.t_min = std::min(block.t_min, t);
        block.t_max = std::max(block.t_max, t);
      }
    }
    std::vector<char> hit(static_cast<std::size_t>(block.t_max - block.t_min + 1), 0);
    for (int y = 0; y < g.height; ++y) {
      for (int x = 0; x < g.width; ++x) hit[static_cast<std::size_t>(line_of({x, y}, d) - block.t_min)] = 1;
    }
    block.local_of_t.assign(hit.size(), -1);
    for (std::size_t i = 0; i < hit.size(); ++i) {
      if (!hit[i]) continue;
      block.local_of_t[i] = static_cast<int>(block.t_of_local.size());
      block.t_of_local.push_back(block.t_min + static_cast<int>(i));
    }
    block.count = static_cast<int>(block.t_of_local.size());
    offset += block.count;
    blocks_.push_back(std::move(block));
  }
  rows_ = offset;
}

std::vector<ManifestEntry> BinLayout::manifest() const {
  std::vector<ManifestEntry> out;
  out.reserve(static_cast<std::size_t>(rows_));
  for (const auto& b : blocks_) {
    for (int i = 0; i < b.count; ++i) {
      out.push_back({b.direction, b.t_of_local[static_cast<std::size_t>(i)], b.offset + i});
    }
  }
  return out;
}

BinLayout build_layout(const DirectionSet& s, GridDims g) { return BinLayout(s, g); }

SparseProjectionMatrix::SparseProjectionMatrix(BinLayout layout) : layout_(std::move(layout)) {
  const GridDims g = layout_.grid();
  const std::size_t m = rows();
  const std::size_t n = cols();
  const std::size_t d = layout_.blocks().size();

  row_ptr_.assign(m + 1, 0);
  for (std::size_t j = 0; j < n; ++j) {
    const Vec2 p = g.point(j);
    for (std::size_t b = 0; b < d; ++b) ++row_ptr_[static_cast<std::size_t>(layout_.bin_of(p, b)) + 1];
  }
  for (std::size_t i = 0; i < m; ++i) row_ptr_[i + 1] += row_ptr_[i];

  pixel_index_.resize(n * d);
  std::vector<std::size_t> fill(row_ptr_.begin(), row_ptr_.end() - 1);
  for (std::size_t j = 0; j < n; ++j) {
    const Vec2 p = g.point(j);
    for (std::size_t b = 0; b < d; ++b) {
      const auto r = static_cast<std::size_t>(layout_.bin_of(p, b));
      pixel_index_[fill[r]++] = static_cast<std::uint32_t>(j);
    }
  }
}

void SparseProjectionMatrix::column(std::size_t j, std::span<int> out) const {
  const Vec2 p = grid().point(j);
  for (std::size_t b = 0; b < layout_.blocks().size(); ++b) out[b] = layout_.bin_of(p, b);
}

void SparseProjectionMatrix::apply(std::span<const double> x, std::span<double> y,
                                   bool deterministic) const {
  if (x.size() != cols() || y.size() != rows()) {
    throw Error(ErrorCode::DimensionMismatch, "A x with mismatched sizes");
  }
  parallel_for(rows(), worker_count(deterministic), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      double s = 0.0;
      for (std::uint32_t j : row(i)) s += x[j];
      y[i] = s;
    }
  });
}

void SparseProjectionMatrix::apply_transpose(std::span<const double> y, std::span<double> x,
                                             bool deterministic) const {
  if (x.size() != cols() || y.size() != rows()) {
    throw Error(ErrorCode::DimensionMismatch, "Aᵀ y with mismatched sizes");
  }
  // Columns are implicit: each pixel gathers its d bins, so every thread
  // count produces the same bits.
  const GridDims g = grid();
  const auto& blocks = layout_.blocks();
  parallel_for(cols(), worker_count(deterministic), [&](std::size_t b, std::size_t e) {
    for (std::size_t j = b; j < e; ++j) {
      const Vec2 p = g.point(j);
      double s = 0.0;
      for (std::size_t k = 0; k < blocks.size(); ++k) s += y[static_cast<std::size_t>(layout_.bin_of(p, k))];
      x[j] = s;
    }
  });
}

SparseProjectionMatrix build_matrix(const DirectionSet& s, GridDims g) {
  return SparseProjectionMatrix(BinLayout(s, g));
}

ProjectionVector forward_project(const SparseProjectionMatrix& a, const Image& x,
                                 bool deterministic) {
  if (x.dims() != a.grid()) {
    throw Error(ErrorCode::DimensionMismatch, "image does not match the projector grid");
  }
  ProjectionVector p;
  p.values.resize(a.rows());
  a.apply(x.values(), p.values, deterministic);
  return p;
}

Image back_project(const SparseProjectionMatrix& a, const ProjectionVector& p,
                   bool deterministic) {
  if (p.size() != a.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "projection has " + std::to_string(p.size()) +
                                                  " bins, layout has " + std::to_string(a.rows()));
  }
  Image x = Image::zeros(a.grid());
  a.apply_transpose(p.values, x.values(), deterministic);
  return x;
}

std::vector<std::int64_t> forward_project_exact(const SparseProjectionMatrix& a,
                                                std::span<const std::int64_t> x) {
  if (x.size() != a.cols()) throw Error(ErrorCode::DimensionMismatch, "exact projection");
  std::vector<std::int64_t> p(a.rows(), 0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::uint32_t j : a.row(i)) p[i] += x[j];
  }
  return p;
}

}  // namespace gridtomo
