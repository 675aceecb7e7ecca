#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "gridtomo/image.hpp"
#include "gridtomo/lattice.hpp"

namespace gridtomo {

/// (M - a)|b| + (N - |b|)a + a|b|
std::int64_t bin_count(Direction d, GridDims g);

/// Intercept t of the line a·y = b·x + t through pixel p.
inline int line_of(Vec2 p, Direction d) { return d.a() * p.y - d.b() * p.x; }

/// Bins of one direction, ordered by increasing intercept t.
struct BinBlock {
  Direction direction = Direction::normalized(1, 0);
  int offset = 0;
  int count = 0;
  int t_min = 0;
  int t_max = 0;
  /// Block-local bin of intercept t at [t - t_min], -1 for lines missing the grid.
  std::vector<int> local_of_t;
  /// Intercept of each local bin.
  std::vector<int> t_of_local;

  int local_bin(int t) const {
    if (t < t_min || t > t_max) return -1;
    return local_of_t[static_cast<std::size_t>(t - t_min)];
  }
};

struct ManifestEntry {
  Direction direction;
  int t;
  int bin;
};

/// Deterministic line-to-row map: blocks follow the stored order of the set.
class BinLayout {
 public:
  BinLayout() = default;
  BinLayout(const DirectionSet& s, GridDims g);

  GridDims grid() const { return grid_; }
  const DirectionSet& directions() const { return dirs_; }
  const std::vector<BinBlock>& blocks() const { return blocks_; }
  int rows() const { return rows_; }

  /// Global row of the line through p in block `block`.
  int bin_of(Vec2 p, std::size_t block) const {
    const auto& b = blocks_[block];
    return b.offset + b.local_bin(line_of(p, b.direction));
  }

  std::vector<ManifestEntry> manifest() const;

 private:
  DirectionSet dirs_;
  GridDims grid_;
  std::vector<BinBlock> blocks_;
  int rows_ = 0;
};

BinLayout build_layout(const DirectionSet& s, GridDims g);

struct ProjectionVector {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  friend bool operator==(const ProjectionVector&, const ProjectionVector&) = default;
};

/// Binary m×n matrix stored by rows: each row lists the pixels of one lattice line.
class SparseProjectionMatrix {
 public:
  SparseProjectionMatrix() = default;
  explicit SparseProjectionMatrix(BinLayout layout);

  const BinLayout& layout() const { return layout_; }
  GridDims grid() const { return layout_.grid(); }
  std::size_t rows() const { return static_cast<std::size_t>(layout_.rows()); }
  std::size_t cols() const { return layout_.grid().pixel_count(); }
  std::size_t nonzeros() const { return pixel_index_.size(); }

  /// Sorted pixel indices of row i.
  std::span<const std::uint32_t> row(std::size_t i) const {
    return std::span<const std::uint32_t>(pixel_index_).subspan(row_ptr_[i],
                                                                 row_ptr_[i + 1] - row_ptr_[i]);
  }

  /// Row indices of column j (one per direction), from the layout.
  void column(std::size_t j, std::span<int> out) const;

  /// y = A x. Sizes must match.
  void apply(std::span<const double> x, std::span<double> y, bool deterministic = true) const;
  /// x = Aᵀ y.
  void apply_transpose(std::span<const double> y, std::span<double> x,
                       bool deterministic = true) const;

 private:
  BinLayout layout_;
  std::vector<std::size_t> row_ptr_;
  std::vector<std::uint32_t> pixel_index_;
};

SparseProjectionMatrix build_matrix(const DirectionSet& s, GridDims g);

/// p = A x. Throws DimensionMismatch.
ProjectionVector forward_project(const SparseProjectionMatrix& a, const Image& x,
                                 bool deterministic = true);
/// Aᵀ p as a real image. Throws DimensionMismatch.
Image back_project(const SparseProjectionMatrix& a, const ProjectionVector& p,
                   bool deterministic = true);

/// Integer forward projection of an integer-valued image (used by exact checks).
std::vector<std::int64_t> forward_project_exact(const SparseProjectionMatrix& a,
                                                std::span<const std::int64_t> x);

}  // namespace gridtomo
