#pragma once

#include <span>
#include <vector>

#include "gridtomo/lattice.hpp"

namespace gridtomo {

enum class ImageKind { Binary, Real };

/// Grid function stored row-major (η·M + ξ). Binary images hold only 0.0 and 1.0.
class Image {
 public:
  Image() = default;
  Image(GridDims dims, ImageKind kind);
  Image(GridDims dims, std::vector<double> values, ImageKind kind);

  static Image zeros(GridDims dims, ImageKind kind = ImageKind::Real) { return {dims, kind}; }
  /// Binary image from 0/1 values; throws InvalidArgument on anything else.
  static Image binary(GridDims dims, std::vector<double> values);

  GridDims dims() const { return dims_; }
  ImageKind kind() const { return kind_; }
  std::size_t size() const { return values_.size(); }

  double operator()(int x, int y) const { return values_[dims_.index({x, y})]; }
  double& operator()(int x, int y) { return values_[dims_.index({x, y})]; }
  double at(Vec2 p) const { return values_[dims_.index(p)]; }
  double& at(Vec2 p) { return values_[dims_.index(p)]; }

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  /// Re-tag as Real; values are kept.
  Image as_real() const;

  friend bool operator==(const Image&, const Image&) = default;

 private:
  GridDims dims_;
  std::vector<double> values_;
  ImageKind kind_ = ImageKind::Real;
};

}  // namespace gridtomo
