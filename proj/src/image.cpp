#include "gridtomo/image.hpp"

#include "gridtomo/error.hpp"

namespace gridtomo {

Image::Image(GridDims dims, ImageKind kind)
    : dims_(dims), values_(dims.pixel_count(), 0.0), kind_(kind) {}

Image::Image(GridDims dims, std::vector<double> values, ImageKind kind)
    : dims_(dims), values_(std::move(values)), kind_(kind) {
  if (values_.size() != dims_.pixel_count()) {
    throw Error(ErrorCode::DimensionMismatch,
                std::to_string(values_.size()) + " values for a " + std::to_string(dims.width) +
                    "x" + std::to_string(dims.height) + " grid");
  }
  if (kind_ == ImageKind::Binary) {
    for (double v : values_) {
      if (v != 0.0 && v != 1.0) {
        throw Error(ErrorCode::InvalidArgument, "binary image value " + std::to_string(v));
      }
    }
  }
}

Image Image::binary(GridDims dims, std::vector<double> values) {
  return Image(dims, std::move(values), ImageKind::Binary);
}

Image Image::as_real() const {
  Image out = *this;
  out.kind_ = ImageKind::Real;
  return out;
}

}  // namespace gridtomo
