#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gridtomo/image.hpp"
#include "gridtomo/lattice.hpp"

namespace gridtomo {

enum class PhantomKind { File, Random, Shapes, Fixture };

/// Boundary classes of the SHAPES generator.
enum class ShapeClass { Smooth, Fragmented, Holed };

ShapeClass parse_shape_class(std::string_view name);
std::string_view to_string(ShapeClass c);

struct PhantomSpec {
  PhantomKind kind = PhantomKind::Random;
  GridDims dims{1, 1};
  double density = 0.5;
  std::uint64_t seed = 0;
  ShapeClass shape = ShapeClass::Smooth;
  std::filesystem::path path;
  std::string name;

  static PhantomSpec random(GridDims g, double density, std::uint64_t seed);
  static PhantomSpec shapes(GridDims g, ShapeClass c, std::uint64_t seed);
  static PhantomSpec fixture(std::string name);
  static PhantomSpec file(std::filesystem::path path);
};

/// Deterministic for a given spec. FILE images are thresholded at 1/2.
/// Throws InvalidArgument on a bad density or unknown fixture name.
Image generate_phantom(const PhantomSpec& spec);

/// Names accepted by PhantomSpec::fixture.
std::vector<std::string> fixture_names();

/// Uniform double in [0, 1) from the top 53 bits, identical on every platform.
double unit_uniform(std::uint64_t bits);

struct Metrics {
  double percent_correct = 0.0;
  std::size_t wrong_count = 0;
  std::vector<Vec2> wrong_pixels;
};

/// Throws DimensionMismatch.
Metrics compare(const Image& truth, const Image& recon);

}  // namespace gridtomo
