#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gridtomo/image.hpp"
#include "gridtomo/lattice.hpp"

namespace gridtomo {

/// Sparse integer polynomial in x, y; the key (i, j) stands for x^i y^j.
class LatticePolynomial {
 public:
  using Terms = std::map<Vec2, std::int64_t>;

  LatticePolynomial() = default;
  explicit LatticePolynomial(Terms terms);

  static LatticePolynomial one() { return LatticePolynomial(Terms{{{0, 0}, 1}}); }

  const Terms& terms() const { return terms_; }
  std::size_t term_count() const { return terms_.size(); }
  std::int64_t coefficient(Vec2 exponent) const;
  /// F(1, 1), the total mass.
  std::int64_t sum_of_coefficients() const;

  LatticePolynomial operator*(const LatticePolynomial& rhs) const;
  friend bool operator==(const LatticePolynomial&, const LatticePolynomial&) = default;

  /// Highest total degree first, e.g. "x^4y^4 - x^4y^3 + ... + 1".
  std::string to_string() const;

 private:
  Terms terms_;  // no zero coefficients
};

/// f_(a,b): x^a y^b - 1, x^a - y^-b, x - 1 or y - 1 depending on the signs of a, b.
LatticePolynomial binomial_factor(Direction d);

/// Product of the binomial factors over the set.
LatticePolynomial expand_fs(const DirectionSet& s);

struct WeightedPixel {
  Vec2 pos;
  int weight = 0;
};

/// The 15-pixel weakly bad configuration F_S of a set of binary uniqueness.
struct BadConfiguration {
  /// pixels[0] is λ0, the remaining ones in increasing exponent order.
  std::vector<WeightedPixel> pixels;
  int delta_index = -1;
  std::vector<int> iplus;   ///< weight +1, includes index 0
  std::vector<int> iminus;  ///< weight -1
  StructureCase structure;

  Vec2 lambda0() const { return pixels.front().pos; }
  Vec2 lambda_delta() const { return pixels.at(static_cast<std::size_t>(delta_index)).pos; }
  int delta_weight() const { return pixels.at(static_cast<std::size_t>(delta_index)).weight; }
};

/// Throws NotUniquenessSet unless F_S has 15 terms with exactly one of modulus 2.
BadConfiguration build_bad_configuration(const DirectionSet& s, const StructureCase& c);
BadConfiguration build_bad_configuration(const DirectionSet& s);

/// Rectangle of translations u = (p, q), 0 <= p < M-h, 0 <= q < N-k.
struct EnlargingRegion {
  int width = 0;
  int height = 0;

  std::size_t size() const { return static_cast<std::size_t>(width) * height; }
  bool contains(Vec2 u) const { return u.x >= 0 && u.x < width && u.y >= 0 && u.y < height; }
  std::size_t index(Vec2 u) const { return static_cast<std::size_t>(u.y) * width + u.x; }
  Vec2 point(std::size_t i) const {
    return {static_cast<int>(i % width), static_cast<int>(i / width)};
  }
  std::vector<Vec2> points() const;
};

EnlargingRegion enlarging_region(const DirectionSet& s, GridDims g);

/// (M-h)(N-k)
std::int64_t ghost_dimension(const DirectionSet& s, GridDims g);

/// For each pixel of H = ∪_u (F_S + u) the translations u (and the F_S term)
/// that reach it. Stored as CSR over the sorted pixel list.
class GhostRegionIndex {
 public:
  struct Cover {
    int u_index = 0;  ///< index into the enlarging region
    int term = 0;     ///< index into BadConfiguration::pixels
    int weight = 0;   ///< weight of that term
  };

  GhostRegionIndex() = default;
  GhostRegionIndex(const BadConfiguration& b, EnlargingRegion e, GridDims g);

  GridDims grid() const { return grid_; }
  const EnlargingRegion& region() const { return region_; }
  std::size_t delta_term() const { return static_cast<std::size_t>(delta_term_); }

  /// Sorted linear indices of the pixels of H.
  const std::vector<std::size_t>& pixels() const { return pixels_; }
  bool in_h(Vec2 p) const;
  /// Covers of a pixel, empty outside H.
  std::span<const Cover> covers(Vec2 p) const;
  std::span<const Cover> covers_at(std::size_t slot) const;

  std::vector<Vec2> eplus(Vec2 p) const;
  std::vector<Vec2> eminus(Vec2 p) const;
  /// u with p = λ_δ + u, if any.
  std::optional<Vec2> delta_translation(Vec2 p) const;
  /// |E+(p) ∪ E-(p)|, counting the λ_δ translate as one cover.
  std::size_t coverage(Vec2 p) const;
  /// Largest coverage over H.
  std::size_t max_coverage() const;

 private:
  std::ptrdiff_t slot_of(Vec2 p) const;

  GridDims grid_;
  EnlargingRegion region_;
  int delta_term_ = -1;
  std::vector<std::size_t> pixels_;
  std::vector<std::size_t> offsets_;
  std::vector<Cover> covers_;
};

GhostRegionIndex build_ghost_index(const BadConfiguration& b, EnlargingRegion e, GridDims g);

/// The basis ghost g_u = F_S translated by u. Throws OutOfRegion unless u ∈ E.
Image build_ghost_gu(const BadConfiguration& b, EnlargingRegion e, GridDims g, Vec2 u);

}  // namespace gridtomo
