#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace gridtomo {

/// Integer pair. Used for pixels (x = ξ, y = η) and for raw direction
/// vectors (x = a, y = b) whose entries need not be coprime.
struct Vec2 {
  int x = 0;
  int y = 0;

  friend constexpr Vec2 operator+(Vec2 l, Vec2 r) { return {l.x + r.x, l.y + r.y}; }
  friend constexpr Vec2 operator-(Vec2 l, Vec2 r) { return {l.x - r.x, l.y - r.y}; }
  friend constexpr Vec2 operator-(Vec2 v) { return {-v.x, -v.y}; }
  friend constexpr auto operator<=>(const Vec2&, const Vec2&) = default;
};

std::string to_string(Vec2 v);

/// M×N pixel grid: 0 <= ξ < width (M), 0 <= η < height (N), y axis pointing down.
struct GridDims {
  int width = 0;
  int height = 0;

  GridDims() = default;
  GridDims(int m, int n);

  std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }
  bool contains(Vec2 p) const { return p.x >= 0 && p.x < width && p.y >= 0 && p.y < height; }
  /// Row-major linear index η·M + ξ.
  std::size_t index(Vec2 p) const { return static_cast<std::size_t>(p.y) * width + p.x; }
  Vec2 point(std::size_t i) const {
    return {static_cast<int>(i % width), static_cast<int>(i / width)};
  }
  friend bool operator==(const GridDims&, const GridDims&) = default;
};

/// A lattice direction (a, b): coprime, a >= 0, and (0, 1) / (1, 0) for the axes.
class Direction {
 public:
  /// Normalized representative of the line through (a, b). Throws ZeroVector on (0, 0).
  static Direction normalized(int a, int b);

  int a() const { return a_; }
  int b() const { return b_; }
  Vec2 vec() const { return {a_, b_}; }

  friend auto operator<=>(const Direction&, const Direction&) = default;

 private:
  Direction(int a, int b) : a_(a), b_(b) {}
  int a_ = 1;
  int b_ = 0;
};

Direction normalize_direction(int a, int b);
std::string to_string(Direction d);

/// Ordered sequence of pairwise distinct directions, in the order given.
/// Uniqueness theory only applies to four directions; the projector accepts any count.
class DirectionSet {
 public:
  DirectionSet() = default;
  explicit DirectionSet(std::vector<Direction> dirs);
  DirectionSet(std::initializer_list<std::pair<int, int>> raw);

  static DirectionSet from_pairs(std::span<const std::pair<int, int>> raw);

  std::size_t size() const { return dirs_.size(); }
  const Direction& operator[](std::size_t i) const { return dirs_[i]; }
  auto begin() const { return dirs_.begin(); }
  auto end() const { return dirs_.end(); }
  const std::vector<Direction>& directions() const { return dirs_; }

  /// h = Σ a_r
  int h() const;
  /// k = Σ |b_r|
  int k() const;

  friend bool operator==(const DirectionSet&, const DirectionSet&) = default;

 private:
  std::vector<Direction> dirs_;
};

std::string to_string(const DirectionSet& s);

std::pair<int, int> sums_hk(const DirectionSet& s);

/// h < M and k < N.
bool is_valid(const DirectionSet& s, GridDims g);

/// h >= M or k >= N: no ghost fits inside the grid.
bool katz_condition(const DirectionSet& s, GridDims g);

enum class StructureSign { Plus, Minus };

std::string_view to_string(StructureSign s);

/// Role assignment u4 = u1 + u2 + u3 (Plus) or u4 = u1 + u2 - u3 (Minus).
struct StructureCase {
  StructureSign sign = StructureSign::Minus;
  /// roles[r] is the stored index of u_{r+1}.
  std::array<int, 4> roles{0, 1, 2, 3};

  /// u_{r+1} as integer vectors.
  std::array<Vec2, 4> roles_of(const DirectionSet& s) const;
  friend bool operator==(const StructureCase&, const StructureCase&) = default;
};

/// Every role assignment satisfying the identity, in search order: permutations
/// in lexicographic order, Minus before Plus.
std::vector<StructureCase> find_structures(const DirectionSet& s);

/// First entry of find_structures. Throws NoStructure if there is none.
StructureCase detect_structure(const DirectionSet& s);

struct DPartition {
  std::vector<Vec2> d;
  std::vector<Vec2> pos_a;  ///< |a| > |b|, plus ties when min{M-h, N-k} = M-h
  std::vector<Vec2> pos_b;
};

/// D = ±S ∪ ±Ŝ with Ŝ = {u1 - u4, u2 - u4, u1 + u2}, split into the A / B sets.
DPartition build_d_partition(const DirectionSet& s, GridDims g, const StructureCase& c);

struct UniquenessReport {
  GridDims grid;
  int h = 0;
  int k = 0;
  bool valid = false;
  bool katz = false;
  std::optional<StructureCase> structure;
  std::vector<StructureCase> all_structures;
  DPartition partition;
  bool cond_iff1a = false;
  bool cond_iff1b = false;
  bool cond_b = false;
  bool cond_a = false;
  bool is_binary_uniqueness_set = false;
  std::string reason;
};

/// Full binary-uniqueness decision for four directions. Never throws for a
/// four-direction set; failures are recorded in the report.
UniquenessReport check_binary_uniqueness(const DirectionSet& s, GridDims g);

/// {(1,0), (0,1), ((N-1)/2, (N-3)/2), ((N-3)/2, (N-1)/2)} for odd N >= 5.
DirectionSet construct_set_odd_n(int n);

/// Sufficient condition built from a1 = min a_i, b1 = min b_i >= 0 and
/// u4 = u1 + u2 + u3. A true result implies check_binary_uniqueness passes.
bool check_sufficient_window(const DirectionSet& s, GridDims g);

}  // namespace gridtomo
