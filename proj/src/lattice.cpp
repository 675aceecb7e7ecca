#include "gridtomo/lattice.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <set>
#include <sstream>

#include "gridtomo/error.hpp"

namespace gridtomo {

std::string to_string(Vec2 v) {
  return "(" + std::to_string(v.x) + "," + std::to_string(v.y) + ")";
}

GridDims::GridDims(int m, int n) : width(m), height(n) {
  if (m < 1 || n < 1) {
    throw Error(ErrorCode::InvalidArgument,
                "grid dimensions must be positive, got " + std::to_string(m) + "x" +
                    std::to_string(n));
  }
}

Direction Direction::normalized(int a, int b) {
  if (a == 0 && b == 0) throw Error(ErrorCode::ZeroVector, "direction (0,0)");
  const int g = std::gcd(a, b);
  a /= g;
  b /= g;
  if (a < 0 || (a == 0 && b < 0)) {
    a = -a;
    b = -b;
  }
  return Direction(a, b);
}

Direction normalize_direction(int a, int b) { return Direction::normalized(a, b); }

std::string to_string(Direction d) { return to_string(d.vec()); }

DirectionSet::DirectionSet(std::vector<Direction> dirs) : dirs_(std::move(dirs)) {
  if (dirs_.empty()) throw Error(ErrorCode::InvalidArgument, "empty direction set");
  for (std::size_t i = 0; i < dirs_.size(); ++i) {
    for (std::size_t j = i + 1; j < dirs_.size(); ++j) {
      if (dirs_[i] == dirs_[j]) {
        throw Error(ErrorCode::InvalidArgument, "repeated direction " + to_string(dirs_[i]));
      }
    }
  }
}

DirectionSet DirectionSet::from_pairs(std::span<const std::pair<int, int>> raw) {
  std::vector<Direction> dirs;
  dirs.reserve(raw.size());
  for (auto [a, b] : raw) dirs.push_back(Direction::normalized(a, b));
  return DirectionSet(std::move(dirs));
}

DirectionSet::DirectionSet(std::initializer_list<std::pair<int, int>> raw)
    : DirectionSet(from_pairs(std::span<const std::pair<int, int>>(raw.begin(), raw.size()))) {}

int DirectionSet::h() const {
  int h = 0;
  for (const auto& d : dirs_) h += d.a();
  return h;
}

int DirectionSet::k() const {
  int k = 0;
  for (const auto& d : dirs_) k += std::abs(d.b());
  return k;
}

std::string to_string(const DirectionSet& s) {
  std::ostringstream os;
  os << "{";
  for (std::size_t i = 0; i < s.size(); ++i) os << (i ? "," : "") << to_string(s[i]);
  os << "}";
  return os.str();
}

std::pair<int, int> sums_hk(const DirectionSet& s) { return {s.h(), s.k()}; }

bool is_valid(const DirectionSet& s, GridDims g) { return s.h() < g.width && s.k() < g.height; }

bool katz_condition(const DirectionSet& s, GridDims g) {
  return s.h() >= g.width || s.k() >= g.height;
}

std::string_view to_string(StructureSign s) {
  return s == StructureSign::Plus ? "PLUS" : "MINUS";
}

std::array<Vec2, 4> StructureCase::roles_of(const DirectionSet& s) const {
  std::array<Vec2, 4> u;
  for (int r = 0; r < 4; ++r) u[r] = s[static_cast<std::size_t>(roles[r])].vec();
  return u;
}

namespace {

void require_four(const DirectionSet& s, const char* what) {
  if (s.size() != 4) {
    throw Error(ErrorCode::InvalidArgument,
                std::string(what) + " needs exactly 4 directions, got " + std::to_string(s.size()));
  }
}

}  // namespace

std::vector<StructureCase> find_structures(const DirectionSet& s) {
  require_four(s, "find_structures");
  std::vector<StructureCase> found;
  for (StructureSign sign : {StructureSign::Minus, StructureSign::Plus}) {
    std::array<int, 4> perm{0, 1, 2, 3};
    do {
      StructureCase c{sign, perm};
      const auto u = c.roles_of(s);
      const Vec2 rhs = sign == StructureSign::Plus ? u[0] + u[1] + u[2] : u[0] + u[1] - u[2];
      if (rhs == u[3]) found.push_back(c);
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return found;
}

StructureCase detect_structure(const DirectionSet& s) {
  auto all = find_structures(s);
  if (all.empty()) {
    throw Error(ErrorCode::NoStructure, "no role assignment gives u4 = u1 + u2 ± u3 for " +
                                            to_string(s));
  }
  return all.front();
}

DPartition build_d_partition(const DirectionSet& s, GridDims g, const StructureCase& c) {
  const auto u = c.roles_of(s);
  const std::array<Vec2, 3> hat{u[0] - u[3], u[1] - u[3], u[0] + u[1]};

  DPartition out;
  auto add = [&](Vec2 v) {
    for (Vec2 w : {v, -v}) {
      if (std::find(out.d.begin(), out.d.end(), w) == out.d.end()) out.d.push_back(w);
    }
  };
  for (Vec2 v : u) add(v);
  for (Vec2 v : hat) add(v);

  const int dx = g.width - s.h();
  const int dy = g.height - s.k();
  const bool ties_to_a = std::min(dx, dy) == dx;
  for (Vec2 v : out.d) {
    const int aa = std::abs(v.x);
    const int bb = std::abs(v.y);
    if (aa > bb || (aa == bb && ties_to_a)) {
      out.pos_a.push_back(v);
    } else {
      out.pos_b.push_back(v);
    }
  }
  return out;
}

UniquenessReport check_binary_uniqueness(const DirectionSet& s, GridDims g) {
  require_four(s, "check_binary_uniqueness");
  UniquenessReport r;
  r.grid = g;
  r.h = s.h();
  r.k = s.k();
  r.valid = is_valid(s, g);
  r.katz = katz_condition(s, g);
  r.all_structures = find_structures(s);
  if (!r.all_structures.empty()) r.structure = r.all_structures.front();

  if (!r.valid) {
    r.reason = "not valid: need h < M and k < N";
    return r;
  }
  if (!r.structure) {
    r.reason = "no structure u4 = u1 + u2 ± u3";
    return r;
  }

  r.partition = build_d_partition(s, g, *r.structure);
  const int dx = g.width - r.h;
  const int dy = g.height - r.k;
  const int m = std::min(dx, dy);
  const auto& pa = r.partition.pos_a;
  const auto& pb = r.partition.pos_b;

  r.cond_iff1a = pa.empty() || std::all_of(pa.begin(), pa.end(),
                                           [&](Vec2 v) { return std::abs(v.x) >= m; });
  r.cond_iff1b = pb.empty() || std::all_of(pb.begin(), pb.end(),
                                           [&](Vec2 v) { return std::abs(v.y) >= m; });
  auto escapes = [&](Vec2 v) { return std::abs(v.x) >= dx || std::abs(v.y) >= dy; };
  r.cond_b = !(dx < dy) || std::all_of(pb.begin(), pb.end(), escapes);
  r.cond_a = !(dy < dx) || std::all_of(pa.begin(), pa.end(), escapes);

  r.is_binary_uniqueness_set = r.cond_iff1a && r.cond_iff1b && r.cond_b && r.cond_a;
  if (!r.is_binary_uniqueness_set) {
    std::string failed;
    if (!r.cond_iff1a) failed += " (3)";
    if (!r.cond_iff1b) failed += " (4)";
    if (!r.cond_b) failed += " (5)";
    if (!r.cond_a) failed += " (6)";
    r.reason = "conditions failed:" + failed;
  }
  return r;
}

DirectionSet construct_set_odd_n(int n) {
  if (n < 5 || n % 2 == 0) {
    throw Error(ErrorCode::BadN, "N must be odd and >= 5, got " + std::to_string(n));
  }
  const int p = (n - 1) / 2;
  const int q = (n - 3) / 2;
  return DirectionSet{{1, 0}, {0, 1}, {p, q}, {q, p}};
}

bool check_sufficient_window(const DirectionSet& s, GridDims g) {
  if (s.size() != 4 || !is_valid(s, g)) return false;

  int amin = s[0].a();
  int bmin = s[0].b();
  for (const auto& d : s) {
    amin = std::min(amin, d.a());
    bmin = std::min(bmin, d.b());
  }
  if (bmin < 0) return false;

  // u1 must realize both minima at once.
  int first = -1;
  for (std::size_t i = 0; i < 4; ++i) {
    if (s[i].a() == amin && s[i].b() == bmin) first = static_cast<int>(i);
  }
  if (first < 0) return false;

  std::vector<int> rest;
  for (int i = 0; i < 4; ++i) {
    if (i != first) rest.push_back(i);
  }
  const Vec2 u1 = s[first].vec();
  for (int j = 0; j < 3; ++j) {
    const Vec2 u4 = s[rest[j]].vec();
    const Vec2 u2 = s[rest[(j + 1) % 3]].vec();
    const Vec2 u3 = s[rest[(j + 2) % 3]].vec();
    if (u1 + u2 + u3 != u4) continue;
    const int r_sum = (u2.x - u1.x) + (u3.x - u1.x);
    const int s_sum = (u2.y - u1.y) + (u3.y - u1.y);
    // r1 + r2 >= (M - 7 a1) / 2 and s1 + s2 >= (N - 7 b1) / 2, kept in integers.
    return 2 * r_sum >= g.width - 7 * u1.x && 2 * s_sum >= g.height - 7 * u1.y;
  }
  return false;
}

}  // namespace gridtomo
