#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "gridtomo/ghost.hpp"
#include "gridtomo/image.hpp"
#include "gridtomo/lattice.hpp"
#include "gridtomo/projector.hpp"

namespace testsupport {

using namespace gridtomo;

struct Fixture {
  std::string name;
  DirectionSet dirs;
  GridDims grid;
  /// λ0 + E meets no other translate. Fails for the 7x7 minus set, which still
  /// passes the uniqueness conditions.
  bool lambda0_isolated = true;
};

/// Sets of binary uniqueness used across the suites.
inline std::vector<Fixture> fixture_pool() {
  return {
      {"5x5 worked example", DirectionSet{{1, 0}, {1, 2}, {0, 1}, {2, 1}}, GridDims(5, 5)},
      {"7x7 plus", DirectionSet{{1, -2}, {1, 0}, {1, 1}, {3, -1}}, GridDims(7, 7)},
      {"7x7 minus", DirectionSet{{0, 1}, {1, -1}, {1, 3}, {2, 1}}, GridDims(7, 7), false},
      {"9x12 minus", DirectionSet{{1, -1}, {2, -1}, {2, 1}, {3, 1}}, GridDims(9, 12)},
      {"9x12 plus", DirectionSet{{1, -2}, {1, 0}, {2, 1}, {4, -1}}, GridDims(9, 12)},
      {"10x10 minus", DirectionSet{{1, -4}, {1, -2}, {3, -1}, {3, 1}}, GridDims(10, 10)},
      {"11x11 odd-n", construct_set_odd_n(11), GridDims(11, 11)},
      {"51x51 four-term sum", DirectionSet{{3, 5}, {5, 3}, {16, 15}, {24, 23}}, GridDims(51, 51)},
  };
}

/// The 5×5 phantom, rows top to bottom.
inline Image sample_phantom() {
  return Image::binary(GridDims(5, 5), {0, 1, 1, 1, 1, 0, 1, 1, 1, 1, 0, 0, 1, 1, 0,
                                        0, 0, 0, 0, 0, 0, 0, 0, 0, 0});
}

inline Image random_binary(GridDims g, double density, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution bit(density);
  std::vector<double> v(g.pixel_count());
  for (double& e : v) e = bit(rng) ? 1.0 : 0.0;
  return Image::binary(g, std::move(v));
}

/// Product of the binomials by brute force over the 2^d choices of one monomial per factor.
inline std::map<std::pair<int, int>, long> naive_fs(const DirectionSet& s) {
  std::map<std::pair<int, int>, long> out;
  const std::size_t d = s.size();
  for (unsigned mask = 0; mask < (1u << d); ++mask) {
    int ex = 0, ey = 0;
    long c = 1;
    for (std::size_t r = 0; r < d; ++r) {
      const int a = s[r].a(), b = s[r].b();
      // factor = P - Q, with P the "leading" monomial
      int px, py, qx, qy;
      if (a == 0) {
        px = 0, py = 1, qx = 0, qy = 0;
      } else if (b >= 0) {
        px = a, py = b, qx = 0, qy = 0;
      } else {
        px = a, py = 0, qx = 0, qy = -b;
      }
      if (mask & (1u << r)) {
        ex += qx, ey += qy, c = -c;
      } else {
        ex += px, ey += py;
      }
    }
    out[{ex, ey}] += c;
  }
  std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
  return out;
}

/// Dense 0/1 matrix: rows grouped by direction in stored order, lines by increasing
/// intercept a·y - b·x among those hitting the grid.
inline std::vector<std::vector<int>> naive_matrix(const DirectionSet& s, GridDims g) {
  std::vector<std::vector<int>> rows;
  for (const auto& d : s) {
    std::vector<int> ts;
    for (int y = 0; y < g.height; ++y) {
      for (int x = 0; x < g.width; ++x) ts.push_back(d.a() * y - d.b() * x);
    }
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    for (int t : ts) {
      std::vector<int> row(g.pixel_count(), 0);
      for (int y = 0; y < g.height; ++y) {
        for (int x = 0; x < g.width; ++x) {
          if (d.a() * y - d.b() * x == t) row[g.index({x, y})] = 1;
        }
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

inline std::vector<double> naive_project(const std::vector<std::vector<int>>& a, const Image& x) {
  std::vector<double> p;
  for (const auto& row : a) {
    double s = 0;
    for (std::size_t j = 0; j < row.size(); ++j) s += row[j] * x.values()[j];
    p.push_back(s);
  }
  return p;
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

inline double l1(const ProjectionVector& p) {
  double s = 0;
  for (double v : p.values) s += std::abs(v);
  return s;
}

}  // namespace testsupport
