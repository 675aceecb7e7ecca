#include <doctest.h>

#include <cmath>

#include "gridtomo/bra.hpp"
#include "gridtomo/error.hpp"
#include "gridtomo/oracle.hpp"
#include "support.hpp"

using namespace gridtomo;

namespace {

const DirectionSet kSmall{{1, 0}, {1, 2}, {0, 1}, {2, 1}};

std::vector<Image> brute_force(const SparseProjectionMatrix& a, const std::vector<std::int64_t>& p, GridDims g) {
  std::vector<Image> out;
  const std::size_t n = g.pixel_count();
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    std::vector<std::int64_t> x(n);
    for (std::size_t j = 0; j < n; ++j) x[j] = (mask >> j) & 1u;
    if (forward_project_exact(a, x) != p) continue;
    std::vector<double> v(x.begin(), x.end());
    out.push_back(Image::binary(g, v));
  }
  std::sort(out.begin(), out.end(), [](const Image& l, const Image& r) {
    return std::lexicographical_compare(l.values().begin(), l.values().end(), r.values().begin(), r.values().end());
  });
  return out;
}

}  // namespace

TEST_SUITE("oracle") {
  TEST_CASE("5x5 phantom is the only binary solution") {
    const auto a = build_matrix(kSmall, GridDims(5, 5));
    const Image ph = testsupport::sample_phantom();
    const auto r = enumerate_binary_solutions(a, forward_project(a, ph), 10);
    REQUIRE(r.solutions.size() == 1);
    CHECK(r.solutions.front() == ph);
    CHECK_FALSE(r.truncated);
  }

  TEST_CASE("two directions admit switching components") {
    const DirectionSet two{{1, 0}, {0, 1}};
    const GridDims g(5, 5);
    const auto a = build_matrix(two, g);
    // every permutation matrix has unit row and column sums
    Image diag = Image::zeros(g, ImageKind::Binary);
    for (int i = 0; i < 5; ++i) diag(i, i) = 1.0;
    const auto r = enumerate_binary_solutions(a, forward_project(a, diag), 1000);
    CHECK(r.solutions.size() == 120);
    const auto cap = enumerate_binary_solutions(a, forward_project(a, diag), 1);
    CHECK(cap.solutions.size() == 1);
    CHECK(cap.truncated);
  }

  TEST_CASE("zero projection has the zero image only") {
    for (const auto& fx : testsupport::fixture_pool()) {
      if (fx.grid.pixel_count() > 150) continue;
      const auto a = build_matrix(fx.dirs, fx.grid);
      const std::vector<std::int64_t> p(a.rows(), 0);
      const auto r = enumerate_binary_solutions(a, p, 5);
      REQUIRE(r.solutions.size() == 1);
      CHECK(r.solutions.front() == Image::zeros(fx.grid, ImageKind::Binary));
    }
  }

  TEST_CASE("enumeration agrees with brute force on 4x4") {
    const GridDims g(4, 4);
    for (const DirectionSet& s : {DirectionSet{{1, 0}, {0, 1}}, DirectionSet{{1, 0}, {0, 1}, {1, 1}},
                                  DirectionSet{{1, 1}, {1, -1}}}) {
      const auto a = build_matrix(s, g);
      for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const Image x = testsupport::random_binary(g, 0.5, seed);
        const auto p = forward_project(a, x);
        const auto got = enumerate_binary_solutions(a, p, 100000);
        const auto want = brute_force(a, integral_projection(p), g);
        CHECK_FALSE(got.truncated);
        CHECK(got.solutions == want);
      }
    }
  }

  TEST_CASE("integral projection") {
    CHECK(integral_projection(ProjectionVector{{0.0, 3.0}}) == std::vector<std::int64_t>{0, 3});
    CHECK_THROWS_AS(integral_projection(ProjectionVector{{0.5}}), Error);
    CHECK_THROWS_AS(integral_projection(ProjectionVector{{-1.0}}), Error);
  }

  TEST_CASE("dense solutions") {
    // Katz set: A is injective, the solution is the phantom
    const DirectionSet katz{{1, 0}, {0, 1}, {2, 1}, {1, 2}};
    const GridDims g(4, 4);
    const auto a = build_matrix(katz, g);
    CHECK(null_space_dimension(a) == 0);
    CHECK(dense_rank(a) == 16);
    const Image x = testsupport::random_binary(g, 0.5, 3);
    const Image xd = dense_min_norm(a, forward_project(a, x));
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::abs(xd.values()[i] - x.values()[i]) <= 1e-10);

    // uniqueness set: the minimum-norm solution is orthogonal to every ghost
    const GridDims g5(5, 5);
    const auto a5 = build_matrix(kSmall, g5);
    const Image xs = dense_min_norm(a5, forward_project(a5, testsupport::sample_phantom()));
    const auto b = build_bad_configuration(kSmall);
    const Image gu = build_ghost_gu(b, enlarging_region(kSmall, g5), g5, {0, 0});
    CHECK(std::abs(testsupport::dot(xs.values(), gu.values())) <= 1e-10);
    CHECK(null_space_dimension(a5) == 1);
  }

  TEST_CASE("closed-form weights") {
    const GridDims g(5, 5);
    const auto b = build_bad_configuration(kSmall);
    CHECK(alpha_closed_form(Image::zeros(g), b, {0, 0}) == 0.0);
    Image minus = Image::zeros(g, ImageKind::Binary);
    for (int i : b.iminus) minus.at(b.pixels[static_cast<std::size_t>(i)].pos) = 1.0;
    CHECK(alpha_closed_form(minus, b, {0, 0}) == doctest::Approx(4.0 / 9.0));
    Image plus = Image::zeros(g, ImageKind::Binary);
    for (int i : b.iplus) plus.at(b.pixels[static_cast<std::size_t>(i)].pos) = 1.0;
    plus.at(b.lambda_delta()) = 1.0;
    CHECK(alpha_closed_form(plus, b, {0, 0}) == doctest::Approx(-4.0 / 9.0));
    CHECK_THROWS_AS(alpha_closed_form(minus, b, {1, 0}), Error);
  }

  TEST_CASE("exact weights equal the closed form without overlaps") {
    const GridDims g(5, 5);
    const auto b = build_bad_configuration(kSmall);
    const auto e = enlarging_region(kSmall, g);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const Image x = testsupport::random_binary(g, 0.5, seed);
      CHECK(exact_alphas(x, b, e).alpha[0] == doctest::Approx(alpha_closed_form(x, b, {0, 0})).epsilon(1e-12));
    }
  }

  TEST_CASE("exact weights reconstruct x* from the phantom") {
    for (const auto& fx : testsupport::fixture_pool()) {
      if (fx.grid.pixel_count() > 400) continue;
      INFO(fx.name);
      const auto a = build_matrix(fx.dirs, fx.grid);
      const auto b = build_bad_configuration(fx.dirs);
      const auto e = enlarging_region(fx.dirs, fx.grid);
      const Image ph = testsupport::random_binary(fx.grid, 0.5, 21);
      const Image xs = dense_min_norm(a, forward_project(a, ph));
      const auto w = exact_alphas(ph, b, e);
      Image rebuilt = ph.as_real();
      for (const Vec2 u : e.points()) {
        const Image gu = build_ghost_gu(b, e, fx.grid, u);
        for (std::size_t j = 0; j < rebuilt.size(); ++j) rebuilt.values()[j] += w.at(u) * gu.values()[j];
      }
      for (std::size_t j = 0; j < xs.size(); ++j) CHECK(std::abs(rebuilt.values()[j] - xs.values()[j]) <= 1e-9);
      CHECK(w.max_abs() <= 4.0 / 9.0 + 1e-9);
    }
  }
}
