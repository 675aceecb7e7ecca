#include "gridtomo/ghost.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>
#include <tuple>

#include "gridtomo/error.hpp"

namespace gridtomo {

LatticePolynomial::LatticePolynomial(Terms terms) : terms_(std::move(terms)) {
  std::erase_if(terms_, [](const auto& kv) { return kv.second == 0; });
}

std::int64_t LatticePolynomial::coefficient(Vec2 exponent) const {
  auto it = terms_.find(exponent);
  return it == terms_.end() ? 0 : it->second;
}

std::int64_t LatticePolynomial::sum_of_coefficients() const {
  std::int64_t s = 0;
  for (const auto& [e, c] : terms_) s += c;
  return s;
}

LatticePolynomial LatticePolynomial::operator*(const LatticePolynomial& rhs) const {
  Terms out;
  for (const auto& [e1, c1] : terms_) {
    for (const auto& [e2, c2] : rhs.terms_) out[e1 + e2] += c1 * c2;
  }
  return LatticePolynomial(std::move(out));
}

std::string LatticePolynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::vector<std::pair<Vec2, std::int64_t>> ordered(terms_.begin(), terms_.end());
  std::sort(ordered.begin(), ordered.end(), [](const auto& l, const auto& r) {
    const int dl = l.first.x + l.first.y;
    const int dr = r.first.x + r.first.y;
    if (dl != dr) return dl > dr;
    return l.first > r.first;
  });
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : ordered) {
    const std::int64_t mag = c < 0 ? -c : c;
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    const bool constant = e.x == 0 && e.y == 0;
    if (mag != 1 || constant) os << mag;
    if (e.x > 0) os << "x" << (e.x > 1 ? "^" + std::to_string(e.x) : "");
    if (e.y > 0) os << "y" << (e.y > 1 ? "^" + std::to_string(e.y) : "");
  }
  return os.str();
}

LatticePolynomial binomial_factor(Direction d) {
  const int a = d.a();
  const int b = d.b();
  using T = LatticePolynomial::Terms;
  if (a == 0) return LatticePolynomial(T{{{0, 1}, 1}, {{0, 0}, -1}});
  if (b == 0) return LatticePolynomial(T{{{1, 0}, 1}, {{0, 0}, -1}});
  if (b > 0) return LatticePolynomial(T{{{a, b}, 1}, {{0, 0}, -1}});
  return LatticePolynomial(T{{{a, 0}, 1}, {{0, -b}, -1}});
}

LatticePolynomial expand_fs(const DirectionSet& s) {
  LatticePolynomial f = LatticePolynomial::one();
  for (const auto& d : s) f = f * binomial_factor(d);
  return f;
}

BadConfiguration build_bad_configuration(const DirectionSet& s, const StructureCase& c) {
  if (s.size() != 4) {
    throw Error(ErrorCode::NotUniquenessSet, "bad configuration needs four directions");
  }
  const LatticePolynomial f = expand_fs(s);
  if (f.term_count() != 15) {
    throw Error(ErrorCode::NotUniquenessSet,
                "F_S has " + std::to_string(f.term_count()) + " terms, expected 15");
  }
  int doubles = 0;
  for (const auto& [e, coef] : f.terms()) {
    if (std::abs(coef) == 2) {
      ++doubles;
    } else if (std::abs(coef) != 1) {
      throw Error(ErrorCode::NotUniquenessSet, "F_S coefficient " + std::to_string(coef));
    }
  }
  if (doubles != 1) {
    throw Error(ErrorCode::NotUniquenessSet,
                "F_S has " + std::to_string(doubles) + " double points, expected 1");
  }

  // λ0 is the lowest term on the y axis: the monomial of the empty subset,
  // shifted up by Σ|b| over the directions with b < 0.
  const auto first = f.terms().begin();
  int shift = 0;
  for (const auto& d : s) {
    if (d.b() < 0) shift -= d.b();
  }
  if (first->first != Vec2{0, shift} || first->second != 1) {
    throw Error(ErrorCode::NotUniquenessSet, "unexpected y-axis term " + to_string(first->first));
  }

  BadConfiguration b;
  b.structure = c;
  for (const auto& [e, coef] : f.terms()) {
    b.pixels.push_back({e, static_cast<int>(coef)});
  }
  for (std::size_t i = 0; i < b.pixels.size(); ++i) {
    const int w = b.pixels[i].weight;
    if (w == 1) b.iplus.push_back(static_cast<int>(i));
    if (w == -1) b.iminus.push_back(static_cast<int>(i));
    if (std::abs(w) == 2) b.delta_index = static_cast<int>(i);
  }

  const auto u = c.roles_of(s);
  const Vec2 lambda0 = b.lambda0();
  const bool minus = c.sign == StructureSign::Minus;
  const Vec2 expected_delta = minus ? lambda0 + u[0] + u[1] : lambda0 + u[3];
  const int expected_weight = minus ? 2 : -2;
  const std::size_t expected_plus = minus ? 6 : 8;
  if (b.lambda_delta() != expected_delta || b.delta_weight() != expected_weight ||
      b.iplus.size() != expected_plus || b.iplus.size() + b.iminus.size() != 14) {
    throw Error(ErrorCode::NotUniquenessSet,
                "double point " + to_string(b.lambda_delta()) + " with weight " +
                    std::to_string(b.delta_weight()) + " does not match the " +
                    std::string(to_string(c.sign)) + " structure");
  }
  return b;
}

BadConfiguration build_bad_configuration(const DirectionSet& s) {
  return build_bad_configuration(s, detect_structure(s));
}

std::vector<Vec2> EnlargingRegion::points() const {
  std::vector<Vec2> out;
  out.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) out.push_back(point(i));
  return out;
}

EnlargingRegion enlarging_region(const DirectionSet& s, GridDims g) {
  if (!is_valid(s, g)) {
    throw Error(ErrorCode::InvalidArgument, "enlarging region needs a valid set");
  }
  return {g.width - s.h(), g.height - s.k()};
}

std::int64_t ghost_dimension(const DirectionSet& s, GridDims g) {
  return static_cast<std::int64_t>(g.width - s.h()) * (g.height - s.k());
}

GhostRegionIndex::GhostRegionIndex(const BadConfiguration& b, EnlargingRegion e, GridDims g)
    : grid_(g), region_(e), delta_term_(b.delta_index) {
  struct Entry {
    std::size_t pixel;
    Cover cover;
  };
  std::vector<Entry> entries;
  entries.reserve(e.size() * b.pixels.size());
  // Iterating u-major over terms matches "differences (ξ,η) - u tested against F_S".
  for (std::size_t ui = 0; ui < e.size(); ++ui) {
    const Vec2 u = e.point(ui);
    for (std::size_t t = 0; t < b.pixels.size(); ++t) {
      const Vec2 p = b.pixels[t].pos + u;
      if (!g.contains(p)) {
        throw Error(ErrorCode::OutOfRegion, "F_S + " + to_string(u) + " leaves the grid");
      }
      entries.push_back(
          {g.index(p), Cover{static_cast<int>(ui), static_cast<int>(t), b.pixels[t].weight}});
    }
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& l, const Entry& r) {
    return std::tie(l.pixel, l.cover.u_index) < std::tie(r.pixel, r.cover.u_index);
  });
  covers_.reserve(entries.size());
  for (const auto& en : entries) {
    if (pixels_.empty() || pixels_.back() != en.pixel) {
      pixels_.push_back(en.pixel);
      offsets_.push_back(covers_.size());
    }
    covers_.push_back(en.cover);
  }
  offsets_.push_back(covers_.size());
}

std::ptrdiff_t GhostRegionIndex::slot_of(Vec2 p) const {
  if (!grid_.contains(p)) return -1;
  const std::size_t lin = grid_.index(p);
  auto it = std::lower_bound(pixels_.begin(), pixels_.end(), lin);
  if (it == pixels_.end() || *it != lin) return -1;
  return it - pixels_.begin();
}

bool GhostRegionIndex::in_h(Vec2 p) const { return slot_of(p) >= 0; }

std::span<const GhostRegionIndex::Cover> GhostRegionIndex::covers_at(std::size_t slot) const {
  return std::span<const Cover>(covers_).subspan(offsets_[slot], offsets_[slot + 1] - offsets_[slot]);
}

std::span<const GhostRegionIndex::Cover> GhostRegionIndex::covers(Vec2 p) const {
  const auto slot = slot_of(p);
  if (slot < 0) return {};
  return covers_at(static_cast<std::size_t>(slot));
}

std::vector<Vec2> GhostRegionIndex::eplus(Vec2 p) const {
  std::vector<Vec2> out;
  for (const auto& c : covers(p)) {
    if (c.weight == 1) out.push_back(region_.point(static_cast<std::size_t>(c.u_index)));
  }
  return out;
}

std::vector<Vec2> GhostRegionIndex::eminus(Vec2 p) const {
  std::vector<Vec2> out;
  for (const auto& c : covers(p)) {
    if (c.weight == -1) out.push_back(region_.point(static_cast<std::size_t>(c.u_index)));
  }
  return out;
}

std::optional<Vec2> GhostRegionIndex::delta_translation(Vec2 p) const {
  for (const auto& c : covers(p)) {
    if (c.term == delta_term_) return region_.point(static_cast<std::size_t>(c.u_index));
  }
  return std::nullopt;
}

std::size_t GhostRegionIndex::coverage(Vec2 p) const { return covers(p).size(); }

std::size_t GhostRegionIndex::max_coverage() const {
  std::size_t m = 0;
  for (std::size_t s = 0; s + 1 < offsets_.size(); ++s) {
    m = std::max(m, offsets_[s + 1] - offsets_[s]);
  }
  return m;
}

GhostRegionIndex build_ghost_index(const BadConfiguration& b, EnlargingRegion e, GridDims g) {
  return GhostRegionIndex(b, e, g);
}

Image build_ghost_gu(const BadConfiguration& b, EnlargingRegion e, GridDims g, Vec2 u) {
  if (!e.contains(u)) {
    throw Error(ErrorCode::OutOfRegion, to_string(u) + " is outside the enlarging region");
  }
  Image img = Image::zeros(g);
  for (const auto& px : b.pixels) {
    const Vec2 p = px.pos + u;
    if (!g.contains(p)) throw Error(ErrorCode::OutOfRegion, "ghost pixel " + to_string(p));
    img.at(p) = px.weight;
  }
  return img;
}

}  // namespace gridtomo
