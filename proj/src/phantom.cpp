#include "gridtomo/phantom.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "gridtomo/error.hpp"
#include "gridtomo/image_io.hpp"

namespace gridtomo {

namespace {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  double uniform() { return unit_uniform(eng_()); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int below(int n) { return static_cast<int>(uniform() * n); }

 private:
  std::mt19937_64 eng_;
};

struct Ellipse {
  double cx, cy, rx, ry, angle;

  bool contains(double x, double y) const {
    const double c = std::cos(angle), s = std::sin(angle);
    const double u = ((x - cx) * c + (y - cy) * s) / rx;
    const double v = (-(x - cx) * s + (y - cy) * c) / ry;
    return u * u + v * v <= 1.0;
  }
};

Ellipse random_ellipse(Rng& rng, GridDims g, double rmin, double rmax, double margin) {
  const double m = std::min(g.width, g.height);
  Ellipse e{};
  e.rx = rng.uniform(rmin, rmax) * m;
  e.ry = rng.uniform(rmin, rmax) * m;
  e.cx = rng.uniform(margin, 1.0 - margin) * (g.width - 1);
  e.cy = rng.uniform(margin, 1.0 - margin) * (g.height - 1);
  e.angle = rng.uniform(0.0, std::numbers::pi);
  return e;
}

/// Star-shaped blob r(θ) = r0 (1 + Σ a_k cos(kθ + φ_k)).
struct Blob {
  double cx, cy, r0;
  std::vector<double> amp, phase;

  bool contains(double x, double y) const {
    const double dx = x - cx, dy = y - cy;
    const double th = std::atan2(dy, dx);
    double r = 1.0;
    for (std::size_t k = 0; k < amp.size(); ++k) {
      r += amp[k] * std::cos(static_cast<double>(k + 2) * th + phase[k]);
    }
    return std::hypot(dx, dy) <= r0 * r;
  }
};

Image smooth(GridDims g, Rng& rng) {
  std::vector<Ellipse> parts;
  parts.push_back({(g.width - 1) / 2.0, (g.height - 1) / 2.0,
                   rng.uniform(0.25, 0.38) * g.width, rng.uniform(0.25, 0.38) * g.height,
                   rng.uniform(0.0, std::numbers::pi)});
  const int extra = 1 + rng.below(2);
  for (int i = 0; i < extra; ++i) parts.push_back(random_ellipse(rng, g, 0.1, 0.2, 0.3));
  Image img = Image::zeros(g, ImageKind::Binary);
  for (int y = 0; y < g.height; ++y) {
    for (int x = 0; x < g.width; ++x) {
      for (const auto& e : parts) {
        if (e.contains(x, y)) {
          img(x, y) = 1.0;
          break;
        }
      }
    }
  }
  return img;
}

Image fragmented(GridDims g, Rng& rng) {
  Blob b{(g.width - 1) / 2.0, (g.height - 1) / 2.0, 0.32 * std::min(g.width, g.height), {}, {}};
  for (int k = 0; k < 14; ++k) {
    b.amp.push_back(rng.uniform(0.0, 0.25) / (1.0 + 0.15 * k));
    b.phase.push_back(rng.uniform(0.0, 2.0 * std::numbers::pi));
  }
  const Ellipse hole = random_ellipse(rng, g, 0.03, 0.06, 0.45);
  Image img = Image::zeros(g, ImageKind::Binary);
  for (int y = 0; y < g.height; ++y) {
    for (int x = 0; x < g.width; ++x) {
      img(x, y) = b.contains(x, y) && !hole.contains(x, y) ? 1.0 : 0.0;
    }
  }
  // Ragged edge: flip a share of the boundary pixels.
  Image out = img;
  for (int y = 0; y < g.height; ++y) {
    for (int x = 0; x < g.width; ++x) {
      bool edge = false;
      for (Vec2 d : {Vec2{1, 0}, Vec2{-1, 0}, Vec2{0, 1}, Vec2{0, -1}}) {
        const Vec2 q{x + d.x, y + d.y};
        if (g.contains(q) && img.at(q) != img(x, y)) edge = true;
      }
      if (edge && rng.uniform() < 0.3) out(x, y) = 1.0 - img(x, y);
    }
  }
  return out;
}

Image holed(GridDims g, Rng& rng) {
  const Ellipse body{(g.width - 1) / 2.0, (g.height - 1) / 2.0, 0.42 * g.width, 0.36 * g.height,
                     rng.uniform(-0.3, 0.3)};
  std::vector<Ellipse> holes;
  const int n = 4 + rng.below(5);
  for (int i = 0; i < n; ++i) holes.push_back(random_ellipse(rng, g, 0.025, 0.08, 0.25));
  Image img = Image::zeros(g, ImageKind::Binary);
  for (int y = 0; y < g.height; ++y) {
    for (int x = 0; x < g.width; ++x) {
      bool in = body.contains(x, y);
      for (const auto& h : holes) in = in && !h.contains(x, y);
      img(x, y) = in ? 1.0 : 0.0;
    }
  }
  return img;
}

Image sample_5x5() {
  return Image::binary(GridDims(5, 5), {0, 1, 1, 1, 1,  //
                                        0, 1, 1, 1, 1,  //
                                        0, 0, 1, 1, 0,  //
                                        0, 0, 0, 0, 0,  //
                                        0, 0, 0, 0, 0});
}

}  // namespace

ShapeClass parse_shape_class(std::string_view name) {
  if (name == "smooth") return ShapeClass::Smooth;
  if (name == "fragmented") return ShapeClass::Fragmented;
  if (name == "holed") return ShapeClass::Holed;
  throw Error(ErrorCode::InvalidArgument, "unknown shape class '" + std::string(name) + "'");
}

std::string_view to_string(ShapeClass c) {
  switch (c) {
    case ShapeClass::Smooth: return "smooth";
    case ShapeClass::Fragmented: return "fragmented";
    case ShapeClass::Holed: return "holed";
  }
  return "?";
}

PhantomSpec PhantomSpec::random(GridDims g, double density, std::uint64_t seed) {
  PhantomSpec s;
  s.kind = PhantomKind::Random;
  s.dims = g;
  s.density = density;
  s.seed = seed;
  return s;
}

PhantomSpec PhantomSpec::shapes(GridDims g, ShapeClass c, std::uint64_t seed) {
  PhantomSpec s;
  s.kind = PhantomKind::Shapes;
  s.dims = g;
  s.shape = c;
  s.seed = seed;
  return s;
}

PhantomSpec PhantomSpec::fixture(std::string name) {
  PhantomSpec s;
  s.kind = PhantomKind::Fixture;
  s.name = std::move(name);
  return s;
}

PhantomSpec PhantomSpec::file(std::filesystem::path path) {
  PhantomSpec s;
  s.kind = PhantomKind::File;
  s.path = std::move(path);
  return s;
}

std::vector<std::string> fixture_names() { return {"sample-5x5"}; }

double unit_uniform(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

Image generate_phantom(const PhantomSpec& spec) {
  switch (spec.kind) {
    case PhantomKind::File:
      return threshold(load_image(spec.path));
    case PhantomKind::Fixture:
      if (spec.name == "sample-5x5") return sample_5x5();
      throw Error(ErrorCode::InvalidArgument, "unknown fixture '" + spec.name + "'");
    case PhantomKind::Random: {
      if (!(spec.density >= 0.0 && spec.density <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "density must lie in [0, 1]");
      }
      Rng rng(spec.seed);
      std::vector<double> v(spec.dims.pixel_count());
      for (double& e : v) e = rng.uniform() < spec.density ? 1.0 : 0.0;
      return Image::binary(spec.dims, std::move(v));
    }
    case PhantomKind::Shapes: {
      Rng rng(spec.seed);
      switch (spec.shape) {
        case ShapeClass::Smooth: return smooth(spec.dims, rng);
        case ShapeClass::Fragmented: return fragmented(spec.dims, rng);
        case ShapeClass::Holed: return holed(spec.dims, rng);
      }
    }
  }
  throw Error(ErrorCode::InvalidArgument, "bad phantom spec");
}

Metrics compare(const Image& truth, const Image& recon) {
  if (truth.dims() != recon.dims()) throw Error(ErrorCode::DimensionMismatch, "compare: dims differ");
  Metrics m;
  const auto a = truth.values();
  const auto b = recon.values();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) m.wrong_pixels.push_back(truth.dims().point(i));
  }
  m.wrong_count = m.wrong_pixels.size();
  m.percent_correct = 100.0 * static_cast<double>(a.size() - m.wrong_count) / static_cast<double>(a.size());
  return m;
}

}  // namespace gridtomo
