#include "gridtomo/image_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "gridtomo/error.hpp"

namespace gridtomo {

namespace {

[[noreturn]] void parse_fail(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + what);
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

template <class T>
bool parse_number(std::string_view s, T& out) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && !s.empty();
}

/// Whitespace-separated tokens with '#' comments, as in PGM headers.
class PgmTokens {
 public:
  explicit PgmTokens(std::string_view text) : text_(text) {}

  std::string_view next() {
    skip();
    if (pos_ >= text_.size()) parse_fail(line_, "unexpected end of file");
    const std::size_t b = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    return text_.substr(b, pos_ - b);
  }

  int next_int(const char* what) {
    int v = 0;
    const std::size_t line = line_;
    if (!parse_number(next(), v)) parse_fail(line, std::string("bad ") + what);
    return v;
  }

  /// After the maxval: exactly one whitespace byte precedes the raster.
  std::size_t raster_start() {
    if (pos_ >= text_.size()) parse_fail(line_, "missing raster");
    return pos_ + 1;
  }
  std::size_t line() const { return line_; }
  bool at_end() {
    skip();
    return pos_ >= text_.size();
  }

 private:
  void skip() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        if (c == '\n') ++line_;
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
};

Image from_samples(GridDims g, const std::vector<long>& samples, long maxval) {
  bool binary = true;
  std::vector<double> v(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    binary = binary && (samples[i] == 0 || samples[i] == maxval);
    v[i] = static_cast<double>(samples[i]) / static_cast<double>(maxval);
  }
  return Image(g, std::move(v), binary ? ImageKind::Binary : ImageKind::Real);
}

Image parse_pgm(std::string_view text) {
  PgmTokens tok(text);
  const std::string_view magic = tok.next();
  const bool ascii = magic == "P2";
  if (!ascii && magic != "P5") parse_fail(1, "unknown magic " + std::string(magic));
  const int w = tok.next_int("width");
  const int h = tok.next_int("height");
  const int maxval = tok.next_int("maxval");
  if (w <= 0 || h <= 0) parse_fail(tok.line(), "non-positive dimensions");
  if (maxval <= 0 || maxval > 65535) parse_fail(tok.line(), "maxval out of range");
  const GridDims g(w, h);
  std::vector<long> samples(g.pixel_count());
  if (ascii) {
    for (auto& s : samples) {
      const std::size_t line = tok.line();
      if (tok.at_end()) parse_fail(tok.line(), "expected " + std::to_string(samples.size()) + " samples");
      if (!parse_number(tok.next(), s) || s < 0 || s > maxval) parse_fail(line, "bad sample");
    }
    if (!tok.at_end()) parse_fail(tok.line(), "trailing data after raster");
  } else {
    const std::size_t start = tok.raster_start();
    const std::size_t bytes = maxval < 256 ? 1 : 2;
    if (text.size() != start + bytes * samples.size()) {
      parse_fail(tok.line(), "raster holds " + std::to_string(text.size() - std::min(text.size(), start)) +
                                 " bytes, expected " + std::to_string(bytes * samples.size()));
    }
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const auto* p = reinterpret_cast<const unsigned char*>(text.data() + start + bytes * i);
      samples[i] = bytes == 1 ? p[0] : (p[0] << 8) | p[1];
      if (samples[i] > maxval) parse_fail(tok.line(), "sample above maxval");
    }
  }
  return from_samples(g, samples, maxval);
}

Image parse_csv(std::string_view text) {
  std::vector<double> v;
  int width = -1;
  int height = 0;
  std::size_t line = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    const std::string_view row = trim(text.substr(pos, eol - pos));
    ++line;
    pos = eol + 1;
    if (row.empty()) continue;
    int cols = 0;
    std::size_t c = 0;
    while (true) {
      const std::size_t comma = row.find(',', c);
      const std::string_view cell = row.substr(c, comma == std::string_view::npos ? row.npos : comma - c);
      double d = 0;
      if (!parse_number(cell, d) || !std::isfinite(d)) {
        parse_fail(line, "bad value '" + std::string(trim(cell)) + "'");
      }
      v.push_back(d);
      ++cols;
      if (comma == std::string_view::npos) break;
      c = comma + 1;
    }
    if (width >= 0 && cols != width) {
      parse_fail(line, std::to_string(cols) + " columns, expected " + std::to_string(width));
    }
    width = cols;
    ++height;
  }
  if (height == 0) parse_fail(line, "empty image");
  const bool binary = std::all_of(v.begin(), v.end(), [](double d) { return d == 0.0 || d == 1.0; });
  return Image(GridDims(width, height), std::move(v), binary ? ImageKind::Binary : ImageKind::Real);
}

void require_dims(const Image& img, std::optional<GridDims> expect) {
  if (expect && img.dims() != *expect) {
    throw Error(ErrorCode::DimensionMismatch,
                "image is " + std::to_string(img.dims().width) + "x" +
                    std::to_string(img.dims().height) + ", expected " +
                    std::to_string(expect->width) + "x" + std::to_string(expect->height));
  }
}

std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    out.push_back(trim(text.substr(pos, eol - pos)));
    pos = eol + 1;
  }
  while (!out.empty() && out.back().empty()) out.pop_back();
  return out;
}

std::vector<std::string_view> fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos < line.size()) {
    const std::size_t b = line.find_first_not_of(" \t", pos);
    if (b == std::string_view::npos) break;
    std::size_t e = line.find_first_of(" \t", b);
    if (e == std::string_view::npos) e = line.size();
    out.push_back(line.substr(b, e - b));
    pos = e;
  }
  return out;
}

std::string without_code(const Error& e) {
  const std::string_view msg = e.what();
  const std::string prefix = std::string(to_string(e.code())) + ": ";
  return std::string(msg.starts_with(prefix) ? msg.substr(prefix.size()) : msg);
}

nlohmann::json points_json(const std::vector<Vec2>& pts) {
  nlohmann::json a = nlohmann::json::array();
  for (const Vec2& p : pts) a.push_back({p.x, p.y});
  return a;
}

}  // namespace

ImageFormat parse_image_format(std::string_view name) {
  if (name == "pgm-ascii") return ImageFormat::PgmAscii;
  if (name == "pgm-binary" || name == "pgm") return ImageFormat::PgmBinary;
  if (name == "csv") return ImageFormat::Csv;
  throw Error(ErrorCode::InvalidArgument, "unknown image format '" + std::string(name) + "'");
}

std::string_view to_string(ImageFormat f) {
  switch (f) {
    case ImageFormat::PgmAscii: return "pgm-ascii";
    case ImageFormat::PgmBinary: return "pgm-binary";
    case ImageFormat::Csv: return "csv";
  }
  return "?";
}

ImageFormat format_for_path(const std::filesystem::path& path) {
  return path.extension() == ".csv" ? ImageFormat::Csv : ImageFormat::PgmBinary;
}

Image parse_image(std::string_view text, std::optional<GridDims> expect) {
  const std::string_view head = trim(text);
  if (head.empty()) parse_fail(1, "empty file");
  Image img = head.starts_with("P2") || head.starts_with("P5") ? parse_pgm(text) : parse_csv(text);
  require_dims(img, expect);
  return img;
}

Image load_image(const std::filesystem::path& path, std::optional<GridDims> expect) {
  try {
    return parse_image(read_file(path), expect);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::ParseError) throw;
    throw Error(ErrorCode::ParseError, path.string() + ", " + without_code(e));
  }
}

std::string format_image(const Image& img, ImageFormat f) {
  const GridDims g = img.dims();
  std::string out;
  if (f == ImageFormat::Csv) {
    for (int y = 0; y < g.height; ++y) {
      for (int x = 0; x < g.width; ++x) {
        if (x > 0) out += ',';
        out += format_double(img(x, y));
      }
      out += '\n';
    }
    return out;
  }
  auto sample = [](double v) {
    return static_cast<int>(std::lround(std::clamp(std::isfinite(v) ? v : 0.0, 0.0, 1.0) * 255.0));
  };
  out = (f == ImageFormat::PgmAscii ? "P2\n" : "P5\n") + std::to_string(g.width) + " " +
        std::to_string(g.height) + "\n255\n";
  if (f == ImageFormat::PgmBinary) {
    for (double v : img.values()) out += static_cast<char>(sample(v));
    return out;
  }
  for (int y = 0; y < g.height; ++y) {
    for (int x = 0; x < g.width; ++x) {
      if (x > 0) out += ' ';
      out += std::to_string(sample(img(x, y)));
    }
    out += '\n';
  }
  return out;
}

void save_image(const std::filesystem::path& path, const Image& img, ImageFormat f) {
  write_file(path, format_image(img, f));
}

Image threshold(const Image& img) {
  std::vector<double> v(img.values().begin(), img.values().end());
  for (double& e : v) e = e > 0.5 ? 1.0 : 0.0;
  return Image::binary(img.dims(), std::move(v));
}

ProjectionFile parse_projection(std::string_view text) {
  const auto lines = lines_of(text);
  if (lines.empty()) parse_fail(1, "empty projection file");
  if (lines[0] != "GTP1") parse_fail(1, "expected GTP1 header");
  if (lines.size() < 2) parse_fail(2, "missing 'M N d' line");
  const auto head = fields(lines[1]);
  int m = 0, n = 0, d = 0;
  if (head.size() != 3 || !parse_number(head[0], m) || !parse_number(head[1], n) ||
      !parse_number(head[2], d) || m <= 0 || n <= 0 || d <= 0) {
    parse_fail(2, "expected 'M N d'");
  }
  ProjectionFile f;
  f.grid = GridDims(m, n);
  std::vector<Direction> dirs;
  std::size_t total = 0;
  for (int i = 0; i < d; ++i) {
    const std::size_t ln = 3 + static_cast<std::size_t>(i);
    if (lines.size() < ln) parse_fail(ln, "missing direction line");
    const auto fl = fields(lines[ln - 1]);
    int a = 0, b = 0, c = 0;
    if (fl.size() != 3 || !parse_number(fl[0], a) || !parse_number(fl[1], b) ||
        !parse_number(fl[2], c) || c < 0) {
      parse_fail(ln, "expected 'a b bin_count'");
    }
    try {
      dirs.push_back(Direction::normalized(a, b));
    } catch (const Error& e) {
      parse_fail(ln, e.what());
    }
    if (c != bin_count(dirs.back(), f.grid)) {
      throw Error(ErrorCode::DimensionMismatch,
                  "line " + std::to_string(ln) + ": direction " + to_string(dirs.back()) + " on " +
                      std::to_string(m) + "x" + std::to_string(n) + " has " +
                      std::to_string(bin_count(dirs.back(), f.grid)) + " bins, file declares " +
                      std::to_string(c));
    }
    f.counts.push_back(c);
    total += static_cast<std::size_t>(c);
  }
  try {
    f.directions = DirectionSet(std::move(dirs));
  } catch (const Error& e) {
    parse_fail(2, e.what());
  }
  const std::size_t first = 2 + static_cast<std::size_t>(d);
  if (lines.size() - first != total) {
    parse_fail(lines.size(), std::to_string(lines.size() - first) + " values, header declares " +
                                 std::to_string(total));
  }
  f.p.values.resize(total);
  for (std::size_t i = 0; i < total; ++i) {
    if (!parse_number(lines[first + i], f.p.values[i]) || !std::isfinite(f.p.values[i])) {
      parse_fail(first + i + 1, "bad value");
    }
  }
  return f;
}

ProjectionFile load_projection(const std::filesystem::path& path) {
  try {
    return parse_projection(read_file(path));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::ParseError) throw;
    throw Error(ErrorCode::ParseError, path.string() + ", " + without_code(e));
  }
}

std::string format_projection(const BinLayout& layout, const ProjectionVector& p) {
  if (p.size() != static_cast<std::size_t>(layout.rows())) {
    throw Error(ErrorCode::DimensionMismatch, "projection does not match the layout");
  }
  std::string out = "GTP1\n" + std::to_string(layout.grid().width) + " " +
                    std::to_string(layout.grid().height) + " " +
                    std::to_string(layout.blocks().size()) + "\n";
  for (const auto& b : layout.blocks()) {
    out += std::to_string(b.direction.a()) + " " + std::to_string(b.direction.b()) + " " +
           std::to_string(b.count) + "\n";
  }
  for (double v : p.values) {
    out += format_double(v);
    out += '\n';
  }
  return out;
}

void save_projection(const std::filesystem::path& path, const BinLayout& layout,
                     const ProjectionVector& p) {
  write_file(path, format_projection(layout, p));
}

void check_projection_layout(const ProjectionFile& f, const BinLayout& layout) {
  if (f.grid != layout.grid()) {
    throw Error(ErrorCode::DimensionMismatch, "projection file was written for a " +
                                                  std::to_string(f.grid.width) + "x" +
                                                  std::to_string(f.grid.height) + " grid");
  }
  if (f.directions != layout.directions()) {
    throw Error(ErrorCode::DimensionMismatch, "projection directions " + to_string(f.directions) +
                                                  " differ from " + to_string(layout.directions()));
  }
  for (std::size_t i = 0; i < f.counts.size(); ++i) {
    if (f.counts[i] != layout.blocks()[i].count) {
      throw Error(ErrorCode::DimensionMismatch,
                  "direction " + to_string(f.directions[i]) + " has " +
                      std::to_string(f.counts[i]) + " bins, expected " +
                      std::to_string(layout.blocks()[i].count));
    }
  }
}

nlohmann::json manifest_json(const BinLayout& layout) {
  nlohmann::json bins = nlohmann::json::array();
  for (const auto& e : layout.manifest()) {
    bins.push_back({{"direction", {e.direction.a(), e.direction.b()}}, {"t", e.t}, {"bin", e.bin}});
  }
  return {{"grid", {layout.grid().width, layout.grid().height}}, {"bins", std::move(bins)}};
}

DirectionSet parse_directions(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  if (!j.is_array()) throw Error(ErrorCode::ParseError, "direction set must be a JSON array");
  std::vector<std::pair<int, int>> raw;
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer()) {
      throw Error(ErrorCode::ParseError, "each direction must be an [a, b] integer pair");
    }
    raw.emplace_back(e[0].get<int>(), e[1].get<int>());
  }
  return DirectionSet::from_pairs(raw);
}

DirectionSet load_directions(const std::filesystem::path& path) {
  return parse_directions(read_file(path));
}

nlohmann::json directions_json(const DirectionSet& s) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& d : s) a.push_back({d.a(), d.b()});
  return a;
}

nlohmann::json report_json(const UniquenessReport& r) {
  nlohmann::json j;
  j["grid"] = {r.grid.width, r.grid.height};
  j["h"] = r.h;
  j["k"] = r.k;
  j["valid"] = r.valid;
  j["katz"] = r.katz;
  auto structure = [](const StructureCase& c) {
    nlohmann::json roles = nlohmann::json::array();
    for (int r : c.roles) roles.push_back(r);
    return nlohmann::json{{"case", std::string(to_string(c.sign))}, {"roles", roles}};
  };
  j["structure"] = r.structure ? structure(*r.structure) : nlohmann::json(nullptr);
  j["all_structures"] = nlohmann::json::array();
  for (const auto& c : r.all_structures) j["all_structures"].push_back(structure(c));
  j["D"] = points_json(r.partition.d);
  j["D_A"] = points_json(r.partition.pos_a);
  j["D_B"] = points_json(r.partition.pos_b);
  j["conditions"] = {{"iff1a", r.cond_iff1a}, {"iff1b", r.cond_iff1b}, {"a", r.cond_a},
                     {"b", r.cond_b}};
  j["is_binary_uniqueness_set"] = r.is_binary_uniqueness_set;
  j["reason"] = r.reason;
  return j;
}

nlohmann::json diagnostics_json(const ReconstructionResult& r) {
  const auto& d = r.diagnostics;
  nlohmann::json alphas = nlohmann::json::array();
  for (std::size_t i = 0; i < r.weights.alpha.size(); ++i) {
    const Vec2 u = r.weights.region.point(i);
    alphas.push_back({{"u", {u.x, u.y}}, {"alpha", r.weights.alpha[i]}});
  }
  nlohmann::json j;
  j["kappa_used"] = r.kappa_used;
  j["pixels_in_h"] = d.pixels_in_h;
  j["pixels_outside_h"] = d.pixels_outside_h;
  j["near_half_in_h"] = points_json(d.near_half_in_h);
  j["near_half_outside_h"] = points_json(d.near_half_outside_h);
  j["max_abs_alpha"] = d.max_abs_alpha;
  j["alpha_out_of_bounds"] = d.alpha_out_of_bounds;
  j["not_converged"] = d.not_converged;
  j["simple_rounding"] = d.simple_rounding;
  j["fast_path_used"] = d.fast_path_used;
  j["fast_path_selected"] = d.fast_path_selected;
  j["fast_path_disagreements"] = d.fast_path_disagreements;
  if (d.projection_residual) j["projection_residual"] = *d.projection_residual;
  j["alphas"] = std::move(alphas);
  j["residual_norms"] = r.trace.residual_norms;
  j["normal_residuals"] = r.trace.normal_residuals;
  j["warnings"] = d.warnings;
  return j;
}

GridDims parse_grid(std::string_view text) {
  const auto x = text.find_first_of("xX");
  int m = 0, n = 0;
  if (x == std::string_view::npos || !parse_number(text.substr(0, x), m) ||
      !parse_number(text.substr(x + 1), n) || m <= 0 || n <= 0) {
    throw Error(ErrorCode::InvalidArgument, "grid must look like MxN, got '" + std::string(text) + "'");
  }
  return GridDims(m, n);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path.string());
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) throw Error(ErrorCode::InvalidArgument, "write failed: " + path.string());
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace gridtomo
