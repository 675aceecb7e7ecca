#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "gridtomo/bra.hpp"
#include "gridtomo/image.hpp"
#include "gridtomo/lattice.hpp"
#include "gridtomo/projector.hpp"

namespace gridtomo {

enum class ImageFormat { PgmAscii, PgmBinary, Csv };

/// "pgm-ascii", "pgm-binary" / "pgm", "csv". Throws InvalidArgument.
ImageFormat parse_image_format(std::string_view name);
std::string_view to_string(ImageFormat f);
/// From the extension: .csv -> Csv, anything else -> PgmBinary.
ImageFormat format_for_path(const std::filesystem::path& path);

/// Samples are stored as value / maxval. The image is Binary iff every
/// sample is 0 or maxval. Throws ParseError (with line) and, when `expect`
/// is given, DimensionMismatch.
Image parse_image(std::string_view text, std::optional<GridDims> expect = {});
Image load_image(const std::filesystem::path& path, std::optional<GridDims> expect = {});

/// PGM stores round(clamp(v, 0, 1) * 255); CSV stores every double exactly.
std::string format_image(const Image& img, ImageFormat f);
void save_image(const std::filesystem::path& path, const Image& img, ImageFormat f);

/// value > 1/2 -> 1.
Image threshold(const Image& img);

/// "GTP1" / "M N d" / one "a b bin_count" line per direction / the values.
struct ProjectionFile {
  GridDims grid;
  DirectionSet directions;
  std::vector<int> counts;
  ProjectionVector p;
};

ProjectionFile parse_projection(std::string_view text);
ProjectionFile load_projection(const std::filesystem::path& path);
std::string format_projection(const BinLayout& layout, const ProjectionVector& p);
void save_projection(const std::filesystem::path& path, const BinLayout& layout,
                     const ProjectionVector& p);
/// Throws DimensionMismatch unless the file was written for this layout.
void check_projection_layout(const ProjectionFile& f, const BinLayout& layout);

/// {"grid": [M, N], "bins": [{"direction": [a, b], "t": t, "bin": i}, ...]}
nlohmann::json manifest_json(const BinLayout& layout);

/// JSON array of [a, b] pairs.
DirectionSet parse_directions(std::string_view text);
DirectionSet load_directions(const std::filesystem::path& path);
nlohmann::json directions_json(const DirectionSet& s);

nlohmann::json report_json(const UniquenessReport& r);
nlohmann::json diagnostics_json(const ReconstructionResult& r);

/// "MxN". Throws InvalidArgument.
GridDims parse_grid(std::string_view text);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view data);

/// Shortest decimal that reads back to the same double.
std::string format_double(double v);

}  // namespace gridtomo
