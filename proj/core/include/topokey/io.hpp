#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>

#include "topokey/detect.hpp"
#include "topokey/geometry.hpp"
#include "topokey/height_map.hpp"

namespace topokey::io
{

/// Whitespace-separated decimal scalars, one row per non-blank line.
HeightMap parse_matrix_text(std::string_view text, const std::string& source = "<text>");
std::string format_matrix_text(std::span<const double> values, Shape shape);
inline std::string format_matrix_text(const HeightMap& map) { return format_matrix_text(map.values(), map.shape()); }
inline std::string format_matrix_text(const Field& f) { return format_matrix_text(f.values(), f.shape()); }

/// 8-bit binary (P5) or ASCII (P2) graymap; pixel p becomes p / 255.
HeightMap parse_pgm(std::string_view bytes, const std::string& source = "<pgm>");

/// Writes values clamped to [0, 1] as an 8-bit P5 graymap.
std::string format_pgm(const HeightMap& map);

/// Reads a matrix text file or a PGM image (detected by the magic number).
HeightMap load_height_map(const std::filesystem::path& path);

/// Nine whitespace-separated scalars, row-major.
Homography parse_homography(std::string_view text, const std::string& source = "<homography>");
Homography load_homography(const std::filesystem::path& path);
std::string format_homography(const Homography& h);

/// P6 raster of the map in gray with each keypoint marked by a red cross.
std::string format_overlay_ppm(const HeightMap& map, std::span<const Keypoint> keypoints);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

/// Bilinear resampling where target pixel (i, j) samples the source at
/// (i * rows / target.rows, j * cols / target.cols), clamped to the border.
/// Matches scale_homography, so keypoints map exactly by the scale factor.
HeightMap resize_bilinear(const HeightMap& map, Shape target);

/// Shortest round-trip decimal representation of a double.
std::string format_double(double v);

} // namespace topokey::io
