#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "treering/pith.hpp"
#include "treering/polar.hpp"
#include "treering/rings.hpp"

namespace treering {

/// Shortest decimal that parses back to the same double; "inf" for +inf.
std::string format_number(double v);
double parse_number(std::string_view text);

// Ring file: one detection per line, "<row>\t<radius>\t<persistence>",
// rows ascending, radii ascending within a row.
std::string format_ring_file(const std::vector<RingMarks>& rows);
void write_ring_file(const std::filesystem::path& path, const std::vector<RingMarks>& rows);

// Truth file: one radius per line, ascending.
std::string format_truth_file(const std::vector<double>& radii);
void write_truth_file(const std::filesystem::path& path, const std::vector<double>& radii);

/// Positions loaded from either a ring file or a truth file. A truth file
/// has no row column; its single list applies to every row.
struct PositionTable {
  bool per_row = false;
  std::vector<double> shared;
  std::map<int, std::vector<double>> rows;

  const std::vector<double>& for_row(int row) const;
};

PositionTable parse_positions(std::string_view text, std::string_view source = "<input>");
PositionTable read_positions(const std::filesystem::path& path);

/// Plain truth list; throws UnsortedInput when out of order.
std::vector<double> read_truth_file(const std::filesystem::path& path);

/// One JSON record per slice: z, raw and fitted center, and fit lines.
std::string format_centers_jsonl(const PithEstimate& est);
PithEstimate parse_centers_jsonl(std::string_view text);

/// Writes `polar.png` as 16-bit plus a JSON sidecar with the same stem.
void write_polar(const std::filesystem::path& png_path, const PolarImage& polar);
PolarImage read_polar(const std::filesystem::path& png_path);
std::filesystem::path sidecar_path(const std::filesystem::path& png_path);

/// Largest power of two (at most 2^16) mapping `max_value` into 16 bits.
double polar_intensity_scale(double max_value);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace treering
