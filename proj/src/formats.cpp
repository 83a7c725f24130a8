#include "treering/formats.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "treering/error.hpp"
#include "treering/stack_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace treering {

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_number(std::string_view text) {
  if (text == "inf") return std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw Error(ErrorCode::MalformedFile, "not a number: '" + std::string(text) + "'");
  }
  return v;
}

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::UnreadableFile, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const fs::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::UnreadableFile, "cannot write " + path.string());
  out << text;
}

std::string format_ring_file(const std::vector<RingMarks>& rows) {
  std::vector<const RingMarks*> order;
  for (const auto& r : rows) order.push_back(&r);
  std::stable_sort(order.begin(), order.end(), [](auto* a, auto* b) { return a->row < b->row; });

  std::string out;
  for (const RingMarks* r : order) {
    for (std::size_t i = 0; i < r->positions.size(); ++i) {
      out += std::to_string(r->row);
      out += '\t';
      out += std::to_string(r->positions[i]);
      out += '\t';
      out += format_number(r->persistence[i]);
      out += '\n';
    }
  }
  return out;
}

void write_ring_file(const fs::path& path, const std::vector<RingMarks>& rows) {
  write_text_file(path, format_ring_file(rows));
}

std::string format_truth_file(const std::vector<double>& radii) {
  std::string out;
  for (double r : radii) {
    out += format_number(r);
    out += '\n';
  }
  return out;
}

void write_truth_file(const fs::path& path, const std::vector<double>& radii) {
  write_text_file(path, format_truth_file(radii));
}

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    parts.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

}  // namespace

const std::vector<double>& PositionTable::for_row(int row) const {
  if (!per_row) return shared;
  static const std::vector<double> none;
  const auto it = rows.find(row);
  return it == rows.end() ? none : it->second;
}

PositionTable parse_positions(std::string_view text, std::string_view source) {
  PositionTable table;
  int columns = 0;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;

    const auto fields = split(line, '\t');
    const int n = static_cast<int>(fields.size());
    if ((n != 1 && n != 3) || (columns != 0 && n != columns)) {
      throw Error(ErrorCode::MalformedFile, std::string(source) + ":" + std::to_string(line_no) +
                                                ": expected 1 or 3 tab-separated fields consistently");
    }
    columns = n;
    try {
      if (n == 1) {
        table.shared.push_back(parse_number(fields[0]));
      } else {
        const double row = parse_number(fields[0]);
        if (row < 0 || row != std::floor(row)) throw Error(ErrorCode::MalformedFile, "bad row index");
        table.rows[static_cast<int>(row)].push_back(parse_number(fields[1]));
        parse_number(fields[2]);
      }
    } catch (const Error& e) {
      throw Error(ErrorCode::MalformedFile,
                  std::string(source) + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  table.per_row = columns == 3;

  auto check = [&](const std::vector<double>& v, const std::string& where) {
    if (!std::is_sorted(v.begin(), v.end())) {
      throw Error(ErrorCode::UnsortedInput, std::string(source) + ": positions not ascending" + where);
    }
  };
  check(table.shared, "");
  for (const auto& [row, v] : table.rows) check(v, " in row " + std::to_string(row));
  return table;
}

PositionTable read_positions(const fs::path& path) {
  return parse_positions(read_text_file(path), path.string());
}

std::vector<double> read_truth_file(const fs::path& path) {
  PositionTable table = read_positions(path);
  if (table.per_row) {
    throw Error(ErrorCode::MalformedFile, path.string() + " is a ring file, expected one radius per line");
  }
  return table.shared;
}

std::string format_centers_jsonl(const PithEstimate& est) {
  std::string out;
  for (std::size_t i = 0; i < est.z.size(); ++i) {
    json rec;
    rec["z"] = est.z[i];
    rec["raw"] = {{"x", est.per_slice_centers[i].x}, {"y", est.per_slice_centers[i].y}};
    rec["fitted"] = {{"x", est.fitted_centers[i].x}, {"y", est.fitted_centers[i].y}};
    rec["fit"] = {{"x", {{"slope", est.x_line.slope}, {"intercept", est.x_line.intercept}}},
                  {"y", {{"slope", est.y_line.slope}, {"intercept", est.y_line.intercept}}}};
    out += rec.dump();
    out += '\n';
  }
  return out;
}

PithEstimate parse_centers_jsonl(std::string_view text) {
  PithEstimate est;
  std::istringstream in{std::string(text)};
  std::string line;
  try {
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const json rec = json::parse(line);
      est.z.push_back(rec.at("z").get<double>());
      est.per_slice_centers.push_back({rec.at("raw").at("x").get<double>(), rec.at("raw").at("y").get<double>()});
      est.fitted_centers.push_back(
          {rec.at("fitted").at("x").get<double>(), rec.at("fitted").at("y").get<double>()});
      est.x_line = {rec.at("fit").at("x").at("slope").get<double>(),
                    rec.at("fit").at("x").at("intercept").get<double>()};
      est.y_line = {rec.at("fit").at("y").at("slope").get<double>(),
                    rec.at("fit").at("y").at("intercept").get<double>()};
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedFile, std::string("centers file: ") + e.what());
  }
  if (est.z.empty()) throw Error(ErrorCode::MalformedFile, "centers file has no records");
  return est;
}

fs::path sidecar_path(const fs::path& png_path) {
  fs::path p = png_path;
  return p.replace_extension(".json");
}

double polar_intensity_scale(double max_value) {
  double scale = 1.0;
  if (!(max_value > 0.0)) return scale;
  while (scale < 65536.0 && max_value * scale * 2.0 <= 65535.0) scale *= 2.0;
  return scale;
}

void write_polar(const fs::path& png_path, const PolarImage& polar) {
  const double scale = polar_intensity_scale(polar.base.max_intensity());
  save_png(png_path, polar.base, BitDepth::Sixteen, scale);
  json meta;
  meta["center"] = {{"x", polar.center.x}, {"y", polar.center.y}};
  meta["angular_bins"] = polar.angular_bins;
  meta["pad_rows"] = polar.pad_rows;
  meta["max_radius"] = polar.max_radius;
  meta["intensity_scale"] = scale;
  write_text_file(sidecar_path(png_path), meta.dump(2) + "\n");
}

PolarImage read_polar(const fs::path& png_path) {
  const ScalarImage raw = load_image(png_path);
  PolarImage polar;
  double scale = 1.0;
  try {
    const json meta = json::parse(read_text_file(sidecar_path(png_path)));
    polar.center = {meta.at("center").at("x").get<double>(), meta.at("center").at("y").get<double>()};
    polar.angular_bins = meta.at("angular_bins").get<int>();
    polar.pad_rows = meta.at("pad_rows").get<int>();
    polar.max_radius = meta.at("max_radius").get<double>();
    scale = meta.at("intensity_scale").get<double>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedFile, sidecar_path(png_path).string() + ": " + e.what());
  }
  if (raw.height() != polar.angular_bins + polar.pad_rows || !(scale > 0.0)) {
    throw Error(ErrorCode::MalformedFile, "sidecar does not describe " + png_path.string());
  }
  polar.base = scale_image(raw, 1.0 / scale);
  return polar;
}

}  // namespace treering
