#include "treering/rings.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "treering/error.hpp"

namespace treering {

void DetectionParams::validate() const {
  if (!(blur >= 0.0) || !std::isfinite(blur)) {
    throw Error(ErrorCode::InvalidParameter, "blur must be >= 0");
  }
  if (!(t_pre >= 0.0 && t_pre <= 0.2)) {
    throw Error(ErrorCode::InvalidParameter, "pre-threshold must lie in [0, 0.2]");
  }
  if (!(t_post >= 0.0 && t_post <= 0.2)) {
    throw Error(ErrorCode::InvalidParameter, "post-threshold must lie in [0, 0.2]");
  }
}

void row_extrema(std::span<const double> row, std::vector<int>& maxima, std::vector<int>& minima) {
  const int n = static_cast<int>(row.size());
  int start = 0;
  while (start < n) {
    int end = start;
    while (end + 1 < n && row[end + 1] == row[start]) ++end;
    if (start > 0 && end < n - 1) {
      const double v = row[start];
      const double before = row[start - 1];
      const double after = row[end + 1];
      if (before < v && after < v) maxima.push_back(start);
      if (before > v && after > v) minima.push_back(start);
    }
    start = end + 1;
  }
}

ExtremaMask extract_row_extrema(const ScalarImage& img) {
  if (img.width() < 3) {
    throw Error(ErrorCode::ImageTooSmall, "rows need at least 3 pixels to hold an extremum");
  }
  ExtremaMask out{BinaryMask(img.width(), img.height()), BinaryMask(img.width(), img.height())};
  std::vector<int> maxima, minima;
  for (int y = 0; y < img.height(); ++y) {
    maxima.clear();
    minima.clear();
    row_extrema(img.row(y), maxima, minima);
    for (int x : maxima) out.maxima.set(x, y, true);
    for (int x : minima) out.minima.set(x, y, true);
  }
  return out;
}

namespace {

bool is_marked(std::span<const double> row, int x_p, ExtremumKind kind) {
  std::vector<int> maxima, minima;
  row_extrema(row, maxima, minima);
  const auto& marks = kind == ExtremumKind::Max ? maxima : minima;
  return std::binary_search(marks.begin(), marks.end(), x_p);
}

// Minimum-case persistence on a row already oriented so that x_p is a minimum.
PersistenceRecord min_persistence(std::span<const double> f, int x_p) {
  const int n = static_cast<int>(f.size());
  const double level = f[x_p];
  PersistenceRecord rec;
  rec.x = x_p;

  double left = 0.0;
  int x = x_p - 1;
  for (; x >= 0 && !(f[x] < level); --x) left += std::max(0.0, f[x] - level);
  if (x >= 0) {
    rec.left_bound = x;
    rec.area_left = left;
  } else {
    rec.area_left = kUnboundedArea;
  }

  int plateau_end = x_p;
  while (plateau_end + 1 < n && f[plateau_end + 1] == level) ++plateau_end;
  double right = 0.0;
  x = plateau_end + 1;
  for (; x < n && f[x] > level; ++x) right += f[x] - level;
  if (x < n) {
    rec.right_bound = x;
    rec.area_right = right;
  } else {
    rec.area_right = kUnboundedArea;
  }

  rec.value = std::min(rec.area_left, rec.area_right);
  return rec;
}

}  // namespace

PersistenceRecord area_persistence_row(std::span<const double> row, int x_p, ExtremumKind kind) {
  if (x_p < 0 || x_p >= static_cast<int>(row.size()) || !is_marked(row, x_p, kind)) {
    throw Error(ErrorCode::NotAnExtremum, "column " + std::to_string(x_p) + " is not a marked " +
                                              (kind == ExtremumKind::Max ? "maximum" : "minimum"));
  }
  if (kind == ExtremumKind::Min) return min_persistence(row, x_p);

  std::vector<double> negated(row.begin(), row.end());
  for (double& v : negated) v = -v;
  return min_persistence(negated, x_p);
}

ScalarImage preprocess(const ScalarImage& img, const DetectionParams& params) {
  params.validate();
  const double floor_level = params.t_pre * img.max_intensity();
  ScalarImage blurred = gaussian_blur(img, params.blur);
  if (params.t_pre == 0.0) return blurred;
  std::vector<double> out(blurred.pixels().begin(), blurred.pixels().end());
  for (double& v : out) v = std::max(v, floor_level);
  return ScalarImage(blurred.width(), blurred.height(), std::move(out));
}

ScalarImage preprocess(const PolarImage& polar, const DetectionParams& params) {
  return preprocess(polar.base, params);
}

RingMarks marks_for_row(std::span<const double> row, RingMode mode, double threshold) {
  std::vector<int> maxima, minima;
  row_extrema(row, maxima, minima);
  const ExtremumKind kind = mode == RingMode::Ridges ? ExtremumKind::Max : ExtremumKind::Min;
  std::vector<double> oriented(row.begin(), row.end());
  if (kind == ExtremumKind::Max)
    for (double& v : oriented) v = -v;

  RingMarks marks;
  for (int x : kind == ExtremumKind::Max ? maxima : minima) {
    const PersistenceRecord rec = min_persistence(oriented, x);
    if (rec.value >= threshold) {
      marks.positions.push_back(static_cast<int>(polar_to_radius(x)));
      marks.persistence.push_back(rec.value);
    }
  }
  return marks;
}

std::vector<RingMarks> persistence_filter(const ScalarImage& img, const ExtremaMask& mask,
                                          RingMode mode, double threshold, int first_row,
                                          int row_count) {
  const BinaryMask& marks = mode == RingMode::Ridges ? mask.maxima : mask.minima;
  if (marks.width() != img.width() || marks.height() != img.height()) {
    throw Error(ErrorCode::DimensionMismatch, "extrema mask and image differ in size");
  }
  if (first_row < 0 || row_count < 0 || first_row + row_count > img.height()) {
    throw Error(ErrorCode::RowOutOfRange, "row range exceeds image height");
  }
  const ExtremumKind kind = mode == RingMode::Ridges ? ExtremumKind::Max : ExtremumKind::Min;

  std::vector<RingMarks> out(static_cast<std::size_t>(row_count));
#pragma omp parallel for schedule(static)
  for (int i = 0; i < row_count; ++i) {
    const int y = first_row + i;
    const auto row = img.row(y);
    std::vector<double> oriented(row.begin(), row.end());
    if (kind == ExtremumKind::Max)
      for (double& v : oriented) v = -v;
    RingMarks& rm = out[static_cast<std::size_t>(i)];
    rm.row = i;
    for (int x = 0; x < img.width(); ++x) {
      if (!marks.at(x, y)) continue;
      const PersistenceRecord rec = min_persistence(oriented, x);
      if (rec.value >= threshold) {
        rm.positions.push_back(static_cast<int>(polar_to_radius(x)));
        rm.persistence.push_back(rec.value);
      }
    }
  }
  return out;
}

std::vector<RingMarks> persistence_filter(const ScalarImage& img, const ExtremaMask& mask,
                                          const DetectionParams& params, double n) {
  return persistence_filter(img, mask, params.mode, params.t_post * n, 0, img.height());
}

std::vector<RingMarks> detect_rings(const PolarImage& polar, const DetectionParams& params) {
  const double n = polar.base.max_intensity();
  const ScalarImage pre = preprocess(polar, params);
  const ExtremaMask mask = extract_row_extrema(pre);
  return persistence_filter(pre, mask, params.mode, params.t_post * n, polar.pad_rows,
                            polar.angular_bins);
}

RingMarks detect_rings_row(const PolarImage& polar, const DetectionParams& params, int row) {
  if (row < 0 || row >= polar.angular_bins) {
    throw Error(ErrorCode::RowOutOfRange, "row " + std::to_string(row) + " outside [0, " +
                                              std::to_string(polar.angular_bins) + ")");
  }
  if (polar.base.width() < 3) throw Error(ErrorCode::ImageTooSmall, "polar rows shorter than 3 px");
  const double n = polar.base.max_intensity();
  const ScalarImage pre = preprocess(polar, params);
  RingMarks marks = marks_for_row(pre.row(polar.padded_row(row)), params.mode, params.t_post * n);
  marks.row = row;
  return marks;
}

}  // namespace treering
