#pragma once

#include "treering/image.hpp"
#include "treering/pith.hpp"

namespace treering {

/// Radius-by-angle resampling of a slice. Columns are radius in 1 px bins,
/// rows are uniform angle bins over [0, 2pi). The first `pad_rows` rows
/// repeat the last `pad_rows` angle bins so that row filters see a
/// continuous seam.
struct PolarImage {
  ScalarImage base;
  int pad_rows = 0;
  Point2 center;
  int angular_bins = 0;
  double max_radius = 0.0;

  /// Row index in `base` of unpadded angle bin `angle_row`.
  int padded_row(int angle_row) const { return angle_row + pad_rows; }
};

/// Radius of the largest circle around `center` that stays inside the
/// bilinear sampling area of a width x height image.
double inscribed_radius(int width, int height, Point2 center);

PolarImage to_polar(const ScalarImage& img, Point2 center, int angular_bins = 720, int pad_rows = 16);

/// Polar column to radius in px (bin width 1 px).
constexpr double polar_to_radius(double mark_x) { return mark_x; }

}  // namespace treering
