#pragma once

#include <array>
#include <vector>

#include "treering/image.hpp"

namespace treering {

/// Sobel kernels for the horizontal, vertical and the two diagonal
/// directions. The diagonal kernels carry the 1/sqrt(2) factor.
struct SobelBank {
  static const Kernel3x3& x();
  static const Kernel3x3& y();
  static const Kernel3x3& xy();
  static const Kernel3x3& yx();
};

enum class Direction { X, Y, DiagSum, DiagDiff };

/// Per-coordinate masked averages of a directional response. Coordinates
/// are x, y, x+y and x-y+(height-1) respectively.
struct DirectionalProfile {
  Direction direction = Direction::X;
  std::vector<double> values;
  int min_count = 100;
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Point2&) const = default;
};

struct Line1 {
  double slope = 0.0;
  double intercept = 0.0;

  double operator()(double z) const { return slope * z + intercept; }
};

struct SliceCenter {
  double z = 0.0;
  Point2 center;
};

struct PithEstimate {
  std::vector<double> z;
  std::vector<Point2> per_slice_centers;
  std::vector<Point2> fitted_centers;
  Line1 x_line;
  Line1 y_line;

  Point2 at(double zq) const { return {x_line(zq), y_line(zq)}; }
};

struct CenterParams {
  double sigma = 2.0;
  int min_count = 100;
  double mask_frac = 0.1;
};

/// gaussian_blur(|img (*) k|, sigma).
ScalarImage directional_response(const ScalarImage& img, const Kernel3x3& kernel, double sigma);

/// Number of bins along `direction` for a width x height image.
int profile_length(Direction direction, int width, int height);
int profile_coordinate(Direction direction, int x, int y, int height);

/// Masked mean of `response` per coordinate bin. Bins with fewer than
/// `min_count` masked pixels fall back to the maximum of the whole response.
DirectionalProfile directional_profile(const ScalarImage& response, const BinaryMask& mask,
                                       Direction direction, int min_count);

/// Pixel on the mask minimizing the sum of the four directional profiles.
/// Ties resolve to the smallest y, then the smallest x.
Point2 locate_center(const ScalarImage& img, const BinaryMask& mask, double sigma = 2.0,
                     int min_count = 100);

/// Independent least-squares lines x(z), y(z) through per-slice centers.
PithEstimate fit_center_line(const std::vector<SliceCenter>& centers);

/// Masks and locates each slice (in parallel) and fits the line through
/// the results. Slice index is used as z.
PithEstimate locate_stack_centers(const std::vector<ScalarImage>& slices, const CenterParams& params);

}  // namespace treering
