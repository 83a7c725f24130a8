#include "treering/polar.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "treering/error.hpp"

namespace treering {

double inscribed_radius(int width, int height, Point2 center) {
  return std::min({center.x, center.y, (width - 1) - center.x, (height - 1) - center.y});
}

PolarImage to_polar(const ScalarImage& img, Point2 center, int angular_bins, int pad_rows) {
  if (angular_bins < 8) throw Error(ErrorCode::InvalidParameter, "angular_bins must be >= 8");
  if (pad_rows < 0 || pad_rows > angular_bins) {
    throw Error(ErrorCode::InvalidParameter, "pad_rows must lie in [0, angular_bins]");
  }
  if (!(center.x >= 0.0 && center.y >= 0.0 && center.x <= img.width() - 1 &&
        center.y <= img.height() - 1)) {
    throw Error(ErrorCode::CenterOutOfBounds, "center (" + std::to_string(center.x) + ", " +
                                                   std::to_string(center.y) + ") lies outside the image");
  }
  const double max_radius = inscribed_radius(img.width(), img.height(), center);
  if (max_radius < 4.0) {
    throw Error(ErrorCode::DegenerateRadius,
                "inscribed radius " + std::to_string(max_radius) + " px is below 4 px");
  }

  const int width = static_cast<int>(std::floor(max_radius));
  const int height = angular_bins + pad_rows;
  std::vector<double> data(static_cast<std::size_t>(width) * height);

#pragma omp parallel for schedule(static)
  for (int row = 0; row < angular_bins; ++row) {
    const double theta = 2.0 * std::numbers::pi * row / angular_bins;
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    double* out = data.data() + static_cast<std::size_t>(row + pad_rows) * width;
    for (int r = 0; r < width; ++r) out[r] = bilinear_sample(img, center.x + r * c, center.y + r * s);
  }
  for (int k = 0; k < pad_rows; ++k) {
    const auto src = static_cast<std::size_t>(angular_bins - pad_rows + k + pad_rows) * width;
    std::copy_n(data.begin() + static_cast<std::ptrdiff_t>(src), width,
                data.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(k) * width));
  }

  return PolarImage{ScalarImage(width, height, std::move(data)), pad_rows, center, angular_bins, max_radius};
}

}  // namespace treering
