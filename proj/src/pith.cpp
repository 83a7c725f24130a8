#include "treering/pith.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <string>

#include "treering/error.hpp"

namespace treering {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

}  // namespace

const Kernel3x3& SobelBank::x() {
  static const Kernel3x3 k{{-1, 0, 1, -2, 0, 2, -1, 0, 1}};
  return k;
}

const Kernel3x3& SobelBank::y() {
  static const Kernel3x3 k{{1, 2, 1, 0, 0, 0, -1, -2, -1}};
  return k;
}

const Kernel3x3& SobelBank::xy() {
  static const Kernel3x3 k{{-2 * kInvSqrt2, -2 * kInvSqrt2, 0, -2 * kInvSqrt2, 0, 2 * kInvSqrt2, 0,
                            2 * kInvSqrt2, 2 * kInvSqrt2}};
  return k;
}

const Kernel3x3& SobelBank::yx() {
  static const Kernel3x3 k{{0, 2 * kInvSqrt2, 2 * kInvSqrt2, -2 * kInvSqrt2, 0, 2 * kInvSqrt2,
                            -2 * kInvSqrt2, -2 * kInvSqrt2, 0}};
  return k;
}

ScalarImage directional_response(const ScalarImage& img, const Kernel3x3& kernel, double sigma) {
  return gaussian_blur(abs_image(convolve3x3(img, kernel)), sigma);
}

int profile_length(Direction direction, int width, int height) {
  switch (direction) {
    case Direction::X: return width;
    case Direction::Y: return height;
    case Direction::DiagSum:
    case Direction::DiagDiff: return width + height - 1;
  }
  return 0;
}

int profile_coordinate(Direction direction, int x, int y, int height) {
  switch (direction) {
    case Direction::X: return x;
    case Direction::Y: return y;
    case Direction::DiagSum: return x + y;
    case Direction::DiagDiff: return x - y + (height - 1);
  }
  return 0;
}

DirectionalProfile directional_profile(const ScalarImage& response, const BinaryMask& mask,
                                       Direction direction, int min_count) {
  if (response.width() != mask.width() || response.height() != mask.height()) {
    throw Error(ErrorCode::DimensionMismatch, "response and mask differ in size");
  }
  if (min_count < 1) throw Error(ErrorCode::InvalidParameter, "min_count must be >= 1");

  const int w = response.width();
  const int len = profile_length(direction, w, response.height());
  std::vector<double> sums(static_cast<std::size_t>(len), 0.0);
  std::vector<int> counts(static_cast<std::size_t>(len), 0);
  for (int y = 0; y < response.height(); ++y) {
    for (int x = 0; x < w; ++x) {
      if (!mask.at(x, y)) continue;
      const auto c = static_cast<std::size_t>(profile_coordinate(direction, x, y, response.height()));
      sums[c] += response.at(x, y);
      ++counts[c];
    }
  }

  DirectionalProfile profile{direction, std::vector<double>(static_cast<std::size_t>(len)), min_count};
  const double fallback = response.max_intensity();
  for (std::size_t c = 0; c < sums.size(); ++c) {
    profile.values[c] = counts[c] >= min_count ? sums[c] / counts[c] : fallback;
  }
  return profile;
}

Point2 locate_center(const ScalarImage& img, const BinaryMask& mask, double sigma, int min_count) {
  if (img.width() != mask.width() || img.height() != mask.height()) {
    throw Error(ErrorCode::DimensionMismatch, "image and mask differ in size");
  }
  if (!mask.any()) throw Error(ErrorCode::NoForeground, "empty mask");

  struct Arm {
    const Kernel3x3* kernel;
    Direction direction;
  };
  const std::array<Arm, 4> arms{{{&SobelBank::x(), Direction::X},
                                 {&SobelBank::y(), Direction::Y},
                                 {&SobelBank::xy(), Direction::DiagSum},
                                 {&SobelBank::yx(), Direction::DiagDiff}}};
  std::array<DirectionalProfile, 4> profiles;
  for (std::size_t i = 0; i < arms.size(); ++i) {
    profiles[i] = directional_profile(directional_response(img, *arms[i].kernel, sigma), mask,
                                      arms[i].direction, min_count);
  }

  const int w = img.width();
  double best = std::numeric_limits<double>::infinity();
  Point2 center{-1.0, -1.0};
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < w; ++x) {
      if (!mask.at(x, y)) continue;
      double total = 0.0;
      for (const auto& p : profiles) {
        total += p.values[static_cast<std::size_t>(profile_coordinate(p.direction, x, y, img.height()))];
      }
      if (total < best) {
        best = total;
        center = {static_cast<double>(x), static_cast<double>(y)};
      }
    }
  }
  return center;
}

PithEstimate fit_center_line(const std::vector<SliceCenter>& centers) {
  if (centers.empty()) throw Error(ErrorCode::InvalidParameter, "no centers to fit");

  PithEstimate est;
  const double n = static_cast<double>(centers.size());
  double mz = 0.0, mx = 0.0, my = 0.0;
  for (const auto& c : centers) {
    mz += c.z;
    mx += c.center.x;
    my += c.center.y;
  }
  mz /= n;
  mx /= n;
  my /= n;

  double szz = 0.0, szx = 0.0, szy = 0.0;
  for (const auto& c : centers) {
    const double dz = c.z - mz;
    szz += dz * dz;
    szx += dz * (c.center.x - mx);
    szy += dz * (c.center.y - my);
  }
  if (szz > 0.0) {
    est.x_line.slope = szx / szz;
    est.y_line.slope = szy / szz;
  }
  est.x_line.intercept = mx - est.x_line.slope * mz;
  est.y_line.intercept = my - est.y_line.slope * mz;

  for (const auto& c : centers) {
    est.z.push_back(c.z);
    est.per_slice_centers.push_back(c.center);
    est.fitted_centers.push_back(est.at(c.z));
  }
  return est;
}

PithEstimate locate_stack_centers(const std::vector<ScalarImage>& slices, const CenterParams& params) {
  const int n = static_cast<int>(slices.size());
  std::vector<SliceCenter> centers(static_cast<std::size_t>(n));
  std::vector<std::exception_ptr> failures(static_cast<std::size_t>(n));

#pragma omp parallel for schedule(dynamic)
  for (int z = 0; z < n; ++z) {
    try {
      const auto& img = slices[static_cast<std::size_t>(z)];
      const BinaryMask mask = foreground_mask(img, params.mask_frac);
      centers[static_cast<std::size_t>(z)] = {static_cast<double>(z),
                                              locate_center(img, mask, params.sigma, params.min_count)};
    } catch (...) {
      failures[static_cast<std::size_t>(z)] = std::current_exception();
    }
  }
  for (const auto& f : failures)
    if (f) std::rethrow_exception(f);
  return fit_center_line(centers);
}

}  // namespace treering
