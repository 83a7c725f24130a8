#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace treering {

/// Row-major 2D intensity field. The maximum is computed once at
/// construction; the pixel buffer is never mutated afterwards, so instances
/// may be shared freely between threads.
class ScalarImage {
 public:
  ScalarImage() = default;
  ScalarImage(int width, int height, double fill = 0.0);
  ScalarImage(int width, int height, std::vector<double> data);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double at(int x, int y) const { return data_[static_cast<std::size_t>(y) * width_ + x]; }
  std::span<const double> pixels() const noexcept { return data_; }
  std::span<const double> row(int y) const {
    return std::span<const double>(data_).subspan(static_cast<std::size_t>(y) * width_, width_);
  }

  /// n: the largest value in the image (0 for an empty image).
  double max_intensity() const noexcept { return max_; }

  bool operator==(const ScalarImage& other) const {
    return width_ == other.width_ && height_ == other.height_ && data_ == other.data_;
  }

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<double> data_;
  double max_ = 0.0;
};

class BinaryMask {
 public:
  BinaryMask() = default;
  BinaryMask(int width, int height, bool fill = false);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }

  bool at(int x, int y) const { return bits_[static_cast<std::size_t>(y) * width_ + x] != 0; }
  void set(int x, int y, bool v) { bits_[static_cast<std::size_t>(y) * width_ + x] = v ? 1 : 0; }

  std::size_t count() const;
  bool any() const { return count() > 0; }

  bool operator==(const BinaryMask&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<unsigned char> bits_;
};

/// Row-major 3x3 coefficients, applied as a correlation (no kernel flip).
struct Kernel3x3 {
  std::array<double, 9> k{};

  double operator()(int row, int col) const { return k[static_cast<std::size_t>(row * 3 + col)]; }
  double sum() const;
};

/// Correlates `img` with `kernel` using edge-replicate extension at the
/// border. The result is signed. Throws ImageTooSmall below 3x3.
ScalarImage convolve3x3(const ScalarImage& img, const Kernel3x3& kernel);

/// Normalized 1D Gaussian taps for radius ceil(3*sigma); index 0 is the
/// leftmost tap. sigma must be > 0.
std::vector<double> gaussian_kernel(double sigma);

/// Separable Gaussian blur with edge-replicate boundary. sigma == 0 is the
/// identity; negative sigma throws InvalidParameter.
ScalarImage gaussian_blur(const ScalarImage& img, double sigma);

ScalarImage abs_image(const ScalarImage& img);
ScalarImage scale_image(const ScalarImage& img, double factor);

/// Bilinear sample at a real coordinate; coordinates are clamped to the
/// valid sampling area [0, w-1] x [0, h-1].
double bilinear_sample(const ScalarImage& img, double x, double y);

/// Pixels with intensity >= frac*n that are also strictly positive.
BinaryMask threshold_mask(const ScalarImage& img, double frac);

/// Largest 4-connected component of `mask`. Ties go to the component
/// reached first in raster order.
BinaryMask largest_component(const BinaryMask& mask);

/// threshold_mask followed by largest_component. Throws NoForeground when
/// nothing survives.
BinaryMask foreground_mask(const ScalarImage& img, double frac = 0.1);

}  // namespace treering
