#include "treering/image.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>
#include <utility>

#include "treering/error.hpp"

namespace treering {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ImageTooSmall: return "ImageTooSmall";
    case ErrorCode::NoForeground: return "NoForeground";
    case ErrorCode::UnreadableFile: return "UnreadableFile";
    case ErrorCode::MixedDimensions: return "MixedDimensions";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::CenterOutOfBounds: return "CenterOutOfBounds";
    case ErrorCode::DegenerateRadius: return "DegenerateRadius";
    case ErrorCode::NotAnExtremum: return "NotAnExtremum";
    case ErrorCode::UnsortedInput: return "UnsortedInput";
    case ErrorCode::RowOutOfRange: return "RowOutOfRange";
    case ErrorCode::BlurNotInGrid: return "BlurNotInGrid";
    case ErrorCode::EmptyGrid: return "EmptyGrid";
    case ErrorCode::SpecInvalid: return "SpecInvalid";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::MalformedFile: return "MalformedFile";
  }
  return "Unknown";
}

ScalarImage::ScalarImage(int width, int height, double fill)
    : ScalarImage(width, height,
                  std::vector<double>(static_cast<std::size_t>(std::max(width, 0)) *
                                          static_cast<std::size_t>(std::max(height, 0)),
                                      fill)) {}

ScalarImage::ScalarImage(int width, int height, std::vector<double> data)
    : width_(width), height_(height), data_(std::move(data)) {
  if (width < 0 || height < 0 ||
      data_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw Error(ErrorCode::DimensionMismatch,
                "pixel buffer of " + std::to_string(data_.size()) + " values does not match " +
                    std::to_string(width) + "x" + std::to_string(height));
  }
  if (!data_.empty()) max_ = *std::max_element(data_.begin(), data_.end());
}

BinaryMask::BinaryMask(int width, int height, bool fill)
    : width_(width),
      height_(height),
      bits_(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill ? 1 : 0) {}

std::size_t BinaryMask::count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), 1));
}

double Kernel3x3::sum() const {
  // Positive and negative parts separately, so mirrored kernels cancel exactly.
  double pos = 0.0, neg = 0.0;
  for (double v : k) (v > 0 ? pos : neg) += v;
  return pos + neg;
}

ScalarImage convolve3x3(const ScalarImage& img, const Kernel3x3& kernel) {
  const int w = img.width();
  const int h = img.height();
  if (w < 3 || h < 3) {
    throw Error(ErrorCode::ImageTooSmall,
                "convolution needs at least 3x3, got " + std::to_string(w) + "x" + std::to_string(h));
  }
  std::vector<double> out(img.size());
  for (int y = 0; y < h; ++y) {
    const int ys[3] = {std::max(y - 1, 0), y, std::min(y + 1, h - 1)};
    for (int x = 0; x < w; ++x) {
      const int xs[3] = {std::max(x - 1, 0), x, std::min(x + 1, w - 1)};
      double acc = 0.0;
      for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) acc += kernel(r, c) * img.at(xs[c], ys[r]);
      out[static_cast<std::size_t>(y) * w + x] = acc;
    }
  }
  return ScalarImage(w, h, std::move(out));
}

std::vector<double> gaussian_kernel(double sigma) {
  if (!(sigma > 0.0)) throw Error(ErrorCode::InvalidParameter, "gaussian kernel needs sigma > 0");
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> taps(static_cast<std::size_t>(2 * radius + 1));
  double total = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    const double v = std::exp(-(i * i) / (2.0 * sigma * sigma));
    taps[static_cast<std::size_t>(i + radius)] = v;
    total += v;
  }
  for (double& v : taps) v /= total;
  return taps;
}

ScalarImage gaussian_blur(const ScalarImage& img, double sigma) {
  if (sigma < 0.0 || !std::isfinite(sigma)) {
    throw Error(ErrorCode::InvalidParameter, "blur sigma must be a finite value >= 0");
  }
  if (sigma == 0.0 || img.empty()) return img;

  const std::vector<double> taps = gaussian_kernel(sigma);
  const int radius = static_cast<int>(taps.size() / 2);
  const int w = img.width();
  const int h = img.height();

  std::vector<double> horiz(img.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int i = -radius; i <= radius; ++i) {
        const int xx = std::clamp(x + i, 0, w - 1);
        acc += taps[static_cast<std::size_t>(i + radius)] * img.at(xx, y);
      }
      horiz[static_cast<std::size_t>(y) * w + x] = acc;
    }
  }
  std::vector<double> out(img.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int i = -radius; i <= radius; ++i) {
        const int yy = std::clamp(y + i, 0, h - 1);
        acc += taps[static_cast<std::size_t>(i + radius)] * horiz[static_cast<std::size_t>(yy) * w + x];
      }
      out[static_cast<std::size_t>(y) * w + x] = acc;
    }
  }
  return ScalarImage(w, h, std::move(out));
}

ScalarImage abs_image(const ScalarImage& img) {
  std::vector<double> out(img.pixels().begin(), img.pixels().end());
  for (double& v : out) v = std::abs(v);
  return ScalarImage(img.width(), img.height(), std::move(out));
}

ScalarImage scale_image(const ScalarImage& img, double factor) {
  std::vector<double> out(img.pixels().begin(), img.pixels().end());
  for (double& v : out) v *= factor;
  return ScalarImage(img.width(), img.height(), std::move(out));
}

double bilinear_sample(const ScalarImage& img, double x, double y) {
  const int w = img.width();
  const int h = img.height();
  x = std::clamp(x, 0.0, static_cast<double>(w - 1));
  y = std::clamp(y, 0.0, static_cast<double>(h - 1));
  const int x0 = std::min(static_cast<int>(std::floor(x)), std::max(w - 2, 0));
  const int y0 = std::min(static_cast<int>(std::floor(y)), std::max(h - 2, 0));
  const int x1 = std::min(x0 + 1, w - 1);
  const int y1 = std::min(y0 + 1, h - 1);
  const double fx = x - x0;
  const double fy = y - y0;
  const double top = img.at(x0, y0) * (1.0 - fx) + img.at(x1, y0) * fx;
  const double bottom = img.at(x0, y1) * (1.0 - fx) + img.at(x1, y1) * fx;
  return top * (1.0 - fy) + bottom * fy;
}

BinaryMask threshold_mask(const ScalarImage& img, double frac) {
  if (!(frac >= 0.0 && frac <= 1.0)) {
    throw Error(ErrorCode::InvalidParameter, "mask fraction must lie in [0, 1]");
  }
  const double cut = frac * img.max_intensity();
  BinaryMask mask(img.width(), img.height());
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x) {
      const double v = img.at(x, y);
      if (v >= cut && v > 0.0) mask.set(x, y, true);
    }
  return mask;
}

BinaryMask largest_component(const BinaryMask& mask) {
  const int w = mask.width();
  const int h = mask.height();
  std::vector<int> label(static_cast<std::size_t>(w) * h, -1);
  std::vector<std::size_t> sizes;
  std::queue<std::pair<int, int>> frontier;

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t idx = static_cast<std::size_t>(y) * w + x;
      if (!mask.at(x, y) || label[idx] >= 0) continue;
      const int id = static_cast<int>(sizes.size());
      std::size_t n = 0;
      label[idx] = id;
      frontier.emplace(x, y);
      while (!frontier.empty()) {
        auto [cx, cy] = frontier.front();
        frontier.pop();
        ++n;
        constexpr int dx[4] = {1, -1, 0, 0};
        constexpr int dy[4] = {0, 0, 1, -1};
        for (int d = 0; d < 4; ++d) {
          const int nx = cx + dx[d];
          const int ny = cy + dy[d];
          if (nx < 0 || ny < 0 || nx >= w || ny >= h || !mask.at(nx, ny)) continue;
          int& l = label[static_cast<std::size_t>(ny) * w + nx];
          if (l < 0) {
            l = id;
            frontier.emplace(nx, ny);
          }
        }
      }
      sizes.push_back(n);
    }
  }

  BinaryMask out(w, h);
  if (sizes.empty()) return out;
  const int best = static_cast<int>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (label[static_cast<std::size_t>(y) * w + x] == best) out.set(x, y, true);
  return out;
}

BinaryMask foreground_mask(const ScalarImage& img, double frac) {
  if (img.empty()) throw Error(ErrorCode::NoForeground, "empty image");
  BinaryMask mask = largest_component(threshold_mask(img, frac));
  if (!mask.any()) {
    throw Error(ErrorCode::NoForeground, "no pixel reaches the mask threshold");
  }
  return mask;
}

}  // namespace treering
