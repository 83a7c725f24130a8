#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "treering/image.hpp"

namespace treering {

/// Ordered CT slices sharing one width/height. Index in `slices` is z.
struct SliceStack {
  std::vector<ScalarImage> slices;
  std::vector<std::filesystem::path> sources;

  int width() const { return slices.empty() ? 0 : slices.front().width(); }
  int height() const { return slices.empty() ? 0 : slices.front().height(); }
  std::size_t depth() const { return slices.size(); }
};

/// Reads one single-channel 8- or 16-bit PNG/TIFF. Raw values are kept.
ScalarImage load_image(const std::filesystem::path& path);

/// A file yields a one-slice stack; a directory yields every supported
/// image inside it, ordered by filename.
SliceStack load_stack(const std::filesystem::path& path);

enum class BitDepth { Eight = 8, Sixteen = 16 };

/// Values are multiplied by `scale`, rounded and clamped to the range of
/// the chosen depth.
void save_png(const std::filesystem::path& path, const ScalarImage& img, BitDepth depth,
              double scale = 1.0);

bool is_supported_image(const std::filesystem::path& path);

}  // namespace treering
