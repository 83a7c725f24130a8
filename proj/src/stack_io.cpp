#include "treering/stack_io.hpp"

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>

#include "treering/error.hpp"

namespace fs = std::filesystem;

namespace treering {

namespace {

std::string lower_extension(const fs::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

}  // namespace

bool is_supported_image(const fs::path& path) {
  const std::string ext = lower_extension(path);
  return ext == ".png" || ext == ".tif" || ext == ".tiff";
}

ScalarImage load_image(const fs::path& path) {
  if (!is_supported_image(path)) {
    throw Error(ErrorCode::UnsupportedFormat, path.string() + " is not a PNG or TIFF file");
  }
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) {
    throw Error(ErrorCode::UnreadableFile, "cannot open " + path.string());
  }
  const cv::Mat mat = cv::imread(path.string(), cv::IMREAD_UNCHANGED);
  if (mat.empty()) throw Error(ErrorCode::UnreadableFile, "cannot decode " + path.string());
  if (mat.channels() != 1) {
    throw Error(ErrorCode::UnsupportedFormat,
                path.string() + " has " + std::to_string(mat.channels()) + " channels, expected 1");
  }
  if (mat.depth() != CV_8U && mat.depth() != CV_16U) {
    throw Error(ErrorCode::UnsupportedFormat, path.string() + " is neither 8-bit nor 16-bit");
  }

  std::vector<double> data(static_cast<std::size_t>(mat.rows) * mat.cols);
  for (int y = 0; y < mat.rows; ++y) {
    for (int x = 0; x < mat.cols; ++x) {
      const double v = mat.depth() == CV_8U ? mat.at<std::uint8_t>(y, x) : mat.at<std::uint16_t>(y, x);
      data[static_cast<std::size_t>(y) * mat.cols + x] = v;
    }
  }
  return ScalarImage(mat.cols, mat.rows, std::move(data));
}

SliceStack load_stack(const fs::path& path) {
  std::error_code ec;
  if (!fs::exists(path, ec)) throw Error(ErrorCode::UnreadableFile, "no such path " + path.string());

  std::vector<fs::path> files;
  if (fs::is_directory(path, ec)) {
    for (const auto& entry : fs::directory_iterator(path)) {
      if (entry.is_regular_file() && is_supported_image(entry.path())) files.push_back(entry.path());
    }
    if (files.empty()) {
      throw Error(ErrorCode::UnsupportedFormat, "no PNG or TIFF slices in " + path.string());
    }
    std::sort(files.begin(), files.end(),
              [](const fs::path& a, const fs::path& b) { return a.filename().string() < b.filename().string(); });
  } else {
    files.push_back(path);
  }

  SliceStack stack;
  for (const auto& file : files) {
    ScalarImage img = load_image(file);
    if (!stack.slices.empty() &&
        (img.width() != stack.width() || img.height() != stack.height())) {
      throw Error(ErrorCode::MixedDimensions,
                  file.string() + " is " + std::to_string(img.width()) + "x" +
                      std::to_string(img.height()) + " but earlier slices are " +
                      std::to_string(stack.width()) + "x" + std::to_string(stack.height()));
    }
    stack.slices.push_back(std::move(img));
    stack.sources.push_back(file);
  }
  return stack;
}

void save_png(const fs::path& path, const ScalarImage& img, BitDepth depth, double scale) {
  const bool wide = depth == BitDepth::Sixteen;
  const double top = wide ? 65535.0 : 255.0;
  cv::Mat mat(img.height(), img.width(), wide ? CV_16UC1 : CV_8UC1);
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      const double v = std::clamp(std::round(img.at(x, y) * scale), 0.0, top);
      if (wide)
        mat.at<std::uint16_t>(y, x) = static_cast<std::uint16_t>(v);
      else
        mat.at<std::uint8_t>(y, x) = static_cast<std::uint8_t>(v);
    }
  }
  if (!cv::imwrite(path.string(), mat)) {
    throw Error(ErrorCode::UnreadableFile, "cannot write " + path.string());
  }
}

}  // namespace treering
