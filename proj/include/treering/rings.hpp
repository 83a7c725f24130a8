#pragma once

#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "treering/image.hpp"
#include "treering/polar.hpp"

namespace treering {

/// Which per-row extrema mark ring boundaries. Most conifers show rings as
/// intensity ridges; other species as valleys.
enum class RingMode { Ridges, Valleys };

enum class ExtremumKind { Min, Max };

struct DetectionParams {
  double blur = 1.0;
  double t_pre = 0.0;    ///< fraction of n, in [0, 0.2]
  double t_post = 0.01;  ///< fraction of n, in [0, 0.2]
  RingMode mode = RingMode::Ridges;

  /// Throws InvalidParameter when a field is out of range.
  void validate() const;
};

/// Per-row local extrema of an image. Plateaus carry one mark at their
/// leftmost pixel; row endpoints are never marked.
struct ExtremaMask {
  BinaryMask maxima;
  BinaryMask minima;

  const BinaryMask& of(ExtremumKind kind) const { return kind == ExtremumKind::Max ? maxima : minima; }
};

inline constexpr double kUnboundedArea = std::numeric_limits<double>::infinity();

struct PersistenceRecord {
  int x = 0;
  int y = 0;
  double area_left = 0.0;
  double area_right = 0.0;
  double value = 0.0;
  std::optional<int> left_bound;   ///< nullopt: no lower pixel on that side
  std::optional<int> right_bound;
};

/// Detected ring boundaries on one ray. `row` is the unpadded angle bin.
struct RingMarks {
  int z = 0;
  int row = 0;
  std::vector<int> positions;
  std::vector<double> persistence;

  bool operator==(const RingMarks&) const = default;
};

/// Marks for one row; `maxima`/`minima` receive column indices.
void row_extrema(std::span<const double> row, std::vector<int>& maxima, std::vector<int>& minima);

ExtremaMask extract_row_extrema(const ScalarImage& img);

/// Area-based persistence of the extremum at `x_p`. For maxima the row is
/// negated first. The marked pixel's plateau is treated as one point; the
/// left bound is the nearest strictly lower pixel, the right bound the
/// nearest pixel past the plateau that is lower or equal. A side without a
/// bound has area kUnboundedArea. Throws NotAnExtremum when `x_p` is not
/// marked in the row.
PersistenceRecord area_persistence_row(std::span<const double> row, int x_p, ExtremumKind kind);

/// Blur, then clamp from below at t_pre * n where n is the maximum of the
/// unblurred image.
ScalarImage preprocess(const ScalarImage& img, const DetectionParams& params);
ScalarImage preprocess(const PolarImage& polar, const DetectionParams& params);

/// Keeps extrema of the mode's kind with persistence >= threshold, for
/// padded rows [first_row, first_row + row_count). Output rows are
/// renumbered from 0.
std::vector<RingMarks> persistence_filter(const ScalarImage& img, const ExtremaMask& mask,
                                          RingMode mode, double threshold, int first_row,
                                          int row_count);

/// Overload using `params.t_post * n` as threshold over every row.
std::vector<RingMarks> persistence_filter(const ScalarImage& img, const ExtremaMask& mask,
                                          const DetectionParams& params, double n);

/// preprocess -> extract_row_extrema -> persistence_filter on the unpadded
/// rows of `polar`.
std::vector<RingMarks> detect_rings(const PolarImage& polar, const DetectionParams& params);

/// Same pipeline restricted to a single unpadded row.
RingMarks detect_rings_row(const PolarImage& polar, const DetectionParams& params, int row);

/// Filters one already preprocessed row; shared by detect_rings and the
/// parameter sweep.
RingMarks marks_for_row(std::span<const double> row, RingMode mode, double threshold);

}  // namespace treering
