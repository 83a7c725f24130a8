#pragma once

#include <string>
#include <utility>
#include <vector>

#include "treering/polar.hpp"
#include "treering/rings.hpp"

namespace treering {

/// Cost model for ring scoring: a fixed price for each missing or extra
/// ring, and |dx| in pixels for each matched pair.
struct EditCosts {
  double add_cost = 200.0;
  double remove_cost = 200.0;

  void validate() const;
};

struct MatchResult {
  double total_cost = 0.0;
  std::vector<std::pair<int, int>> pairs;  ///< (truth index, detection index)
  std::vector<int> unmatched_truth;
  std::vector<int> unmatched_detection;
};

/// Monotone alignment of two sorted position lists. Throws UnsortedInput
/// if either list decreases anywhere.
MatchResult edit_distance(const std::vector<double>& truth, const std::vector<double>& detected,
                          const EditCosts& costs = {});

/// Costs over a blur x t_pre x t_post grid for one ray.
class SweepGrid {
 public:
  struct Best {
    double blur = 0.0;
    double t_pre = 0.0;
    double t_post = 0.0;
    double cost = 0.0;
  };

  /// Throws EmptyGrid when any axis has no values.
  SweepGrid(std::vector<double> blurs, std::vector<double> t_pres, std::vector<double> t_posts);

  const std::vector<double>& blurs() const { return blurs_; }
  const std::vector<double>& t_pres() const { return t_pres_; }
  const std::vector<double>& t_posts() const { return t_posts_; }

  double cost(std::size_t b, std::size_t pre, std::size_t post) const { return costs_[index(b, pre, post)]; }
  void set_cost(std::size_t b, std::size_t pre, std::size_t post, double v) { costs_[index(b, pre, post)] = v; }
  const std::vector<double>& costs() const { return costs_; }

  /// Minimum cell; ties go to the lexicographically smallest
  /// (blur, t_pre, t_post).
  Best best() const;

  bool operator==(const SweepGrid&) const = default;

 private:
  std::size_t index(std::size_t b, std::size_t pre, std::size_t post) const {
    return (b * t_pres_.size() + pre) * t_posts_.size() + post;
  }

  std::vector<double> blurs_;
  std::vector<double> t_pres_;
  std::vector<double> t_posts_;
  std::vector<double> costs_;
};

/// Grid defaults: blur {0,1,2,3}; thresholds 0 to 0.2 in steps of 0.02.
std::vector<double> default_blur_values();
std::vector<double> default_threshold_values();

/// Runs detection on one unpadded row for every grid cell and scores it
/// against `truth_row`. Cells run in parallel; results do not depend on
/// scheduling.
SweepGrid run_sweep(const PolarImage& polar, const std::vector<double>& truth_row, int row,
                    std::vector<double> blurs, std::vector<double> t_pres,
                    std::vector<double> t_posts, RingMode mode, const EditCosts& costs = {});

/// Heat map of the t_pre x t_post plane at `fixed_blur` as CSV, with a
/// trailing comment naming the global best cell. Throws BlurNotInGrid.
std::string write_heatmap(const SweepGrid& grid, double fixed_blur);

}  // namespace treering
