#include "treering/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <sstream>
#include <tuple>

#include "treering/error.hpp"
#include "treering/formats.hpp"

namespace treering {

void EditCosts::validate() const {
  if (!(add_cost > 0.0) || !(remove_cost > 0.0)) {
    throw Error(ErrorCode::InvalidParameter, "add and remove costs must be positive");
  }
}

namespace {

void require_sorted(const std::vector<double>& v, const char* what) {
  if (!std::is_sorted(v.begin(), v.end())) {
    throw Error(ErrorCode::UnsortedInput, std::string(what) + " positions are not sorted ascending");
  }
}

}  // namespace

MatchResult edit_distance(const std::vector<double>& truth, const std::vector<double>& detected,
                          const EditCosts& costs) {
  costs.validate();
  require_sorted(truth, "truth");
  require_sorted(detected, "detected");

  const std::size_t m = truth.size();
  const std::size_t n = detected.size();
  const std::size_t stride = n + 1;
  std::vector<double> d((m + 1) * stride, 0.0);
  for (std::size_t i = 1; i <= m; ++i) d[i * stride] = d[(i - 1) * stride] + costs.add_cost;
  for (std::size_t j = 1; j <= n; ++j) d[j] = d[j - 1] + costs.remove_cost;
  for (std::size_t i = 1; i <= m; ++i) {
    for (std::size_t j = 1; j <= n; ++j) {
      d[i * stride + j] = std::min({d[(i - 1) * stride + j] + costs.add_cost,
                                    d[i * stride + j - 1] + costs.remove_cost,
                                    d[(i - 1) * stride + j - 1] + std::abs(truth[i - 1] - detected[j - 1])});
    }
  }

  MatchResult result;
  result.total_cost = d[m * stride + n];

  // Backtrace, preferring a match, then a missing truth point, then an extra detection.
  std::size_t i = m, j = n;
  while (i > 0 || j > 0) {
    const double here = d[i * stride + j];
    if (i > 0 && j > 0 &&
        here == d[(i - 1) * stride + j - 1] + std::abs(truth[i - 1] - detected[j - 1])) {
      result.pairs.emplace_back(static_cast<int>(i - 1), static_cast<int>(j - 1));
      --i;
      --j;
    } else if (i > 0 && here == d[(i - 1) * stride + j] + costs.add_cost) {
      result.unmatched_truth.push_back(static_cast<int>(i - 1));
      --i;
    } else {
      result.unmatched_detection.push_back(static_cast<int>(j - 1));
      --j;
    }
  }
  std::reverse(result.pairs.begin(), result.pairs.end());
  std::reverse(result.unmatched_truth.begin(), result.unmatched_truth.end());
  std::reverse(result.unmatched_detection.begin(), result.unmatched_detection.end());
  return result;
}

SweepGrid::SweepGrid(std::vector<double> blurs, std::vector<double> t_pres, std::vector<double> t_posts)
    : blurs_(std::move(blurs)), t_pres_(std::move(t_pres)), t_posts_(std::move(t_posts)) {
  if (blurs_.empty() || t_pres_.empty() || t_posts_.empty()) {
    throw Error(ErrorCode::EmptyGrid, "every sweep axis needs at least one value");
  }
  costs_.assign(blurs_.size() * t_pres_.size() * t_posts_.size(), 0.0);
}

SweepGrid::Best SweepGrid::best() const {
  Best best{0, 0, 0, std::numeric_limits<double>::infinity()};
  bool found = false;
  for (std::size_t b = 0; b < blurs_.size(); ++b)
    for (std::size_t p = 0; p < t_pres_.size(); ++p)
      for (std::size_t q = 0; q < t_posts_.size(); ++q) {
        const double c = cost(b, p, q);
        const auto key = std::make_tuple(blurs_[b], t_pres_[p], t_posts_[q]);
        if (!found || c < best.cost ||
            (c == best.cost && key < std::make_tuple(best.blur, best.t_pre, best.t_post))) {
          best = {blurs_[b], t_pres_[p], t_posts_[q], c};
          found = true;
        }
      }
  return best;
}

std::vector<double> default_blur_values() { return {0.0, 1.0, 2.0, 3.0}; }

std::vector<double> default_threshold_values() {
  std::vector<double> v;
  for (int i = 0; i <= 10; ++i) v.push_back(i / 50.0);
  return v;
}

SweepGrid run_sweep(const PolarImage& polar, const std::vector<double>& truth_row, int row,
                    std::vector<double> blurs, std::vector<double> t_pres,
                    std::vector<double> t_posts, RingMode mode, const EditCosts& costs) {
  if (row < 0 || row >= polar.angular_bins) {
    throw Error(ErrorCode::RowOutOfRange, "row " + std::to_string(row) + " outside [0, " +
                                              std::to_string(polar.angular_bins) + ")");
  }
  costs.validate();
  require_sorted(truth_row, "truth");
  SweepGrid grid(std::move(blurs), std::move(t_pres), std::move(t_posts));
  for (double b : grid.blurs()) DetectionParams{b, 0.0, 0.0, mode}.validate();
  for (double t : grid.t_pres()) DetectionParams{0.0, t, 0.0, mode}.validate();
  for (double t : grid.t_posts()) DetectionParams{0.0, 0.0, t, mode}.validate();

  const double n = polar.base.max_intensity();
  const int padded = polar.padded_row(row);
  const int nb = static_cast<int>(grid.blurs().size());
  const int npre = static_cast<int>(grid.t_pres().size());

  std::vector<ScalarImage> blurred(static_cast<std::size_t>(nb));
  std::vector<std::exception_ptr> failures(static_cast<std::size_t>(nb * npre));

#pragma omp parallel for schedule(dynamic)
  for (int b = 0; b < nb; ++b) {
    try {
      blurred[static_cast<std::size_t>(b)] = gaussian_blur(polar.base, grid.blurs()[static_cast<std::size_t>(b)]);
    } catch (...) {
      failures[static_cast<std::size_t>(b)] = std::current_exception();
    }
  }
  for (const auto& f : failures)
    if (f) std::rethrow_exception(f);

#pragma omp parallel for collapse(2) schedule(dynamic)
  for (int b = 0; b < nb; ++b) {
    for (int p = 0; p < npre; ++p) {
      try {
        const auto src = blurred[static_cast<std::size_t>(b)].row(padded);
        const double floor_level = grid.t_pres()[static_cast<std::size_t>(p)] * n;
        std::vector<double> line(src.begin(), src.end());
        for (double& v : line) v = std::max(v, floor_level);
        for (std::size_t q = 0; q < grid.t_posts().size(); ++q) {
          const RingMarks marks = marks_for_row(line, mode, grid.t_posts()[q] * n);
          const std::vector<double> detected(marks.positions.begin(), marks.positions.end());
          grid.set_cost(static_cast<std::size_t>(b), static_cast<std::size_t>(p), q,
                        edit_distance(truth_row, detected, costs).total_cost);
        }
      } catch (...) {
        failures[static_cast<std::size_t>(b * npre + p)] = std::current_exception();
      }
    }
  }
  for (const auto& f : failures)
    if (f) std::rethrow_exception(f);
  return grid;
}

std::string write_heatmap(const SweepGrid& grid, double fixed_blur) {
  const auto it = std::find(grid.blurs().begin(), grid.blurs().end(), fixed_blur);
  if (it == grid.blurs().end()) {
    throw Error(ErrorCode::BlurNotInGrid, "blur " + format_number(fixed_blur) + " is not a sweep value");
  }
  const auto b = static_cast<std::size_t>(it - grid.blurs().begin());

  std::ostringstream out;
  out << "t_pre\\t_post";
  for (double q : grid.t_posts()) out << ',' << format_number(q);
  out << '\n';
  for (std::size_t p = 0; p < grid.t_pres().size(); ++p) {
    out << format_number(grid.t_pres()[p]);
    for (std::size_t q = 0; q < grid.t_posts().size(); ++q) out << ',' << format_number(grid.cost(b, p, q));
    out << '\n';
  }
  const auto best = grid.best();
  out << "# best blur=" << format_number(best.blur) << " t_pre=" << format_number(best.t_pre)
      << " t_post=" << format_number(best.t_post) << " cost=" << format_number(best.cost) << '\n';
  return out.str();
}

}  // namespace treering
