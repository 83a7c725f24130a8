#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "treering/polar.hpp"

namespace fixture {

// Polar image whose every row carries Gaussian ridges at the given radii
// over a 0.3 floor, plus uniform noise of the given amplitude.
inline treering::PolarImage ring_polar(const std::vector<double>& radii, double width, double noise, int bins,
                                       int pad, std::uint64_t seed = 1, int w = 80) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<double> profile(static_cast<std::size_t>(w));
  for (int x = 0; x < w; ++x) {
    double v = 0.3;
    for (double r : radii) v += 0.7 * std::exp(-0.5 * std::pow((x - r) / width, 2));
    profile[static_cast<std::size_t>(x)] = v;
  }
  std::vector<double> rows;
  for (int y = 0; y < bins; ++y)
    for (int x = 0; x < w; ++x) rows.push_back(profile[static_cast<std::size_t>(x)] + noise * u(rng));
  std::vector<double> data(rows.end() - static_cast<std::ptrdiff_t>(pad) * w, rows.end());
  data.insert(data.end(), rows.begin(), rows.end());
  return treering::PolarImage{treering::ScalarImage(w, bins + pad, data), pad, {0, 0}, bins,
                              static_cast<double>(w)};
}

}  // namespace fixture
