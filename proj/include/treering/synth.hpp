#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "treering/image.hpp"
#include "treering/pith.hpp"
#include "treering/stack_io.hpp"

namespace treering {

struct Crack {
  double angle = 0.0;  ///< radians, direction of the crack from the center
  double width = 3.0;  ///< px
};

/// Synthetic tree disk: concentric Gaussian intensity bumps (one per ring)
/// on a uniform disk, optional radial crack, seeded uniform noise.
/// Intensities are raw values; amplitudes are fractions of `full_scale`.
struct DiskSpec {
  int width = 400;
  int height = 400;
  Point2 center{200.0, 200.0};
  std::vector<double> radii;
  double ring_width = 1.5;       ///< Gaussian sigma of each bump, px
  double ring_amplitude = 0.5;   ///< fraction of full_scale, in (0, 1]
  double base_intensity = 120.0;
  double background_intensity = 0.0;
  double margin = 8.0;           ///< disk edge = last radius + margin
  double full_scale = 255.0;
  double noise_amplitude = 0.0;  ///< fraction of full_scale; noise is U(-a, a)
  bool valleys = false;          ///< rings as dips instead of ridges
  std::optional<Crack> crack;
  std::uint64_t seed = 0;

  /// Throws SpecInvalid.
  void validate() const;
};

struct DiskTruth {
  Point2 center;
  std::vector<double> radii;
};

struct SynthDisk {
  ScalarImage image;
  DiskTruth truth;
};

/// Noise-free intensity at distance `d` from the center.
double disk_profile(const DiskSpec& spec, double d);

SynthDisk generate_disk(const DiskSpec& spec);

struct SynthStack {
  SliceStack stack;
  std::vector<DiskTruth> truth;
};

/// Slice z is generated with center + z * drift and seed + z.
SynthStack generate_stack(const DiskSpec& spec, int slices, Point2 drift);

}  // namespace treering
