#include "treering/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "treering/error.hpp"
#include "treering/polar.hpp"

namespace treering {

void DiskSpec::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::SpecInvalid, msg); };
  if (width < 3 || height < 3) fail("image must be at least 3x3");
  if (!(center.x >= 0 && center.y >= 0 && center.x <= width - 1 && center.y <= height - 1)) {
    fail("center outside the image");
  }
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0)) fail("ring radii must be positive");
    if (i > 0 && !(radii[i] > radii[i - 1])) fail("ring radii must be strictly increasing");
  }
  if (!radii.empty() && !(radii.back() < inscribed_radius(width, height, center))) {
    fail("largest ring radius reaches the image border");
  }
  if (!(ring_amplitude > 0.0 && ring_amplitude <= 1.0)) fail("ring amplitude must lie in (0, 1]");
  if (!(ring_width > 0.0)) fail("ring width must be positive");
  if (!(full_scale > 0.0)) fail("full scale must be positive");
  if (!(noise_amplitude >= 0.0)) fail("noise amplitude must be >= 0");
  if (!(margin >= 0.0)) fail("margin must be >= 0");
  if (crack && !(crack->width > 0.0)) fail("crack width must be positive");
}

double disk_profile(const DiskSpec& spec, double d) {
  const double edge = (spec.radii.empty() ? 0.0 : spec.radii.back()) + spec.margin;
  if (d > edge) return spec.background_intensity;
  const double sign = spec.valleys ? -1.0 : 1.0;
  const double amp = spec.ring_amplitude * spec.full_scale;
  double v = spec.base_intensity;
  for (double r : spec.radii) {
    const double t = (d - r) / spec.ring_width;
    v += sign * amp * std::exp(-0.5 * t * t);
  }
  return v;
}

namespace {

// Uniform [0, 1) from the top 53 bits, so noise is identical across standard libraries.
double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

bool in_crack(const Crack& crack, double dx, double dy) {
  const double ux = std::cos(crack.angle);
  const double uy = std::sin(crack.angle);
  const double along = dx * ux + dy * uy;
  const double across = std::abs(-dx * uy + dy * ux);
  return along >= 0.0 && across <= crack.width / 2.0;
}

}  // namespace

SynthDisk generate_disk(const DiskSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  const double noise = spec.noise_amplitude * spec.full_scale;

  std::vector<double> data(static_cast<std::size_t>(spec.width) * spec.height);
  for (int y = 0; y < spec.height; ++y) {
    for (int x = 0; x < spec.width; ++x) {
      const double dx = x - spec.center.x;
      const double dy = y - spec.center.y;
      double v = disk_profile(spec, std::hypot(dx, dy));
      if (spec.crack && in_crack(*spec.crack, dx, dy)) v = spec.background_intensity;
      if (noise > 0.0) v += noise * (2.0 * unit_uniform(rng) - 1.0);
      data[static_cast<std::size_t>(y) * spec.width + x] = std::clamp(v, 0.0, spec.full_scale);
    }
  }
  return {ScalarImage(spec.width, spec.height, std::move(data)), {spec.center, spec.radii}};
}

SynthStack generate_stack(const DiskSpec& spec, int slices, Point2 drift) {
  if (slices < 1) throw Error(ErrorCode::SpecInvalid, "need at least one slice");
  std::vector<DiskSpec> specs;
  for (int z = 0; z < slices; ++z) {
    DiskSpec s = spec;
    s.center = {spec.center.x + z * drift.x, spec.center.y + z * drift.y};
    s.seed = spec.seed + static_cast<std::uint64_t>(z);
    s.validate();
    specs.push_back(std::move(s));
  }

  SynthStack out;
  out.stack.slices.resize(specs.size());
  out.truth.resize(specs.size());
#pragma omp parallel for schedule(dynamic)
  for (int z = 0; z < slices; ++z) {
    SynthDisk disk = generate_disk(specs[static_cast<std::size_t>(z)]);
    out.stack.slices[static_cast<std::size_t>(z)] = std::move(disk.image);
    out.truth[static_cast<std::size_t>(z)] = std::move(disk.truth);
  }
  return out;
}

}  // namespace treering
