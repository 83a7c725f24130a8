// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "test_util.hpp"
#include "treering/cli.hpp"
#include "treering/evaluation.hpp"
#include "treering/formats.hpp"
#include "treering/pith.hpp"
#include "treering/polar.hpp"
#include "treering/rings.hpp"
#include "treering/synth.hpp"

using namespace treering;
using nlohmann::json;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), f, args...);
  return buf;
}

bool run_criterion(int id, const char* name, double limit_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = limit_s <= 0 || secs < limit_s;
  const bool pass = o.pass && in_time;
  std::string timing = fmt("%.2f s", secs);
  if (limit_s > 0) timing += fmt(" (limit %.0f s)", limit_s);
  std::printf("%s [%d] %s: %s; %s\n", pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), timing.c_str());
  std::fflush(stdout);
  return pass;
}

std::vector<double> as_doubles(const std::vector<int>& v) { return {v.begin(), v.end()}; }

// Full library pipeline on one slice: center, polar, detection.
std::vector<RingMarks> pipeline(const ScalarImage& img, const DetectionParams& params) {
  const auto est = locate_stack_centers({img}, CenterParams{});
  return detect_rings(to_polar(img, est.fitted_centers[0], 720, 16), params);
}

DiskSpec ring_disk(std::uint64_t seed, double noise) {
  DiskSpec s;
  for (int i = 1; i <= 9; ++i) s.radii.push_back(18.0 * i);
  s.noise_amplitude = noise;
  s.seed = seed;
  return s;
}

Outcome persistence_oracle() {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> len(3, 32);
  long checked = 0, bad = 0;
  for (int t = 0; t < 1000; ++t) {
    const auto row = oracle::random_row(rng, len(rng), 9);
    std::vector<double> neg(row);
    for (double& v : neg) v = -v;
    std::vector<int> maxima, minima;
    row_extrema(row, maxima, minima);
    auto compare = [&](const std::vector<double>& f, int x, ExtremumKind kind, const std::vector<double>& as_min) {
      const auto rec = area_persistence_row(f, x, kind);
      const auto ref = oracle::brute_min_persistence(as_min, x);
      ++checked;
      if (rec.area_left != ref.left || rec.area_right != ref.right || rec.value != ref.value ||
          rec.left_bound != ref.left_bound || rec.right_bound != ref.right_bound)
        ++bad;
    };
    for (int x : minima) compare(row, x, ExtremumKind::Min, row);
    for (int x : maxima) compare(row, x, ExtremumKind::Max, neg);
  }
  return {bad == 0 && checked > 0, fmt("%ld extrema over 1000 rows, %ld mismatches", checked, bad)};
}

Outcome edit_distance_oracle() {
  std::vector<std::vector<double>> sets;
  for (unsigned m = 0; m < 1024; ++m) {
    std::vector<double> s;
    for (int i = 0; i < 10; ++i)
      if (m & (1u << i)) s.push_back(10.0 * i);
    if (s.size() <= 6) sets.push_back(s);
  }
  long bad = 0;
  for (const auto& a : sets)
    for (const auto& b : sets)
      if (edit_distance(a, b).total_cost != oracle::brute_edit_distance(a, b)) ++bad;
  const long pairs = static_cast<long>(sets.size() * sets.size());
  return {bad == 0, fmt("%ld sequence pairs, %ld mismatches", pairs, bad)};
}

Outcome center_recovery() {
  std::mt19937_64 rng(20);
  std::uniform_real_distribution<double> pos(160, 240), first(6, 10), unit(0, 1);
  std::uniform_int_distribution<int> count(5, 15);
  double worst = 0;
  int scale_mismatch = 0;
  for (int d = 0; d < 20; ++d) {
    DiskSpec s;
    s.center = {pos(rng), pos(rng)};
    const int n = count(rng);
    const double r0 = first(rng);
    const double room = inscribed_radius(s.width, s.height, s.center) - s.margin - 1 - r0;
    const double max_gap = room / (n - 1);
    double r = r0;
    for (int i = 0; i < n; ++i) {
      s.radii.push_back(r);
      r += 10 + unit(rng) * (max_gap - 10);
    }
    s.seed = static_cast<std::uint64_t>(d);
    const auto disk = generate_disk(s);
    const auto mask = foreground_mask(disk.image);
    const Point2 c = locate_center(disk.image, mask);
    worst = std::max({worst, std::abs(c.x - s.center.x), std::abs(c.y - s.center.y)});
    if (!(locate_center(scale_image(disk.image, 7.0), mask) == c)) ++scale_mismatch;
  }
  return {worst <= 3.0 && scale_mismatch == 0,
          fmt("20 disks, worst axis error %.2f px (tol 3), %d argmin changes under 7x scaling", worst,
              scale_mismatch)};
}

Outcome end_to_end() {
  const DetectionParams params{1, 0, 0.01, RingMode::Ridges};
  const int rays[8] = {0, 90, 180, 270, 360, 450, 540, 630};

  const auto clean_spec = ring_disk(0, 0.0);
  const auto clean = pipeline(generate_disk(clean_spec).image, params);
  int clean_zero = 0;
  for (int row : rays)
    clean_zero += edit_distance(clean_spec.radii, as_doubles(clean[static_cast<std::size_t>(row)].positions))
                      .total_cost == 0;

  int noisy_ok = 0, noisy_total = 0;
  double worst = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto spec = ring_disk(seed, 0.05);
    const auto marks = pipeline(generate_disk(spec).image, params);
    const double tol = 2.0 * 2.0 * static_cast<double>(spec.radii.size());
    for (int row : rays) {
      const double cost =
          edit_distance(spec.radii, as_doubles(marks[static_cast<std::size_t>(row)].positions)).total_cost;
      worst = std::max(worst, cost);
      noisy_ok += cost <= tol;
      ++noisy_total;
    }
  }
  const double frac = static_cast<double>(noisy_ok) / noisy_total;
  return {clean_zero == 8 && frac >= 0.9,
          fmt("noiseless cost 0 on %d/8 rays; noise 0.05: %d/%d rays within 4*rings (%.0f%%, need 90%%), "
              "worst cost %g",
              clean_zero, noisy_ok, noisy_total, 100 * frac, worst)};
}

Outcome sweep_smoke() {
  const auto blurs = default_blur_values();
  const auto ts = default_threshold_values();
  auto has = [](const std::vector<double>& v, double x) { return std::find(v.begin(), v.end(), x) != v.end(); };
  const bool optima = has(blurs, 1) && has(ts, 0.12) && has(ts, 0.02) && has(blurs, 2) && has(ts, 0.16) && has(ts, 0);

  const auto spec = ring_disk(7, 0.05);
  const auto img = generate_disk(spec).image;
  const auto est = locate_stack_centers({img}, CenterParams{});
  const auto polar = to_polar(img, est.fitted_centers[0], 720, 16);
  int ok = 0;
  double best_sum = 0, raw_sum = 0;
  for (int row : {0, 180, 360, 540}) {
    const auto grid = run_sweep(polar, spec.radii, row, blurs, ts, ts, RingMode::Ridges);
    const auto best = grid.best();
    ok += best.cost <= grid.cost(0, 0, 0);
    best_sum += best.cost;
    raw_sum += grid.cost(0, 0, 0);
  }
  return {optima && ok == 4,
          fmt("grid holds both reported optima: %s; best <= (0,0,0) on %d/4 rays (mean %g vs %g)",
              optima ? "yes" : "no", ok, best_sum / 4, raw_sum / 4)};
}

Outcome invariants() {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0, 100);
  std::vector<std::string> failed;
  auto require = [&](bool ok, const char* what) {
    if (!ok) failed.push_back(what);
  };
  auto random_image = [&](int w, int h) {
    std::vector<double> d(static_cast<std::size_t>(w) * h);
    for (double& v : d) v = u(rng);
    return ScalarImage(w, h, d);
  };

  {
    const auto a = random_image(17, 13), b = random_image(17, 13);
    std::vector<double> sum(a.pixels().begin(), a.pixels().end());
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] = 2 * sum[i] + 3 * b.pixels()[i];
    const auto k = SobelBank::xy();
    const auto lhs = convolve3x3(ScalarImage(17, 13, sum), k);
    const auto ca = convolve3x3(a, k), cb = convolve3x3(b, k);
    double err = 0;
    for (std::size_t i = 0; i < sum.size(); ++i)
      err = std::max(err, std::abs(lhs.pixels()[i] - 2 * ca.pixels()[i] - 3 * cb.pixels()[i]));
    require(err < 1e-9, "convolution linearity");
  }
  {
    double err = 0;
    for (double s : {0.5, 1.0, 2.0, 3.0}) {
      const auto blurred = gaussian_blur(ScalarImage(21, 9, 42.5), s);
      for (double v : blurred.pixels()) err = std::max(err, std::abs(v - 42.5));
    }
    require(err < 1e-9, "blur constant preservation");
  }
  {
    const auto img = random_image(30, 30);
    bool mono = true;
    for (int i = 1; i <= 10; ++i) {
      const auto lo = threshold_mask(img, (i - 1) / 10.0), hi = threshold_mask(img, i / 10.0);
      for (int y = 0; y < 30; ++y)
        for (int x = 0; x < 30; ++x) mono &= !hi.at(x, y) || lo.at(x, y);
    }
    require(mono, "mask monotonicity");
  }
  {
    // Bilinear sampling reproduces affine images exactly, so polar pixels must
    // equal the affine function at their Cartesian positions.
    std::vector<double> d(101 * 91);
    for (int y = 0; y < 91; ++y)
      for (int x = 0; x < 101; ++x) d[static_cast<std::size_t>(y) * 101 + x] = 0.7 * x - 0.3 * y + 50;
    const Point2 c{50.25, 44.5};
    const auto polar = to_polar(ScalarImage(101, 91, d), c, 360, 16);
    double err = 0;
    std::uniform_int_distribution<int> row(0, 359), col(0, polar.base.width() - 1);
    for (int i = 0; i < 100; ++i) {
      const int a = row(rng), r = col(rng);
      const double th = 2 * std::numbers::pi * a / 360;
      const double want = 0.7 * (c.x + r * std::cos(th)) - 0.3 * (c.y + r * std::sin(th)) + 50;
      err = std::max(err, std::abs(polar.base.at(r, polar.padded_row(a)) - want));
    }
    require(err <= 1e-6, "polar round-trip");
    bool wrap = true;
    for (int p = 0; p < 16; ++p)
      for (int x = 0; x < polar.base.width(); ++x) wrap &= polar.base.at(x, p) == polar.base.at(x, polar.padded_row(360 - 16 + p));
    require(wrap, "wrap-pad identity");
  }
  {
    bool shift = true, dual = true;
    for (int t = 0; t < 300; ++t) {
      const auto row = oracle::random_row(rng, 3 + t % 30, 9);
      std::vector<double> shifted(row), neg(row);
      for (double& v : shifted) v += 17;
      for (double& v : neg) v = -v;
      std::vector<int> mx, mn, nmx, nmn;
      row_extrema(row, mx, mn);
      row_extrema(neg, nmx, nmn);
      dual &= nmn == mx && nmx == mn;
      for (int x : mn)
        shift &= area_persistence_row(row, x, ExtremumKind::Min).value ==
                 area_persistence_row(shifted, x, ExtremumKind::Min).value;
      for (int x : mx)
        dual &= area_persistence_row(row, x, ExtremumKind::Max).value ==
                area_persistence_row(neg, x, ExtremumKind::Min).value;
    }
    require(shift, "persistence shift invariance");
    require(dual, "persistence min/max duality");
  }
  {
    const auto img = random_image(60, 20);
    const auto mask = extract_row_extrema(img);
    bool mono = true;
    std::vector<RingMarks> prev;
    for (int i = 0; i <= 10; ++i) {
      const auto cur = persistence_filter(img, mask, {0, 0, i / 50.0, RingMode::Valleys}, img.max_intensity());
      if (!prev.empty())
        for (std::size_t y = 0; y < cur.size(); ++y)
          for (int x : cur[y].positions)
            mono &= std::find(prev[y].positions.begin(), prev[y].positions.end(), x) != prev[y].positions.end();
      prev = cur;
    }
    require(mono, "filter monotonicity in t_post");
  }
  {
    bool ok = true;
    std::uniform_int_distribution<int> n(0, 8);
    for (int t = 0; t < 300; ++t) {
      std::vector<double> a(static_cast<std::size_t>(n(rng))), b(static_cast<std::size_t>(n(rng)));
      for (double& v : a) v = std::round(u(rng));
      for (double& v : b) v = std::round(u(rng));
      std::sort(a.begin(), a.end());
      std::sort(b.begin(), b.end());
      ok &= edit_distance(a, b).total_cost == edit_distance(b, a).total_cost;
      ok &= edit_distance(a, a).total_cost == 0;
    }
    require(ok, "edit-distance symmetry and identity");
  }
  {
    const auto spec = ring_disk(3, 0.05);
    const auto img = generate_disk(spec).image;
    const auto polar = to_polar(img, {200, 200}, 720, 16);
    const auto ts = default_threshold_values();
    const auto g1 = run_sweep(polar, spec.radii, 90, default_blur_values(), ts, ts, RingMode::Ridges);
    const auto g2 = run_sweep(polar, spec.radii, 90, default_blur_values(), ts, ts, RingMode::Ridges);
    require(g1 == g2 && write_heatmap(g1, 1) == write_heatmap(g2, 1), "sweep determinism");
  }

  std::string detail = "11 invariant families checked";
  if (!failed.empty()) {
    detail += "; failed:";
    for (const auto& f : failed) detail += " [" + f + "]";
  }
  return {failed.empty(), detail};
}

int cli(std::vector<std::string> args) {
  args.insert(args.begin(), "treering");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  if (code != 0) throw std::runtime_error("treering " + args[1] + " exited " + std::to_string(code) + ": " + err.str());
  return code;
}

// Rewrites each line of a ring file through the declared field formats.
std::string reformat_ring_file(const std::string& text) {
  std::istringstream in(text);
  std::string out, line;
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    std::string row, radius, pers, extra;
    if (!std::getline(fields, row, '\t') || !std::getline(fields, radius, '\t') || !std::getline(fields, pers, '\t') ||
        std::getline(fields, extra, '\t'))
      throw std::runtime_error("bad ring line: " + line);
    out += format_number(parse_number(row)) + '\t' + format_number(parse_number(radius)) + '\t' +
           format_number(parse_number(pers)) + '\n';
  }
  return out;
}

Outcome format_round_trip() {
  TempDir dir("acceptance");
  std::string detail;
  bool ok = true;
  for (const char* depth : {"8", "16"}) {
    const auto base = dir.path() / (std::string("depth") + depth);
    const auto data = base / "synth", run = base / "run";
    cli({"synth", "--out", data.string(), "--radii", "20,40,60,80,100,120,140", "--bit-depth", depth, "--slices",
         "2", "--drift-x", "1"});
    cli({"pipeline", data.string(), "--out-dir", run.string(), "--mode", "ridges", "--keep-polar"});
    cli({"score", (data / "truth_radii.txt").string(), (run / "rings_z000.txt").string(), "--angular-bins", "720",
         "--out", (base / "score.json").string()});
    cli({"sweep", (run / "polar_z001.png").string(), (data / "truth_radii.txt").string(), "--out-dir",
         (base / "sweep").string(), "--mode", "ridges", "--row", "0", "--blurs", "1"});

    const auto truth_text = read_text_file(data / "truth_radii.txt");
    const auto rings_text = read_text_file(run / "rings_z000.txt");
    const auto centers_text = read_text_file(run / "centers.jsonl");
    const bool truth_exact = format_truth_file(read_truth_file(data / "truth_radii.txt")) == truth_text;
    const bool rings_exact = reformat_ring_file(rings_text) == rings_text;
    const bool centers_exact = format_centers_jsonl(parse_centers_jsonl(centers_text)) == centers_text;
    const auto polar = read_polar(run / "polar_z000.png");
    write_polar(base / "again.png", polar);
    const bool polar_exact = read_text_file(base / "again.png") == read_text_file(run / "polar_z000.png") &&
                             read_text_file(base / "again.json") == read_text_file(run / "polar_z000.json");
    const double cost = json::parse(read_text_file(base / "score.json"))["total_cost"].get<double>();
    const bool sweep_ok = std::filesystem::exists(base / "sweep" / "heatmap_blur_1.csv");

    const bool pass = truth_exact && rings_exact && centers_exact && polar_exact && cost == 0 && sweep_ok;
    ok &= pass;
    detail += fmt("%s%s-bit: truth %s, rings %s, centers %s, polar %s, score %g", detail.empty() ? "" : "; ", depth,
                  truth_exact ? "ok" : "DIFF", rings_exact ? "ok" : "DIFF", centers_exact ? "ok" : "DIFF",
                  polar_exact ? "ok" : "DIFF", cost);
  }
  return {ok, detail};
}

}  // namespace

int main() {
  bool all = true;
  all &= run_criterion(1, "persistence oracle", 5, persistence_oracle);
  all &= run_criterion(2, "edit-distance oracle", 30, edit_distance_oracle);
  all &= run_criterion(3, "center recovery", 60, center_recovery);
  all &= run_criterion(4, "end-to-end ring recovery", 0, end_to_end);
  all &= run_criterion(5, "reported-parameter sweep smoke test", 0, sweep_smoke);
  all &= run_criterion(6, "invariant suites", 0, invariants);
  all &= run_criterion(7, "format round-trip", 0, format_round_trip);
  std::printf("%s\n", all ? "ALL CRITERIA PASS" : "SOME CRITERIA FAIL");
  return all ? 0 : 1;
}
