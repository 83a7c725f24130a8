#include "treering/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "treering/error.hpp"
#include "treering/evaluation.hpp"
#include "treering/formats.hpp"
#include "treering/pith.hpp"
#include "treering/polar.hpp"
#include "treering/rings.hpp"
#include "treering/stack_io.hpp"
#include "treering/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace treering {

namespace {

constexpr int kExitProcessing = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct StageError : std::runtime_error {
  StageError(const std::string& stage, const std::string& what)
      : std::runtime_error("stage '" + stage + "' failed: " + what) {}
};

template <typename F>
auto in_stage(const std::string& stage, F&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    throw StageError(stage, e.what());
  }
}

std::string slice_tag(int z) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "z%03d", z);
  return buf;
}

RingMode parse_mode(const std::string& mode) {
  if (mode == "ridges") return RingMode::Ridges;
  if (mode == "valleys") return RingMode::Valleys;
  throw UsageError("--mode is required and must be 'ridges' or 'valleys'");
}

void check_params(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

// Fills options that were not given on the command line from a flat JSON
// object keyed by long option name.
void apply_params_json(CLI::App& sub, const std::string& path) {
  if (path.empty()) return;
  json params;
  try {
    params = json::parse(read_text_file(path));
  } catch (const json::exception& e) {
    throw UsageError("cannot parse " + path + ": " + e.what());
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  if (!params.is_object()) throw UsageError(path + ": expected a JSON object");

  auto to_text = [](const json& v) -> std::string {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_number()) return format_number(v.get<double>());
    throw UsageError("unsupported value " + v.dump());
  };

  for (const auto& [key, value] : params.items()) {
    std::string name = key;
    std::replace(name.begin(), name.end(), '_', '-');
    CLI::Option* opt = sub.get_option_no_throw("--" + name);
    if (opt == nullptr || name == "params-json") {
      throw UsageError(path + ": unknown parameter '" + key + "' for " + sub.get_name());
    }
    if (opt->count() > 0) continue;
    if (value.is_array()) {
      for (const auto& item : value) opt->add_result(to_text(item));
    } else {
      opt->add_result(to_text(value));
    }
    try {
      opt->run_callback();
    } catch (const CLI::Error& e) {
      throw UsageError(path + ": " + key + ": " + e.what());
    }
  }
}

std::vector<RingMarks> restrict_rows(std::vector<RingMarks> rows, int row) {
  if (row < 0) return rows;
  std::vector<RingMarks> one;
  for (auto& r : rows)
    if (r.row == row) one.push_back(std::move(r));
  return one;
}

json match_json(const MatchResult& m) {
  json pairs = json::array();
  for (const auto& [t, d] : m.pairs) pairs.push_back({t, d});
  return {{"cost", m.total_cost},
          {"pairs", pairs},
          {"unmatched_truth", m.unmatched_truth},
          {"unmatched_detection", m.unmatched_detection}};
}

void emit(std::ostream& out, const std::string& path, const std::string& text) {
  if (path.empty() || path == "-")
    out << text;
  else
    write_text_file(path, text);
}

// --- option bundles ---------------------------------------------------------

struct CenterOptions {
  double sigma = 2.0;
  int min_count = 100;
  double mask_frac = 0.1;

  void add(CLI::App* sub) {
    sub->add_option("--center-sigma", sigma, "Blur of the Sobel responses (px)")->capture_default_str();
    sub->add_option("--min-count", min_count, "Masked pixels needed before a profile bin falls back to the maximum")
        ->capture_default_str();
    sub->add_option("--mask-frac", mask_frac, "Foreground threshold as a fraction of the image maximum")
        ->capture_default_str();
  }
  CenterParams params() const {
    if (sigma < 0) throw UsageError("--center-sigma must be >= 0");
    if (min_count < 1) throw UsageError("--min-count must be >= 1");
    if (mask_frac < 0 || mask_frac > 1) throw UsageError("--mask-frac must lie in [0, 1]");
    return {sigma, min_count, mask_frac};
  }
};

struct DetectOptions {
  double blur = 1.0;
  double t_pre = 0.0;
  double t_post = 0.01;
  std::string mode;

  void add(CLI::App* sub) {
    sub->add_option("--mode", mode, "Which extrema mark rings: ridges or valleys (required)");
    sub->add_option("--blur", blur, "Gaussian sigma applied to the polar image")->capture_default_str();
    sub->add_option("--t-pre", t_pre, "Pre-threshold, fraction of the image maximum")->capture_default_str();
    sub->add_option("--t-post", t_post, "Persistence threshold, fraction of the image maximum")
        ->capture_default_str();
  }
  DetectionParams params() const {
    DetectionParams p{blur, t_pre, t_post, parse_mode(mode)};
    check_params([&] { p.validate(); });
    return p;
  }
};

// --- subcommands --------------------------------------------------------------

struct SynthCommand {
  std::string out_dir;
  int width = 400;
  int height = 400;
  double center_x = -1;
  double center_y = -1;
  std::vector<double> radii{20, 40, 60, 80, 100, 120, 140, 160};
  double ring_width = 1.5;
  double amplitude = 0.5;
  double base = 0.45;
  double background = 0.0;
  double margin = 8.0;
  double noise = 0.0;
  std::uint64_t seed = 1;
  int slices = 1;
  double drift_x = 0.0;
  double drift_y = 0.0;
  int bit_depth = 8;
  bool valleys = false;
  double crack_angle = 0.0;
  double crack_width = 0.0;

  void add(CLI::App* sub) {
    sub->add_option("--out", out_dir, "Output directory")->required();
    sub->add_option("--width", width)->capture_default_str();
    sub->add_option("--height", height)->capture_default_str();
    sub->add_option("--center-x", center_x, "Disk center x (default: image middle)");
    sub->add_option("--center-y", center_y, "Disk center y (default: image middle)");
    sub->add_option("--radii", radii, "Ring radii in px, comma separated")->delimiter(',');
    sub->add_option("--ring-width", ring_width, "Gaussian sigma of each ring (px)")->capture_default_str();
    sub->add_option("--amplitude", amplitude, "Ring amplitude, fraction of full scale")->capture_default_str();
    sub->add_option("--base", base, "Disk intensity, fraction of full scale")->capture_default_str();
    sub->add_option("--background", background, "Background intensity, fraction of full scale")
        ->capture_default_str();
    sub->add_option("--margin", margin, "Disk edge distance beyond the last ring (px)")->capture_default_str();
    sub->add_option("--noise", noise, "Uniform noise amplitude, fraction of full scale")->capture_default_str();
    sub->add_option("--seed", seed)->capture_default_str();
    sub->add_option("--slices", slices)->capture_default_str();
    sub->add_option("--drift-x", drift_x, "Center drift per slice (px)")->capture_default_str();
    sub->add_option("--drift-y", drift_y, "Center drift per slice (px)")->capture_default_str();
    sub->add_option("--bit-depth", bit_depth)->check(CLI::IsMember({8, 16}))->capture_default_str();
    sub->add_flag("--valleys", valleys, "Rings as intensity dips");
    sub->add_option("--crack-angle", crack_angle, "Crack direction (degrees)");
    sub->add_option("--crack-width", crack_width, "Crack width (px); 0 disables the crack");
  }

  int run(std::ostream& out) {
    DiskSpec spec;
    spec.width = width;
    spec.height = height;
    spec.center = {center_x >= 0 ? center_x : static_cast<double>(width / 2),
                   center_y >= 0 ? center_y : static_cast<double>(height / 2)};
    spec.radii = radii;
    spec.ring_width = ring_width;
    spec.ring_amplitude = amplitude;
    spec.full_scale = bit_depth == 16 ? 65535.0 : 255.0;
    spec.base_intensity = base * spec.full_scale;
    spec.background_intensity = background * spec.full_scale;
    spec.margin = margin;
    spec.noise_amplitude = noise;
    spec.seed = seed;
    spec.valleys = valleys;
    if (crack_width > 0) spec.crack = Crack{crack_angle * std::numbers::pi / 180.0, crack_width};
    if (slices < 1) throw UsageError("--slices must be >= 1");
    check_params([&] {
      for (int z = 0; z < slices; ++z) {
        DiskSpec s = spec;
        s.center = {spec.center.x + z * drift_x, spec.center.y + z * drift_y};
        s.validate();
      }
    });

    const SynthStack synth = in_stage("synth", [&] { return generate_stack(spec, slices, {drift_x, drift_y}); });
    in_stage("synth", [&] {
      fs::create_directories(out_dir);
      json truth;
      truth["width"] = width;
      truth["height"] = height;
      truth["radii"] = radii;
      truth["mode"] = valleys ? "valleys" : "ridges";
      truth["bit_depth"] = bit_depth;
      truth["slices"] = json::array();
      for (std::size_t z = 0; z < synth.truth.size(); ++z) {
        const fs::path file = fs::path(out_dir) / ("slice_" + slice_tag(static_cast<int>(z)) + ".png");
        save_png(file, synth.stack.slices[z], bit_depth == 16 ? BitDepth::Sixteen : BitDepth::Eight);
        truth["slices"].push_back({{"z", z},
                                   {"file", file.filename().string()},
                                   {"center", {{"x", synth.truth[z].center.x}, {"y", synth.truth[z].center.y}}}});
      }
      write_text_file(fs::path(out_dir) / "truth.json", truth.dump(2) + "\n");
      write_truth_file(fs::path(out_dir) / "truth_radii.txt", radii);
      return 0;
    });
    out << "wrote " << slices << " slice(s) to " << out_dir << "\n";
    return 0;
  }
};

struct PithCommand {
  std::string input;
  std::string out_path;
  CenterOptions center;

  void add(CLI::App* sub) {
    sub->add_option("input", input, "Slice file or directory of slices")->required()->check(CLI::ExistingPath);
    sub->add_option("--out", out_path, "Centers JSON-lines file (default: stdout)");
    center.add(sub);
  }

  int run(std::ostream& out) {
    const CenterParams params = center.params();
    const SliceStack stack = in_stage("load", [&] { return load_stack(input); });
    const PithEstimate est = in_stage("pith", [&] { return locate_stack_centers(stack.slices, params); });
    in_stage("pith", [&] {
      emit(out, out_path, format_centers_jsonl(est));
      return 0;
    });
    return 0;
  }
};

struct PolarCommand {
  std::string input;
  std::string out_path;
  int slice = 0;
  std::vector<double> center_xy;
  std::string centers_path;
  int angular_bins = 720;
  int pad_rows = 16;
  CenterOptions center;

  void add(CLI::App* sub) {
    sub->add_option("input", input, "Slice file or directory of slices")->required()->check(CLI::ExistingPath);
    sub->add_option("--out", out_path, "Polar PNG path; a .json sidecar is written next to it")->required();
    sub->add_option("--slice", slice, "Slice index within the stack")->capture_default_str();
    sub->add_option("--center", center_xy, "Explicit center as X,Y")->delimiter(',')->expected(2);
    sub->add_option("--centers", centers_path, "Centers file from `pith`")->check(CLI::ExistingFile);
    sub->add_option("--angular-bins", angular_bins)->capture_default_str();
    sub->add_option("--pad-rows", pad_rows)->capture_default_str();
    center.add(sub);
  }

  int run(std::ostream& out) {
    if (angular_bins < 8) throw UsageError("--angular-bins must be >= 8");
    if (pad_rows < 0 || pad_rows > angular_bins) throw UsageError("--pad-rows must lie in [0, angular-bins]");
    if (!center_xy.empty() && !centers_path.empty()) throw UsageError("--center and --centers are exclusive");
    const CenterParams cparams = center.params();

    const SliceStack stack = in_stage("load", [&] { return load_stack(input); });
    if (slice < 0 || slice >= static_cast<int>(stack.depth())) {
      throw UsageError("--slice " + std::to_string(slice) + " outside the stack of " +
                       std::to_string(stack.depth()));
    }
    Point2 c;
    if (!center_xy.empty()) {
      c = {center_xy[0], center_xy[1]};
    } else if (!centers_path.empty()) {
      c = in_stage("pith", [&] { return parse_centers_jsonl(read_text_file(centers_path)).at(slice); });
    } else {
      c = in_stage("pith", [&] { return locate_stack_centers(stack.slices, cparams).at(slice); });
    }
    const PolarImage polar = in_stage("polar", [&] {
      return to_polar(stack.slices[static_cast<std::size_t>(slice)], c, angular_bins, pad_rows);
    });
    in_stage("polar", [&] {
      write_polar(out_path, polar);
      return 0;
    });
    out << "wrote " << out_path << " (" << polar.base.width() << "x" << polar.base.height() << ")\n";
    return 0;
  }
};

struct RingsCommand {
  std::string input;
  std::string out_path;
  int row = -1;
  DetectOptions detect;

  void add(CLI::App* sub) {
    sub->add_option("input", input, "Polar PNG written by `polar`")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_path, "Ring file (default: stdout)");
    sub->add_option("--row", row, "Only report this angle row");
    detect.add(sub);
  }

  int run(std::ostream& out) {
    const DetectionParams params = detect.params();
    const PolarImage polar = in_stage("load", [&] { return read_polar(input); });
    if (row >= polar.angular_bins) throw UsageError("--row outside [0, " + std::to_string(polar.angular_bins) + ")");
    const auto marks = in_stage("rings", [&] {
      return row >= 0 ? std::vector<RingMarks>{detect_rings_row(polar, params, row)} : detect_rings(polar, params);
    });
    in_stage("rings", [&] {
      emit(out, out_path, format_ring_file(marks));
      return 0;
    });
    return 0;
  }
};

struct ScoreCommand {
  std::string truth_path;
  std::string detected_path;
  std::string out_path;
  int angular_bins = 0;
  double add_cost = 200.0;
  double remove_cost = 200.0;

  void add(CLI::App* sub) {
    sub->add_option("truth", truth_path, "Truth radii or ring file")->required()->check(CLI::ExistingFile);
    sub->add_option("detected", detected_path, "Detected ring file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_path, "JSON report (default: stdout)");
    sub->add_option("--angular-bins", angular_bins,
                    "Score rows 0..N-1 even when a row has no detections (default: rows present in the files)");
    sub->add_option("--add-cost", add_cost, "Cost of a missing ring")->capture_default_str();
    sub->add_option("--remove-cost", remove_cost, "Cost of an extra ring")->capture_default_str();
  }

  int run(std::ostream& out) {
    const EditCosts costs{add_cost, remove_cost};
    check_params([&] { costs.validate(); });
    if (angular_bins < 0) throw UsageError("--angular-bins must be >= 0");
    const PositionTable truth = in_stage("load", [&] { return read_positions(truth_path); });
    const PositionTable detected = in_stage("load", [&] { return read_positions(detected_path); });

    json report;
    report["rows"] = json::array();
    double total = 0.0;
    in_stage("score", [&] {
      if (!truth.per_row && !detected.per_row) {
        const MatchResult m = edit_distance(truth.shared, detected.shared, costs);
        json rec = match_json(m);
        rec["row"] = nullptr;
        report["rows"].push_back(rec);
        total = m.total_cost;
        return 0;
      }
      std::set<int> rows;
      for (const auto& [r, v] : detected.rows) rows.insert(r);
      for (const auto& [r, v] : truth.rows) rows.insert(r);
      for (int r = 0; r < angular_bins; ++r) rows.insert(r);
      for (int r : rows) {
        const MatchResult m = edit_distance(truth.for_row(r), detected.for_row(r), costs);
        json rec = match_json(m);
        rec["row"] = r;
        report["rows"].push_back(rec);
        total += m.total_cost;
      }
      return 0;
    });
    report["total_cost"] = total;
    report["add_cost"] = add_cost;
    report["remove_cost"] = remove_cost;
    in_stage("score", [&] {
      emit(out, out_path, report.dump(2) + "\n");
      return 0;
    });
    return 0;
  }
};

struct SweepCommand {
  std::string polar_path;
  std::string truth_path;
  std::string out_dir;
  int row = 0;
  std::string mode;
  std::vector<double> blurs = default_blur_values();
  std::vector<double> t_pres = default_threshold_values();
  std::vector<double> t_posts = default_threshold_values();
  double add_cost = 200.0;
  double remove_cost = 200.0;

  void add(CLI::App* sub) {
    sub->add_option("polar", polar_path, "Polar PNG written by `polar`")->required()->check(CLI::ExistingFile);
    sub->add_option("truth", truth_path, "Truth radii or ring file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out-dir", out_dir, "Directory for heat maps and best.json")->required();
    sub->add_option("--row", row, "Angle row to score")->capture_default_str();
    sub->add_option("--mode", mode, "ridges or valleys (required)");
    sub->add_option("--blurs", blurs, "Blur values")->delimiter(',');
    sub->add_option("--t-pre-values", t_pres, "Pre-threshold values")->delimiter(',');
    sub->add_option("--t-post-values", t_posts, "Persistence threshold values")->delimiter(',');
    sub->add_option("--add-cost", add_cost)->capture_default_str();
    sub->add_option("--remove-cost", remove_cost)->capture_default_str();
  }

  int run(std::ostream& out) {
    const RingMode ring_mode = parse_mode(mode);
    const EditCosts costs{add_cost, remove_cost};
    check_params([&] {
      costs.validate();
      SweepGrid probe(blurs, t_pres, t_posts);
      for (double b : blurs) DetectionParams{b, 0, 0, ring_mode}.validate();
      for (double t : t_pres) DetectionParams{0, t, 0, ring_mode}.validate();
      for (double t : t_posts) DetectionParams{0, 0, t, ring_mode}.validate();
    });
    const PolarImage polar = in_stage("load", [&] { return read_polar(polar_path); });
    if (row < 0 || row >= polar.angular_bins) {
      throw UsageError("--row outside [0, " + std::to_string(polar.angular_bins) + ")");
    }
    const PositionTable truth = in_stage("load", [&] { return read_positions(truth_path); });
    const SweepGrid grid = in_stage("sweep", [&] {
      return run_sweep(polar, truth.for_row(row), row, blurs, t_pres, t_posts, ring_mode, costs);
    });

    in_stage("sweep", [&] {
      fs::create_directories(out_dir);
      std::set<double> seen;
      for (double b : grid.blurs()) {
        if (!seen.insert(b).second) continue;
        write_text_file(fs::path(out_dir) / ("heatmap_blur_" + format_number(b) + ".csv"), write_heatmap(grid, b));
      }
      const auto best = grid.best();
      json j = {{"blur", best.blur}, {"t_pre", best.t_pre}, {"t_post", best.t_post}, {"cost", best.cost},
                {"row", row},        {"mode", mode}};
      write_text_file(fs::path(out_dir) / "best.json", j.dump(2) + "\n");
      out << "best blur=" << format_number(best.blur) << " t_pre=" << format_number(best.t_pre)
          << " t_post=" << format_number(best.t_post) << " cost=" << format_number(best.cost) << "\n";
      return 0;
    });
    return 0;
  }
};

struct PipelineCommand {
  std::string input;
  std::string out_dir;
  int row = -1;
  int angular_bins = 720;
  int pad_rows = -1;
  bool keep_polar = false;
  CenterOptions center;
  DetectOptions detect;

  void add(CLI::App* sub) {
    sub->add_option("input", input, "Slice file or directory of slices")->required()->check(CLI::ExistingPath);
    sub->add_option("--out-dir", out_dir, "Output directory")->required();
    sub->add_option("--row", row, "Only report this angle row");
    sub->add_option("--angular-bins", angular_bins)->capture_default_str();
    sub->add_option("--pad-rows", pad_rows, "Wrapped rows (default: max(16, ceil(3*blur)))");
    sub->add_flag("--keep-polar", keep_polar, "Also write the polar images");
    center.add(sub);
    detect.add(sub);
  }

  int run(std::ostream& out) {
    const CenterParams cparams = center.params();
    const DetectionParams dparams = detect.params();
    const int pad = pad_rows >= 0 ? pad_rows : std::max(16, static_cast<int>(std::ceil(3.0 * dparams.blur)));
    if (angular_bins < 8) throw UsageError("--angular-bins must be >= 8");
    if (pad > angular_bins) throw UsageError("--pad-rows must not exceed --angular-bins");
    if (row >= angular_bins) throw UsageError("--row outside [0, " + std::to_string(angular_bins) + ")");

    const SliceStack stack = in_stage("load", [&] { return load_stack(input); });
    const PithEstimate est = in_stage("pith", [&] { return locate_stack_centers(stack.slices, cparams); });
    in_stage("pith", [&] {
      fs::create_directories(out_dir);
      write_text_file(fs::path(out_dir) / "centers.jsonl", format_centers_jsonl(est));
      return 0;
    });

    for (std::size_t z = 0; z < stack.depth(); ++z) {
      const std::string tag = slice_tag(static_cast<int>(z));
      const PolarImage polar = in_stage("polar", [&] {
        return to_polar(stack.slices[z], est.fitted_centers[z], angular_bins, pad);
      });
      if (keep_polar) {
        in_stage("polar", [&] {
          write_polar(fs::path(out_dir) / ("polar_" + tag + ".png"), polar);
          return 0;
        });
      }
      auto marks = in_stage("rings", [&] {
        return row >= 0 ? std::vector<RingMarks>{detect_rings_row(polar, dparams, row)}
                        : detect_rings(polar, dparams);
      });
      for (auto& m : marks) m.z = static_cast<int>(z);
      in_stage("rings", [&] {
        write_ring_file(fs::path(out_dir) / ("rings_" + tag + ".txt"), restrict_rows(std::move(marks), row));
        return 0;
      });
    }
    out << "processed " << stack.depth() << " slice(s) into " << out_dir << "\n";
    return 0;
  }
};

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Tree ring detection on CT slices of wood disks."};
  app.name("treering");
  app.require_subcommand(1);

  SynthCommand synth;
  PithCommand pith;
  PolarCommand polar;
  RingsCommand rings;
  ScoreCommand score;
  SweepCommand sweep;
  PipelineCommand pipeline;

  struct Entry {
    CLI::App* sub;
    std::function<int(std::ostream&)> run;
    std::string params_json;
  };
  std::vector<Entry> entries;
  auto add = [&](const char* name, const char* help, auto& cmd) {
    CLI::App* sub = app.add_subcommand(name, help);
    cmd.add(sub);
    entries.push_back({sub, [&cmd](std::ostream& o) { return cmd.run(o); }, {}});
  };
  add("synth", "Generate synthetic disk slices with known rings", synth);
  add("pith", "Locate the pith of every slice and fit a center line", pith);
  add("polar", "Resample one slice around its center into a polar image", polar);
  add("rings", "Detect ring boundaries in a polar image", rings);
  add("score", "Edit-distance score of detected rings against truth", score);
  add("sweep", "Grid search over blur and thresholds for one ray", sweep);
  add("pipeline", "pith -> polar -> rings for every slice", pipeline);
  for (auto& e : entries) {
    e.sub->add_option("--params-json", e.params_json, "JSON object of parameter defaults")
        ->check(CLI::ExistingFile);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "treering: " << e.what() << "\n";
    return kExitUsage;
  }

  for (auto& e : entries) {
    if (!e.sub->parsed()) continue;
    try {
      apply_params_json(*e.sub, e.params_json);
      return e.run(out);
    } catch (const UsageError& ex) {
      err << "treering " << e.sub->get_name() << ": " << ex.what() << "\n";
      return kExitUsage;
    } catch (const StageError& ex) {
      err << "treering " << e.sub->get_name() << ": " << ex.what() << "\n";
      return kExitProcessing;
    } catch (const std::exception& ex) {
      err << "treering " << e.sub->get_name() << ": " << ex.what() << "\n";
      return kExitProcessing;
    }
  }
  return kExitUsage;
}

}  // namespace treering
