#include "okp/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "okp/codec.hpp"
#include "okp/harness.hpp"

namespace okp::cli {

namespace {

struct CommonOptions {
  std::string skeleton;
  double lengths_scale = 1.0;
  bool lengths_from_data = false;
};

Skeleton resolve_skeleton(const std::string& selection) {
  std::string choice = selection;
  if (choice.empty()) {
    const char* env = std::getenv("OKP_SKELETON_PATH");
    choice = env != nullptr && *env != '\0' ? env : "h36m17";
  }
  for (const std::string& name : builtin_skeleton_names()) {
    if (choice == name) return builtin_skeleton(name);
  }
  return load_skeleton_file(choice);
}

std::vector<FrameRecord> read_frames(const std::string& path, const Skeleton& skel) {
  if (path == "-") return read_dataset(std::cin, skel);
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  return read_dataset(in, skel);
}

/// Writes to the named file, or to `fallback` when the name is empty or "-".
template <typename Fn>
void emit(const std::string& path, std::ostream& fallback, Fn&& write) {
  if (path.empty() || path == "-") {
    write(fallback);
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw FormatError("cannot open " + path + " for writing");
  write(file);
  if (!file) throw FormatError("write to " + path + " failed");
}

BoneLengths resolve_lengths(const CommonOptions& common, const Skeleton& skel, std::span<const FrameRecord> frames) {
  if (!(common.lengths_scale > 0.0)) throw InvalidArgument("--lengths-scale must be positive");
  if (!common.lengths_from_data) return skel.default_lengths().scaled(common.lengths_scale);
  std::vector<JointPositions> joints;
  for (const FrameRecord& f : frames) {
    if (f.gt_keypoints && f.gt_keypoints->points.leftCols(skel.joint_count()).allFinite()) {
      joints.emplace_back(f.gt_keypoints->points.leftCols(skel.joint_count()));
    }
  }
  return average_bone_lengths(skel, joints).scaled(common.lengths_scale);
}

void add_skeleton_option(CLI::App* cmd, CommonOptions& common) {
  cmd->add_option("--skeleton", common.skeleton,
                  "Built-in skeleton (h36m17, h36m21) or config path; default $OKP_SKELETON_PATH or h36m17");
}

void add_lengths_options(CLI::App* cmd, CommonOptions& common) {
  cmd->add_option("--lengths-scale", common.lengths_scale, "Multiply bone lengths by this factor");
  cmd->add_flag("--lengths-from-data", common.lengths_from_data,
                "Use mean ground-truth bone lengths of the dataset instead of the skeleton defaults");
}

struct EvalFlags {
  bool no_flip = false;
  bool no_root_relative = false;
  bool rigid_p2 = false;
  bool resolve = false;
  bool root_from_gt = false;
  double pck_threshold = kDefaultPckThreshold;
  double joint_weight = 2.0;
  std::optional<double> noise_sigma;
  std::uint64_t noise_seed = 0;
  std::optional<double> error_scale;

  void add_to(CLI::App* cmd, bool with_scale) {
    cmd->add_flag("--no-flip", no_flip, "Ignore flipped-image predictions");
    cmd->add_flag("--no-root-relative", no_root_relative, "Protocol 1 MPJPE without root subtraction");
    cmd->add_flag("--rigid-p2", rigid_p2, "Protocol 2 alignment without scale");
    cmd->add_flag("--resolve", resolve, "Re-solve frames even when solved rotations are present");
    cmd->add_flag("--root-from-gt", root_from_gt, "Place the solved skeleton at the ground-truth root");
    cmd->add_option("--pck-threshold", pck_threshold, "PCK threshold in mm")->check(CLI::PositiveNumber);
    cmd->add_option("--joint-weight", joint_weight, "Weight of joint keypoints relative to orientation keypoints")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--noise-sigma", noise_sigma, "Add Gaussian noise to predictions (or ground truth)")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--noise-seed", noise_seed, "Seed for --noise-sigma");
    if (with_scale) {
      cmd->add_option("--error-scale", error_scale, "Scale prediction errors about ground truth")
          ->check(CLI::NonNegativeNumber);
    }
  }

  EvalOptions options() const {
    EvalOptions o;
    o.flip_merge = !no_flip;
    o.root_relative = !no_root_relative;
    o.procrustes_scale = !rigid_p2;
    o.use_solved = !resolve;
    o.root_source = root_from_gt ? RootSource::GroundTruth : RootSource::Predicted;
    o.pck_threshold = pck_threshold;
    o.solve.joint_weight = joint_weight;
    if (noise_sigma) o.noise = NoiseRecipe{*noise_sigma, noise_seed};
    o.error_scale = error_scale;
    return o;
  }
};

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Orientation keypoints: 6D human pose from joint and orientation keypoints", "okp"};
  app.require_subcommand(1);

  CommonOptions common;
  std::string input;
  std::vector<std::string> inputs;
  std::string output;

  // skeleton dump
  CLI::App* skeleton_cmd = app.add_subcommand("skeleton", "Skeleton configs");
  skeleton_cmd->require_subcommand(1);
  CLI::App* dump_cmd = skeleton_cmd->add_subcommand("dump", "Print a skeleton config");
  add_skeleton_option(dump_cmd, common);
  dump_cmd->add_option("-o,--output", output, "Output file (default stdout)");

  // synth
  std::uint64_t seed = 0;
  int frame_count = 100;
  double angle_limit = 1.0;
  int groups = 1;
  double synth_noise = 0.0;
  std::uint64_t synth_noise_seed = 0;
  CLI::App* synth_cmd = app.add_subcommand("synth", "Generate a synthetic ground-truth dataset");
  add_skeleton_option(synth_cmd, common);
  synth_cmd->add_option("--lengths-scale", common.lengths_scale, "Multiply bone lengths by this factor");
  synth_cmd->add_option("--seed", seed, "Random seed");
  synth_cmd->add_option("--frames", frame_count, "Number of frames")->check(CLI::PositiveNumber);
  synth_cmd->add_option("--angle-limit", angle_limit, "Max per-bone rotation from the T-pose, radians")
      ->check(CLI::Range(1e-12, kPi));
  synth_cmd->add_option("--groups", groups, "Spread frames over this many groups")->check(CLI::PositiveNumber);
  synth_cmd->add_option("--noise-sigma", synth_noise, "Also write Gaussian-noised predictions (mm)")
      ->check(CLI::NonNegativeNumber);
  synth_cmd->add_option("--noise-seed", synth_noise_seed, "Seed for --noise-sigma");
  synth_cmd->add_option("-o,--output", output, "Output dataset (default stdout)");

  // solve
  EvalFlags solve_flags;
  CLI::App* solve_cmd = app.add_subcommand("solve", "Solve per-bone rotations and joint positions");
  add_skeleton_option(solve_cmd, common);
  add_lengths_options(solve_cmd, common);
  solve_cmd->add_option("-i,--input", input, "Input dataset ('-' for stdin)")->required();
  solve_cmd->add_option("-o,--output", output, "Output dataset (default stdout)");
  solve_cmd->add_flag("--no-flip", solve_flags.no_flip, "Ignore flipped-image predictions");
  solve_cmd->add_flag("--root-from-gt", solve_flags.root_from_gt, "Place the solved skeleton at the ground-truth root");
  solve_cmd->add_option("--joint-weight", solve_flags.joint_weight, "Weight of joint keypoints")
      ->check(CLI::PositiveNumber);

  // decode
  double extend = kDefaultExtend;
  std::string decode_group = "decoded";
  CLI::App* decode_cmd = app.add_subcommand("decode", "Decode heatmap fixture files into a dataset");
  add_skeleton_option(decode_cmd, common);
  decode_cmd->add_option("-i,--input", inputs, "Heatmap files, one frame each")->required();
  decode_cmd->add_option("-o,--output", output, "Output dataset (default stdout)");
  decode_cmd->add_option("--extend", extend, "Output range extension factor")->check(CLI::Range(1.0, 100.0));
  decode_cmd->add_option("--group", decode_group, "Group label for decoded frames");

  // perturb
  std::optional<double> perturb_sigma;
  std::uint64_t perturb_seed = 0;
  std::optional<double> perturb_scale;
  CLI::App* perturb_cmd = app.add_subcommand("perturb", "Inject Gaussian noise or scale prediction errors");
  add_skeleton_option(perturb_cmd, common);
  perturb_cmd->add_option("-i,--input", input, "Input dataset ('-' for stdin)")->required();
  perturb_cmd->add_option("-o,--output", output, "Output dataset (default stdout)");
  perturb_cmd->add_option("--sigma", perturb_sigma, "Gaussian noise sigma")->check(CLI::NonNegativeNumber);
  perturb_cmd->add_option("--seed", perturb_seed, "Noise seed");
  perturb_cmd->add_option("--scale", perturb_scale, "Error scale about ground truth")->check(CLI::NonNegativeNumber);

  // eval
  EvalFlags eval_flags;
  std::string format = "text";
  CLI::App* eval_cmd = app.add_subcommand("eval", "Evaluate predictions against ground truth");
  add_skeleton_option(eval_cmd, common);
  add_lengths_options(eval_cmd, common);
  eval_cmd->add_option("-i,--input", input, "Input dataset ('-' for stdin)")->required();
  eval_cmd->add_option("-o,--output", output, "Report file (default stdout)");
  eval_cmd->add_option("--format", format, "text, csv or json")->check(CLI::IsMember({"text", "csv", "json"}));
  eval_flags.add_to(eval_cmd, true);

  // sweep
  EvalFlags sweep_flags;
  std::vector<double> scales{0.0, 0.5, 1.0, 1.5, 2.0};
  double world_span = 2000.0;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Detector-error sensitivity sweep (CSV)");
  add_skeleton_option(sweep_cmd, common);
  add_lengths_options(sweep_cmd, common);
  sweep_cmd->add_option("-i,--input", input, "Input dataset ('-' for stdin)")->required();
  sweep_cmd->add_option("-o,--output", output, "CSV file (default stdout)");
  sweep_cmd->add_option("--scales", scales, "Comma-separated error scales")->delimiter(',');
  sweep_cmd->add_option("--world-span", world_span, "Full-resolution span for world-metric data, mm")
      ->check(CLI::PositiveNumber);
  sweep_flags.add_to(sweep_cmd, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    const Skeleton skel = resolve_skeleton(common.skeleton);

    if (*dump_cmd) {
      std::string text;
      bool builtin = false;
      for (const std::string& name : builtin_skeleton_names()) builtin |= name == skel.name();
      if (builtin && (common.skeleton.empty() || common.skeleton == skel.name())) {
        text = builtin_skeleton_config(skel.name());
        if (!text.empty() && text.front() == '\n') text.erase(0, 1);
      } else {
        text = skeleton_to_json(skel).dump(2) + "\n";
      }
      emit(output, out, [&](std::ostream& os) { os << text; });
    } else if (*synth_cmd) {
      if (!(common.lengths_scale > 0.0)) throw InvalidArgument("--lengths-scale must be positive");
      const BoneLengths lengths = skel.default_lengths().scaled(common.lengths_scale);
      std::vector<FrameRecord> frames =
          generate_synthetic_sequence(seed, frame_count, skel, lengths, angle_limit, groups);
      if (synth_noise > 0.0) {
        for (std::size_t i = 0; i < frames.size(); ++i) {
          frames[i].pred_keypoints =
              inject_gaussian_noise(*frames[i].gt_keypoints, synth_noise, frame_seed(synth_noise_seed, i));
        }
      }
      emit(output, out, [&](std::ostream& os) { write_dataset(os, frames, skel); });
    } else if (*solve_cmd) {
      std::vector<FrameRecord> frames = read_frames(input, skel);
      const BoneLengths lengths = resolve_lengths(common, skel, frames);
      EvalOptions options = solve_flags.options();
      options.use_solved = false;
      std::size_t failed = 0;
      for (std::size_t i = 0; i < frames.size(); ++i) {
        FrameRecord& frame = frames[i];
        FrameRecord probe = frame;
        if (!probe.pred_keypoints && probe.gt_keypoints) {
          // No detector output: solve the ground truth itself.
          probe.pred_keypoints = probe.gt_keypoints;
          probe.pred_flipped.reset();
        }
        try {
          frame.solved = solve_frame(probe, skel, lengths, options, i);
        } catch (const Error& e) {
          ++failed;
          frame.solved.reset();
          err << "okp solve: " << e.what() << '\n';
        }
      }
      if (!frames.empty() && failed == frames.size()) throw EmptyDataset("solve: every frame failed");
      emit(output, out, [&](std::ostream& os) { write_dataset(os, frames, skel); });
    } else if (*decode_cmd) {
      std::vector<FrameRecord> frames;
      for (const std::string& path : inputs) {
        const HeatmapFile file = read_heatmap_file(std::filesystem::path(path));
        FrameRecord frame;
        frame.id = std::filesystem::path(path).stem().string();
        frame.group = decode_group;
        frame.pred_keypoints = decode_keypoints(file.keypoints, extend, skel);
        frames.push_back(std::move(frame));
      }
      emit(output, out, [&](std::ostream& os) { write_dataset(os, frames, skel); });
    } else if (*perturb_cmd) {
      if (!perturb_sigma && !perturb_scale) throw InvalidArgument("perturb: give --sigma and/or --scale");
      std::vector<FrameRecord> frames = read_frames(input, skel);
      EvalOptions recipe;
      if (perturb_sigma) recipe.noise = NoiseRecipe{*perturb_sigma, perturb_seed};
      recipe.error_scale = perturb_scale;
      for (std::size_t i = 0; i < frames.size(); ++i) {
        std::optional<KeypointSet> pred = effective_prediction(frames[i], recipe, i);
        if (!pred) throw InvalidArgument("frame " + frames[i].id + ": nothing to perturb");
        frames[i].pred_keypoints = std::move(pred);
        frames[i].pred_flipped.reset();
        frames[i].solved.reset();
      }
      emit(output, out, [&](std::ostream& os) { write_dataset(os, frames, skel); });
    } else if (*eval_cmd) {
      const std::vector<FrameRecord> frames = read_frames(input, skel);
      const BoneLengths lengths = resolve_lengths(common, skel, frames);
      const MetricsReport report = evaluate(frames, skel, lengths, eval_flags.options());
      for (const std::string& f : report.failures) err << "okp eval: " << f << '\n';
      emit(output, out, [&](std::ostream& os) {
        if (format == "csv") {
          write_csv(os, report);
        } else if (format == "json") {
          os << to_json(report).dump(2) << '\n';
        } else {
          write_text(os, report);
        }
      });
    } else if (*sweep_cmd) {
      const std::vector<FrameRecord> frames = read_frames(input, skel);
      const BoneLengths lengths = resolve_lengths(common, skel, frames);
      SweepOptions options;
      options.eval = sweep_flags.options();
      options.world_span_mm = world_span;
      const SensitivityCurve curve = sensitivity_sweep(frames, scales, skel, lengths, options);
      emit(output, out, [&](std::ostream& os) { write_csv(os, curve); });
    }
  } catch (const Error& e) {
    err << "okp: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "okp: " << e.what() << '\n';
    return kExitData;
  }
  return kExitOk;
}

}  // namespace okp::cli
