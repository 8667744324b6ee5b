#pragma once

// Synthetic ground truth, simulated detector errors, dataset files and the
// end-to-end evaluation loop.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "okp/keypoints.hpp"
#include "okp/metrics.hpp"

namespace okp {

inline constexpr int kDatasetSchemaVersion = 1;

struct SolvedFrame {
  Pose pose;
  JointPositions joints;
};

struct FrameRecord {
  std::string id;
  std::string group;
  std::optional<Pose> gt_pose;
  std::optional<KeypointSet> gt_keypoints;
  std::optional<KeypointSet> pred_keypoints;
  /// Predictions made on the horizontally flipped image (still mirrored).
  std::optional<KeypointSet> pred_flipped;
  /// Output of a previous solve pass; evaluate uses it in place of re-solving.
  std::optional<SolvedFrame> solved;
  std::string lengths_id = "default";
};

/// Deterministic random poses: per-bone rotations of at most `angle_limit` radians
/// about a uniform axis, relative to the parent's neutral offset, root uniform in
/// a 2 m cube centered at the origin. `groups` > 1 spreads frames round-robin over
/// group_00, group_01, ...; otherwise every frame is in group "synthetic".
std::vector<FrameRecord> generate_synthetic_sequence(std::uint64_t seed, int n_frames, const Skeleton& skel,
                                                     const BoneLengths& lengths, double angle_limit, int groups = 1);

/// Independent per-frame seed derived from a base seed.
std::uint64_t frame_seed(std::uint64_t seed, std::size_t index);

/// gt + s * (pred - gt).
KeypointSet inject_error_scale(const KeypointSet& pred, const KeypointSet& gt, double s);

/// i.i.d. N(0, sigma^2) on every coordinate; deterministic per seed.
KeypointSet inject_gaussian_noise(const KeypointSet& kps, double sigma, std::uint64_t seed);

struct NoiseRecipe {
  double sigma = 0.0;
  std::uint64_t seed = 0;
};

enum class RootSource { Predicted, GroundTruth };

struct EvalOptions {
  /// Merge with `pred_flipped` when a frame has one.
  bool flip_merge = true;
  /// Protocol 1 MPJPE relative to the root joint.
  bool root_relative = true;
  /// Protocol 2 alignment includes scale.
  bool procrustes_scale = true;
  double pck_threshold = kDefaultPckThreshold;
  bool use_solved = true;
  /// Noise is applied to the prediction (or to ground truth when a frame has no
  /// prediction), then the error is scaled.
  std::optional<NoiseRecipe> noise;
  std::optional<double> error_scale;
  RootSource root_source = RootSource::Predicted;
  SolveOptions solve;
};

/// Prediction a frame is evaluated with after noise/scale recipes, or nullopt.
std::optional<KeypointSet> effective_prediction(const FrameRecord& frame, const EvalOptions& options,
                                                std::size_t frame_index);

/// Rotations and FK joint positions for one frame.
SolvedFrame solve_frame(const FrameRecord& frame, const Skeleton& skel, const BoneLengths& lengths,
                        const EvalOptions& options, std::size_t frame_index);

/// Frames that fail are counted in the report; throws only if every frame fails.
MetricsReport evaluate(std::span<const FrameRecord> frames, const Skeleton& skel, const BoneLengths& lengths,
                       const EvalOptions& options = {});

struct SensitivityRow {
  double error_scale = 0.0;
  /// Mean xy keypoint error as a fraction of the image span.
  double detector_err_pct_resolution = 0.0;
  double mpjpe = 0.0;
  double mpjas = 0.0;
};

struct SensitivityCurve {
  std::vector<SensitivityRow> rows;
};

struct SweepOptions {
  EvalOptions eval;
  /// Span that counts as the full resolution for world-metric data; normalized-image
  /// data uses the image span 2.
  double world_span_mm = 2000.0;
};

SensitivityCurve sensitivity_sweep(std::span<const FrameRecord> frames, std::span<const double> scales,
                                   const Skeleton& skel, const BoneLengths& lengths, const SweepOptions& options = {});

/// Columns: error_scale,detector_err_pct_resolution,mpjpe,mpjas.
void write_csv(std::ostream& out, const SensitivityCurve& curve);

// Dataset files: one JSON object per line.
nlohmann::json frame_to_json(const FrameRecord& frame, const Skeleton& skel);
FrameRecord frame_from_json(const nlohmann::json& line, const Skeleton& skel);
void write_dataset(std::ostream& out, std::span<const FrameRecord> frames, const Skeleton& skel);
std::vector<FrameRecord> read_dataset(std::istream& in, const Skeleton& skel);

}  // namespace okp
