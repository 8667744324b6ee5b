#include "okp/harness.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>

namespace okp {

namespace {

using nlohmann::json;

std::string indexed(const char* prefix, std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s%06zu", prefix, i);
  return buf;
}

}  // namespace

std::uint64_t frame_seed(std::uint64_t seed, std::size_t index) {
  // splitmix64 finalizer
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(index) + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::vector<FrameRecord> generate_synthetic_sequence(std::uint64_t seed, int n_frames, const Skeleton& skel,
                                                     const BoneLengths& lengths, double angle_limit, int groups) {
  if (n_frames < 1) throw InvalidArgument("generate_synthetic_sequence: need at least one frame");
  if (!(angle_limit > 0.0 && angle_limit <= kPi)) {
    throw InvalidArgument("generate_synthetic_sequence: angle_limit must be in (0, pi]");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, angle_limit);
  std::uniform_real_distribution<double> cube(-1000.0, 1000.0);

  std::vector<FrameRecord> frames;
  frames.reserve(n_frames);
  for (int i = 0; i < n_frames; ++i) {
    Pose local{Vec3::Zero(), {}, RotationConvention::ParentRelative};
    const double rx = cube(rng);
    const double ry = cube(rng);
    const double rz = cube(rng);
    local.root_position = Vec3(rx, ry, rz);
    for (int b : skel.rotating_bones()) {
      const int pb = skel.parent_bone(b);
      const Mat3& neutral = skel.bone(b).neutral_frame;
      const Mat3 rest = pb < 0 ? neutral : Mat3(skel.bone(pb).neutral_frame.transpose() * neutral);
      const Vec3 axis = random_unit_vector(rng);
      local.rotations.push_back(rest * axis_angle(axis, angle(rng)));
    }
    FrameRecord frame;
    frame.id = indexed("frame_", static_cast<std::size_t>(i));
    frame.group = groups > 1 ? "group_" + std::string(i % groups < 10 ? "0" : "") + std::to_string(i % groups)
                             : std::string("synthetic");
    frame.gt_pose = locals_to_globals(skel, local);
    frame.gt_keypoints = synthesize_okps(skel, *frame.gt_pose, lengths);
    frames.push_back(std::move(frame));
  }
  return frames;
}

KeypointSet inject_error_scale(const KeypointSet& pred, const KeypointSet& gt, double s) {
  require_same_space(pred, gt, "inject_error_scale");
  if (pred.size() != gt.size()) throw CountMismatch("inject_error_scale: keypoint counts differ");
  if (!(s >= 0.0)) throw InvalidArgument("inject_error_scale: scale must be non-negative");
  if (s == 0.0) return gt;
  if (s == 1.0) return pred;
  return {gt.points + s * (pred.points - gt.points), gt.space};
}

KeypointSet inject_gaussian_noise(const KeypointSet& kps, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0)) throw InvalidArgument("inject_gaussian_noise: sigma must be non-negative");
  if (sigma == 0.0) return kps;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, sigma);
  KeypointSet out = kps;
  for (Eigen::Index c = 0; c < out.points.cols(); ++c) {
    for (int r = 0; r < 3; ++r) out.points(r, c) += normal(rng);
  }
  return out;
}

std::optional<KeypointSet> effective_prediction(const FrameRecord& frame, const EvalOptions& options,
                                                std::size_t frame_index) {
  std::optional<KeypointSet> pred = frame.pred_keypoints;
  if (options.noise) {
    const KeypointSet* base = pred ? &*pred : (frame.gt_keypoints ? &*frame.gt_keypoints : nullptr);
    if (base == nullptr) return std::nullopt;
    pred = inject_gaussian_noise(*base, options.noise->sigma, frame_seed(options.noise->seed, frame_index));
  }
  if (pred && options.error_scale) {
    if (!frame.gt_keypoints) throw InvalidArgument("frame " + frame.id + ": error scaling needs ground truth");
    pred = inject_error_scale(*pred, *frame.gt_keypoints, *options.error_scale);
  }
  return pred;
}

SolvedFrame solve_frame(const FrameRecord& frame, const Skeleton& skel, const BoneLengths& lengths,
                        const EvalOptions& options, std::size_t frame_index) {
  const bool recipe = options.noise.has_value() || options.error_scale.has_value();
  if (options.use_solved && frame.solved && !recipe) return *frame.solved;

  std::optional<KeypointSet> pred = effective_prediction(frame, options, frame_index);
  if (!pred) throw InvalidArgument("frame " + frame.id + ": no predictions to solve");
  if (options.flip_merge && frame.pred_flipped) pred = flip_merge(*pred, *frame.pred_flipped, skel);

  SolvedFrame out;
  out.pose = solve_pose(*pred, skel, options.solve);
  if (options.root_source == RootSource::GroundTruth) {
    if (!frame.gt_keypoints) throw InvalidArgument("frame " + frame.id + ": root from ground truth needs ground truth");
    out.pose.root_position = frame.gt_keypoints->points.col(skel.root());
  }
  out.joints = forward_kinematics(skel, out.pose, lengths);
  return out;
}

namespace {

struct GroupAccumulator {
  MetricSummary sum;

  void add(const MetricSummary& s) {
    sum.mpjpe_p1 += s.mpjpe_p1;
    sum.mpjpe_p2 += s.mpjpe_p2;
    sum.pck += s.pck;
    sum.ppck += s.ppck;
    sum.mpjas += s.mpjas;
    sum.maa += s.maa;
    ++sum.frame_count;
  }

  MetricSummary mean() const {
    MetricSummary m = sum;
    const double n = static_cast<double>(sum.frame_count);
    m.mpjpe_p1 /= n;
    m.mpjpe_p2 /= n;
    m.pck /= n;
    m.ppck /= n;
    m.mpjas /= n;
    m.maa /= n;
    return m;
  }
};

MetricSummary frame_metrics(const FrameRecord& frame, const SolvedFrame& solved, const Skeleton& skel,
                            const EvalOptions& options) {
  if (!frame.gt_keypoints) throw InvalidArgument("frame " + frame.id + ": no ground truth keypoints");
  require_layout(*frame.gt_keypoints, skel, "frame " + frame.id + " ground truth");
  const JointPositions gt_joints = frame.gt_keypoints->points.leftCols(skel.joint_count());
  if (!gt_joints.allFinite()) throw IncompleteKeypoints("frame " + frame.id + ": ground truth joints missing");
  const std::vector<Mat3> gt_rotations =
      frame.gt_pose ? frame.gt_pose->rotations : solve_pose(*frame.gt_keypoints, skel, options.solve).rotations;

  MetricSummary m;
  m.frame_count = 1;
  m.mpjpe_p1 = mpjpe(solved.joints, gt_joints, options.root_relative, skel.root());
  const JointPositions aligned = procrustes_aligned(solved.joints, gt_joints, options.procrustes_scale);
  m.mpjpe_p2 = mpjpe(aligned, gt_joints, false);
  m.pck = pck(solved.joints, gt_joints, options.pck_threshold, skel.pck_subset(), skel.root());
  m.ppck = pck(aligned, gt_joints, options.pck_threshold, skel.pck_subset(), skel.root());
  const std::vector<double> sep = angular_separations(solved.pose.rotations, gt_rotations);
  double total = 0.0;
  for (double s : sep) total += s;
  m.mpjas = total / static_cast<double>(sep.size());
  m.maa = 1.0 - m.mpjas / kPi;
  return m;
}

}  // namespace

MetricsReport evaluate(std::span<const FrameRecord> frames, const Skeleton& skel, const BoneLengths& lengths,
                       const EvalOptions& options) {
  if (frames.empty()) throw EmptyDataset("evaluate: no frames");
  MetricsReport report;
  std::map<std::string, GroupAccumulator> groups;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const FrameRecord& frame = frames[i];
    try {
      const SolvedFrame solved = solve_frame(frame, skel, lengths, options, i);
      groups[frame.group].add(frame_metrics(frame, solved, skel, options));
    } catch (const Error& e) {
      ++report.failed_frames;
      report.failures.push_back(frame.id + ": " + e.what());
    }
  }
  if (groups.empty()) {
    throw EmptyDataset("evaluate: all " + std::to_string(frames.size()) + " frames failed; first: " +
                       report.failures.front());
  }
  GroupAccumulator overall;
  for (const auto& [label, acc] : groups) {
    const MetricSummary mean = acc.mean();
    report.per_group[label] = mean;
    overall.add(mean);
  }
  report.overall = overall.mean();
  report.overall.frame_count = frames.size() - report.failed_frames;
  return report;
}

SensitivityCurve sensitivity_sweep(std::span<const FrameRecord> frames, std::span<const double> scales,
                                   const Skeleton& skel, const BoneLengths& lengths, const SweepOptions& options) {
  if (scales.empty()) throw InvalidArgument("sensitivity_sweep: no scales");
  for (std::size_t i = 0; i < scales.size(); ++i) {
    if (!(scales[i] >= 0.0)) throw InvalidArgument("sensitivity_sweep: scales must be non-negative");
    if (i > 0 && !(scales[i] > scales[i - 1])) throw InvalidArgument("sensitivity_sweep: scales must be increasing");
  }
  SensitivityCurve curve;
  for (double s : scales) {
    EvalOptions eval = options.eval;
    eval.error_scale = s;
    eval.use_solved = false;

    double err_sum = 0.0;
    std::size_t err_count = 0;
    for (std::size_t i = 0; i < frames.size(); ++i) {
      if (!frames[i].gt_keypoints) continue;
      const std::optional<KeypointSet> pred = effective_prediction(frames[i], eval, i);
      if (!pred) continue;
      const KeypointSet& gt = *frames[i].gt_keypoints;
      const double span = gt.space == Space::NormalizedImage ? 2.0 : options.world_span_mm;
      const Eigen::RowVectorXd err = (pred->points.topRows<2>() - gt.points.topRows<2>()).colwise().norm();
      for (double e : err) {
        if (std::isfinite(e)) {
          err_sum += e / span;
          ++err_count;
        }
      }
    }
    const MetricsReport report = evaluate(frames, skel, lengths, eval);
    curve.rows.push_back({s, err_count > 0 ? err_sum / static_cast<double>(err_count) : 0.0, report.overall.mpjpe_p1,
                          report.overall.mpjas});
  }
  return curve;
}

void write_csv(std::ostream& out, const SensitivityCurve& curve) {
  out << "error_scale,detector_err_pct_resolution,mpjpe,mpjas\n";
  char buf[128];
  for (const SensitivityRow& r : curve.rows) {
    std::snprintf(buf, sizeof(buf), "%.9g,%.9g,%.9g,%.9g\n", r.error_scale, r.detector_err_pct_resolution, r.mpjpe,
                  r.mpjas);
    out << buf;
  }
}

// ---------------------------------------------------------------------------
// Dataset files

namespace {

json flat(const Eigen::MatrixXd& m) {
  // Column-major storage of a 3xN matrix is the x0,y0,z0,x1,... layout.
  json arr = json::array();
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const double v = m.data()[i];
    arr.push_back(std::isfinite(v) ? json(v) : json(nullptr));
  }
  return arr;
}

json rotations_json(const std::vector<Mat3>& rotations) {
  json arr = json::array();
  for (const Mat3& r : rotations) {
    for (int i = 0; i < 9; ++i) arr.push_back(r(i / 3, i % 3));
  }
  return arr;
}

std::vector<double> numbers(const json& line, const std::string& key, std::size_t expected, const std::string& where) {
  const json& arr = line.at(key);
  if (!arr.is_array()) throw FormatError(where + ": '" + key + "' is not an array");
  if (arr.size() != expected) {
    throw CountMismatch(where + ": '" + key + "' has " + std::to_string(arr.size()) + " numbers, expected " +
                        std::to_string(expected));
  }
  std::vector<double> out(expected);
  for (std::size_t i = 0; i < expected; ++i) {
    if (arr[i].is_null()) {
      out[i] = std::numeric_limits<double>::quiet_NaN();
    } else if (arr[i].is_number()) {
      out[i] = arr[i].get<double>();
    } else {
      throw FormatError(where + ": '" + key + "' entry " + std::to_string(i) + " is not a number");
    }
  }
  return out;
}

KeypointSet keypoints(const json& line, const std::string& key, Space space, const Skeleton& skel,
                      const std::string& where) {
  const std::vector<double> v = numbers(line, key, 3 * static_cast<std::size_t>(skel.keypoint_count()), where);
  return {Eigen::Map<const Eigen::Matrix3Xd>(v.data(), 3, skel.keypoint_count()), space};
}

std::vector<Mat3> rotations(const json& line, const std::string& key, int count, const std::string& where) {
  const std::vector<double> v = numbers(line, key, 9 * static_cast<std::size_t>(count), where);
  std::vector<Mat3> out(count);
  for (int k = 0; k < count; ++k) {
    for (int i = 0; i < 9; ++i) out[k](i / 3, i % 3) = v[9 * k + i];
    if (!is_rotation(out[k])) throw FormatError(where + ": '" + key + "' block " + std::to_string(k) + " is not a rotation");
  }
  return out;
}

}  // namespace

json frame_to_json(const FrameRecord& frame, const Skeleton& skel) {
  json line;
  line["version"] = kDatasetSchemaVersion;
  line["skeleton"] = skel.name();
  line["frame"] = frame.id;
  line["group"] = frame.group;
  line["lengths"] = frame.lengths_id;
  const KeypointSet* any = frame.gt_keypoints ? &*frame.gt_keypoints
                           : frame.pred_keypoints ? &*frame.pred_keypoints
                                                  : nullptr;
  const Space space = any ? any->space : Space::WorldMetric;
  line["space"] = std::string(to_string(space));
  if (frame.gt_keypoints) line["gt"] = flat(frame.gt_keypoints->points);
  const auto put_pred = [&](const char* key, const std::optional<KeypointSet>& kps) {
    if (!kps) return;
    line[key] = flat(kps->points);
    if (kps->space != space) line["pred_space"] = std::string(to_string(kps->space));
  };
  put_pred("pred", frame.pred_keypoints);
  put_pred("pred_flipped", frame.pred_flipped);
  if (frame.gt_pose) line["gt_rotations"] = rotations_json(frame.gt_pose->rotations);
  if (frame.solved) {
    line["solved"] = {{"rotations", rotations_json(frame.solved->pose.rotations)},
                      {"root", flat(frame.solved->pose.root_position)},
                      {"joints", flat(frame.solved->joints)}};
  }
  return line;
}

FrameRecord frame_from_json(const json& line, const Skeleton& skel) {
  if (!line.is_object()) throw FormatError("dataset record is not an object");
  const std::string where = line.contains("frame") && line["frame"].is_string()
                                ? "frame " + line["frame"].get<std::string>()
                                : std::string("dataset record");
  try {
    if (line.at("version").get<int>() != kDatasetSchemaVersion) {
      throw FormatError(where + ": unsupported schema version");
    }
    if (line.at("skeleton").get<std::string>() != skel.name()) {
      throw FormatError(where + ": skeleton '" + line.at("skeleton").get<std::string>() + "' does not match '" +
                        skel.name() + "'");
    }
    FrameRecord frame;
    frame.id = line.at("frame").get<std::string>();
    frame.group = line.at("group").get<std::string>();
    if (line.contains("lengths")) frame.lengths_id = line.at("lengths").get<std::string>();
    const Space space = space_from_string(line.at("space").get<std::string>());
    const Space pred_space =
        line.contains("pred_space") ? space_from_string(line.at("pred_space").get<std::string>()) : space;
    if (line.contains("gt")) frame.gt_keypoints = keypoints(line, "gt", space, skel, where);
    if (line.contains("pred")) frame.pred_keypoints = keypoints(line, "pred", pred_space, skel, where);
    if (line.contains("pred_flipped")) frame.pred_flipped = keypoints(line, "pred_flipped", pred_space, skel, where);
    if (line.contains("gt_rotations")) {
      Pose pose;
      pose.rotations = rotations(line, "gt_rotations", skel.rotating_count(), where);
      if (frame.gt_keypoints) pose.root_position = frame.gt_keypoints->points.col(skel.root());
      frame.gt_pose = std::move(pose);
    }
    if (line.contains("solved")) {
      const json& s = line.at("solved");
      SolvedFrame solved;
      solved.pose.rotations = rotations(s, "rotations", skel.rotating_count(), where + " solved");
      const std::vector<double> root = numbers(s, "root", 3, where + " solved");
      solved.pose.root_position = Vec3(root[0], root[1], root[2]);
      const std::vector<double> joints = numbers(s, "joints", 3 * static_cast<std::size_t>(skel.joint_count()), where);
      solved.joints = Eigen::Map<const Eigen::Matrix3Xd>(joints.data(), 3, skel.joint_count());
      frame.solved = std::move(solved);
    }
    return frame;
  } catch (const json::exception& e) {
    throw FormatError(where + ": " + e.what());
  }
}

void write_dataset(std::ostream& out, std::span<const FrameRecord> frames, const Skeleton& skel) {
  for (const FrameRecord& frame : frames) out << frame_to_json(frame, skel).dump() << '\n';
}

std::vector<FrameRecord> read_dataset(std::istream& in, const Skeleton& skel) {
  std::vector<FrameRecord> frames;
  std::string text;
  std::size_t line_no = 0;
  while (std::getline(in, text)) {
    ++line_no;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    json line;
    try {
      line = json::parse(text);
    } catch (const json::parse_error& e) {
      throw FormatError("dataset line " + std::to_string(line_no) + ": " + e.what());
    }
    frames.push_back(frame_from_json(line, skel));
  }
  return frames;
}

}  // namespace okp
