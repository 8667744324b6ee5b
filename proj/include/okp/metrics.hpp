#pragma once

// Position and rotation error metrics, and the keypoint training losses.

#include <Eigen/Dense>

#include <cstddef>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "okp/keypoints.hpp"

namespace okp {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kDefaultPckThreshold = 150.0;

/// Mean Euclidean joint error. With `root_relative`, each set is first expressed
/// relative to its own root joint.
double mpjpe(const JointPositions& pred, const JointPositions& gt, bool root_relative, int root = 0);

/// MPJPE after aligning pred onto gt (rotation, translation and, by default, scale).
double pmpjpe(const JointPositions& pred, const JointPositions& gt, bool with_scale = true);

/// pred aligned onto gt by the same transform pmpjpe uses.
JointPositions procrustes_aligned(const JointPositions& pred, const JointPositions& gt, bool with_scale = true);

/// Fraction of `subset` joints whose root-relative error is strictly below `threshold`.
double pck(const JointPositions& pred, const JointPositions& gt, double threshold, std::span<const int> subset,
           int root = 0);

/// Geodesic angle of each rotation pair.
std::vector<double> angular_separations(std::span<const Mat3> pred, std::span<const Mat3> gt);

/// Mean angular separation in radians.
double mpjas(std::span<const Mat3> pred, std::span<const Mat3> gt);

/// Mean of 1 - angle / pi over the rotation pairs.
double maa(std::span<const Mat3> pred, std::span<const Mat3> gt);

/// Mean distance over every keypoint (joint and orientation keypoints alike).
double loss_mpjpe(const KeypointSet& pred, const KeypointSet& gt);

/// Centroid-relative loss summed over each bone's six-marker group.
double loss_cnt(const KeypointSet& pred, const KeypointSet& gt, const Skeleton& skel);

/// Same loss on explicit marker groups (one 3x6 block per bone).
double loss_cnt(std::span<const Eigen::Matrix<double, 3, 6>> pred, std::span<const Eigen::Matrix<double, 3, 6>> gt);

std::vector<Eigen::Matrix<double, 3, 6>> bone_marker_groups(const KeypointSet& kps, const Skeleton& skel);

struct MetricSummary {
  double mpjpe_p1 = 0.0;
  double mpjpe_p2 = 0.0;
  double pck = 0.0;
  double ppck = 0.0;
  double mpjas = 0.0;
  double maa = 0.0;
  std::size_t frame_count = 0;
};

struct MetricsReport {
  /// Unweighted mean of the per-group means.
  MetricSummary overall;
  std::map<std::string, MetricSummary> per_group;
  std::size_t failed_frames = 0;
  std::vector<std::string> failures;
};

nlohmann::json to_json(const MetricsReport& report);

/// Columns: group,frames,mpjpe_p1,mpjpe_p2,pck,ppck,mpjas,maa. Groups in label
/// order, then an `overall` row.
void write_csv(std::ostream& out, const MetricsReport& report);
void write_text(std::ostream& out, const MetricsReport& report);

}  // namespace okp
