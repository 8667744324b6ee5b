#pragma once

// Orientation keypoints: four virtual markers rigidly attached to each rotating
// bone at half-bone-length offsets (left, right, forward, back of the bone
// midpoint). Together with the two joint keypoints at the bone ends they pin
// down the full bone rotation, including roll about the bone axis.

#include <Eigen/Dense>

#include <string_view>

#include "okp/skeleton.hpp"

namespace okp {

enum class Space { NormalizedImage, WorldMetric };

std::string_view to_string(Space space);
Space space_from_string(std::string_view text);

/// Layout: joint keypoints 0..N_j-1 in skeleton joint order, then per rotating
/// bone (config order) the markers o1..o4. Non-finite columns mark missing points.
struct KeypointSet {
  Eigen::Matrix3Xd points;
  Space space = Space::WorldMetric;

  Eigen::Index size() const noexcept { return points.cols(); }
};

/// Marker order within a bone block.
enum OkpMarker : int { kLeft = 0, kRight = 1, kForward = 2, kBack = 3 };

/// Column of orientation marker `marker` of rotating slot `slot`.
inline Eigen::Index okp_index(const Skeleton& skel, int slot, int marker) {
  return skel.joint_count() + 4 * slot + marker;
}

/// Bone-local template for one bone at unit length: columns are the parent joint
/// (0,0,0), the child joint (0,1,0) and the four markers (+-0.5, 0.5, 0), (0, 0.5, +-0.5).
const Eigen::Matrix<double, 3, 6>& bone_marker_template();

/// Gathers the six observations of one rotating bone in template column order.
Eigen::Matrix<double, 3, 6> bone_markers(const KeypointSet& kps, const Skeleton& skel, int slot);

/// Keypoints of a pose in world-metric space.
KeypointSet synthesize_okps(const Skeleton& skel, const Pose& pose, const BoneLengths& lengths);

struct SolveOptions {
  double joint_weight = 2.0;
  double marker_weight = 1.0;
};

/// Global rotation of one bone from its six observations.
Mat3 solve_bone_rotation(const Eigen::Matrix<double, 3, 6>& observed, const Mat3& neutral_frame,
                         const SolveOptions& options = {});

/// Recovers every rotating bone's global rotation by weighted rigid alignment of the
/// neutral-pose marker template onto the observations. The root position is the
/// observed root joint keypoint.
Pose solve_pose(const KeypointSet& kps, const Skeleton& skel, const SolveOptions& options = {});

/// Horizontal mirror about x = 0: negates x, swaps left/right joints and bone
/// blocks, and swaps the left/right markers inside each block. An involution.
KeypointSet mirror_keypoints(const KeypointSet& kps, const Skeleton& skel);

/// Averages predictions with un-mirrored predictions from the flipped input.
KeypointSet flip_merge(const KeypointSet& kps, const KeypointSet& kps_from_flipped_image, const Skeleton& skel);

void require_layout(const KeypointSet& kps, const Skeleton& skel, std::string_view what);
void require_same_space(const KeypointSet& a, const KeypointSet& b, std::string_view what);

}  // namespace okp
