#include "okp/keypoints.hpp"

#include <string>

namespace okp {

std::string_view to_string(Space space) {
  return space == Space::NormalizedImage ? "normalized-image" : "world-metric";
}

Space space_from_string(std::string_view text) {
  if (text == "normalized-image") return Space::NormalizedImage;
  if (text == "world-metric") return Space::WorldMetric;
  throw FormatError("unknown space tag '" + std::string(text) + "'");
}

void require_layout(const KeypointSet& kps, const Skeleton& skel, std::string_view what) {
  if (kps.size() != skel.keypoint_count()) {
    throw CountMismatch(std::string(what) + ": " + std::to_string(kps.size()) + " keypoints, skeleton '" + skel.name() +
                        "' expects " + std::to_string(skel.keypoint_count()));
  }
}

void require_same_space(const KeypointSet& a, const KeypointSet& b, std::string_view what) {
  if (a.space != b.space) {
    throw SpaceMismatch(std::string(what) + ": " + std::string(to_string(a.space)) + " vs " +
                        std::string(to_string(b.space)));
  }
}

const Eigen::Matrix<double, 3, 6>& bone_marker_template() {
  static const Eigen::Matrix<double, 3, 6> tmpl = [] {
    Eigen::Matrix<double, 3, 6> t;
    // clang-format off
    t << 0.0, 0.0,  0.5, -0.5, 0.0,  0.0,
         0.0, 1.0,  0.5,  0.5, 0.5,  0.5,
         0.0, 0.0,  0.0,  0.0, 0.5, -0.5;
    // clang-format on
    return t;
  }();
  return tmpl;
}

Eigen::Matrix<double, 3, 6> bone_markers(const KeypointSet& kps, const Skeleton& skel, int slot) {
  const Bone& bone = skel.bone(skel.rotating_bones()[slot]);
  Eigen::Matrix<double, 3, 6> m;
  m.col(0) = kps.points.col(bone.parent_joint);
  m.col(1) = kps.points.col(bone.child_joint);
  for (int k = 0; k < 4; ++k) m.col(2 + k) = kps.points.col(okp_index(skel, slot, k));
  return m;
}

KeypointSet synthesize_okps(const Skeleton& skel, const Pose& pose, const BoneLengths& lengths) {
  const JointPositions joints = forward_kinematics(skel, pose, lengths);
  KeypointSet kps{Eigen::Matrix3Xd(3, skel.keypoint_count()), Space::WorldMetric};
  kps.points.leftCols(skel.joint_count()) = joints;
  const auto& tmpl = bone_marker_template();
  for (int slot = 0; slot < skel.rotating_count(); ++slot) {
    const int b = skel.rotating_bones()[slot];
    const Vec3 anchor = joints.col(skel.bone(b).parent_joint);
    for (int k = 0; k < 4; ++k) {
      kps.points.col(okp_index(skel, slot, k)) = anchor + lengths[b] * (pose.rotations[slot] * tmpl.col(2 + k));
    }
  }
  return kps;
}

Mat3 solve_bone_rotation(const Eigen::Matrix<double, 3, 6>& observed, const Mat3& neutral_frame,
                         const SolveOptions& options) {
  WeightedCorrespondences<double> corr;
  corr.source = neutral_frame * bone_marker_template();
  corr.target = observed;
  corr.weights.resize(6);
  corr.weights << options.joint_weight, options.joint_weight, options.marker_weight, options.marker_weight,
      options.marker_weight, options.marker_weight;
  // Alignment maps neutral-pose world positions onto the observations; composing
  // with the neutral frame gives the bone frame's world rotation.
  return umeyama_align(corr, false).rotation * neutral_frame;
}

Pose solve_pose(const KeypointSet& kps, const Skeleton& skel, const SolveOptions& options) {
  require_layout(kps, skel, "solve_pose");
  std::string missing;
  for (Eigen::Index i = 0; i < kps.size(); ++i) {
    if (!kps.points.col(i).allFinite()) missing += (missing.empty() ? "" : ",") + std::to_string(i);
  }
  if (!missing.empty()) throw IncompleteKeypoints("solve_pose: missing keypoints " + missing);

  Pose pose;
  pose.root_position = kps.points.col(skel.root());
  pose.rotations.reserve(skel.rotating_count());
  for (int slot = 0; slot < skel.rotating_count(); ++slot) {
    pose.rotations.push_back(solve_bone_rotation(bone_markers(kps, skel, slot), skel.neutral_frame(slot), options));
  }
  return pose;
}

KeypointSet mirror_keypoints(const KeypointSet& kps, const Skeleton& skel) {
  require_layout(kps, skel, "mirror_keypoints");
  KeypointSet out{Eigen::Matrix3Xd(3, kps.size()), kps.space};
  const Eigen::Vector3d flip_x(-1.0, 1.0, 1.0);
  for (int j = 0; j < skel.joint_count(); ++j) {
    out.points.col(skel.mirror_joint(j)) = kps.points.col(j).cwiseProduct(flip_x);
  }
  // x-negation turns the bone frame's left axis into its right axis.
  constexpr int kMirroredMarker[4] = {kRight, kLeft, kForward, kBack};
  for (int slot = 0; slot < skel.rotating_count(); ++slot) {
    const int target = skel.mirror_slot(slot);
    for (int k = 0; k < 4; ++k) {
      out.points.col(okp_index(skel, target, kMirroredMarker[k])) =
          kps.points.col(okp_index(skel, slot, k)).cwiseProduct(flip_x);
    }
  }
  return out;
}

KeypointSet flip_merge(const KeypointSet& kps, const KeypointSet& kps_from_flipped_image, const Skeleton& skel) {
  require_same_space(kps, kps_from_flipped_image, "flip_merge");
  require_layout(kps, skel, "flip_merge");
  const KeypointSet unmirrored = mirror_keypoints(kps_from_flipped_image, skel);
  return {0.5 * (kps.points + unmirrored.points), kps.space};
}

}  // namespace okp
