#pragma once

// Kinematic skeleton: joint tree, bones with neutral (T-pose) frames, forward
// kinematics and global/parent-relative rotation conversion.
//
// Bone frame convention: local Y runs along the bone from parent to child joint,
// local Z points forward and local X to the subject's left.

#include <Eigen/Dense>
#include <json.hpp>

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "okp/geometry.hpp"

namespace okp {

using Vec3 = Vector3<double>;
using Mat3 = Matrix3<double>;

/// One column per joint, millimeters, indexed parallel to Skeleton::joint_names().
using JointPositions = Eigen::Matrix3Xd;

inline constexpr int kNoParent = -1;

struct Bone {
  int parent_joint = kNoParent;
  int child_joint = kNoParent;
  bool rotating = true;
  /// Lower-body bones whose external annotation convention points Y child -> parent.
  bool reversed = false;
  /// Bone whose frame a non-rotating bone rigidly follows; -1 for rotating bones.
  int follows = -1;
  Mat3 neutral_frame = Mat3::Identity();
};

/// Per-bone lengths in millimeters, parallel to Skeleton::bones().
struct BoneLengths {
  Eigen::VectorXd values;

  double operator[](Eigen::Index bone) const { return values(bone); }
  BoneLengths scaled(double factor) const { return {values * factor}; }
};

enum class RotationConvention { Global, ParentRelative };

/// Root position plus one rotation per rotating bone (in Skeleton::rotating_bones() order).
struct Pose {
  Vec3 root_position = Vec3::Zero();
  std::vector<Mat3> rotations;
  RotationConvention convention = RotationConvention::Global;
};

class Skeleton {
 public:
  const std::string& name() const noexcept { return name_; }
  const std::string& notes() const noexcept { return notes_; }

  int joint_count() const noexcept { return static_cast<int>(joint_names_.size()); }
  int bone_count() const noexcept { return static_cast<int>(bones_.size()); }
  int rotating_count() const noexcept { return static_cast<int>(rotating_.size()); }
  /// Joint keypoints followed by four orientation keypoints per rotating bone.
  int keypoint_count() const noexcept { return joint_count() + 4 * rotating_count(); }

  const std::vector<std::string>& joint_names() const noexcept { return joint_names_; }
  int parent(int joint) const { return parents_.at(joint); }
  int root() const noexcept { return root_; }
  int joint_index(std::string_view name) const;

  const std::vector<Bone>& bones() const noexcept { return bones_; }
  const Bone& bone(int b) const { return bones_.at(b); }
  /// Bone indices carrying free rotations, in config order.
  const std::vector<int>& rotating_bones() const noexcept { return rotating_; }
  /// Rotating-slot index of a bone, or -1 for a fixed link.
  int rotating_slot(int bone) const { return slot_of_bone_.at(bone); }
  /// Bone ending at the given bone's parent joint, or -1 when it starts at the root.
  int parent_bone(int bone) const { return parent_bone_.at(bone); }
  /// Bones ordered so every bone comes after the bone it hangs from.
  const std::vector<int>& topological_bones() const noexcept { return topo_; }
  const Mat3& neutral_frame(int slot) const { return bones_.at(rotating_.at(slot)).neutral_frame; }

  const std::vector<std::pair<int, int>>& flip_pairs() const noexcept { return flip_pairs_; }
  /// Mirror image of each joint (identity for unpaired joints).
  int mirror_joint(int joint) const { return mirror_joint_.at(joint); }
  /// Mirror image of each rotating slot.
  int mirror_slot(int slot) const { return mirror_slot_.at(slot); }
  const std::vector<int>& pck_subset() const noexcept { return pck_subset_; }
  const BoneLengths& default_lengths() const noexcept { return default_lengths_; }

  /// T-pose: every rotating bone at its neutral frame, root at the origin.
  Pose neutral_pose() const;

  friend Skeleton load_skeleton(const nlohmann::json& doc);

 private:
  Skeleton() = default;

  std::string name_;
  std::string notes_;
  std::vector<std::string> joint_names_;
  std::vector<int> parents_;
  int root_ = kNoParent;
  std::vector<Bone> bones_;
  std::vector<int> rotating_;
  std::vector<int> slot_of_bone_;
  std::vector<int> parent_bone_;
  std::vector<int> topo_;
  std::vector<std::pair<int, int>> flip_pairs_;
  std::vector<int> mirror_joint_;
  std::vector<int> mirror_slot_;
  std::vector<int> pck_subset_;
  BoneLengths default_lengths_;
};

/// Parses and validates a skeleton config document. Throws ConfigError with the
/// offending field path.
Skeleton load_skeleton(const nlohmann::json& doc);
Skeleton load_skeleton_file(const std::filesystem::path& path);

/// Built-in configs: "h36m17" (17 joints, 15 rotations) and "h36m21" (21 joints, 19 rotations).
Skeleton builtin_skeleton(std::string_view name);
const std::string& builtin_skeleton_config(std::string_view name);
std::vector<std::string> builtin_skeleton_names();

nlohmann::json skeleton_to_json(const Skeleton& skel);

/// Global frame of every bone (fixed links included) for a global-convention pose.
std::vector<Mat3> bone_frames(const Skeleton& skel, const Pose& pose);

/// Joint positions: child = parent + frame_bone * (length * e_y).
JointPositions forward_kinematics(const Skeleton& skel, const Pose& pose, const BoneLengths& lengths);

/// R_local = R_parent_global^T * R_global. Root-attached bones keep their global rotation.
Pose globals_to_locals(const Skeleton& skel, const Pose& pose);
Pose locals_to_globals(const Skeleton& skel, const Pose& pose);

/// Per-bone mean parent-child distance over a set of frames. Throws EmptyDataset.
BoneLengths average_bone_lengths(const Skeleton& skel, std::span<const JointPositions> frames);

/// Bone frame for externally annotated data, honoring the bone's `reversed` flag.
Mat3 realign_bone_frame(const Skeleton& skel, int bone, const JointPositions& joints, const Vec3& forward_hint);

void validate_pose(const Skeleton& skel, const Pose& pose, RotationConvention expected);

}  // namespace okp
