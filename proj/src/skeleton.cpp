#include "okp/skeleton.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

namespace okp {

namespace detail {
extern const std::string kH36m17Config;
extern const std::string kH36m21Config;
}  // namespace detail

namespace {

using nlohmann::json;

std::string path(const std::string& base, std::size_t i) { return base + "[" + std::to_string(i) + "]"; }

const json& require(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) throw ConfigError(where + "." + key, "missing");
  return obj.at(key);
}

std::string require_string(const json& obj, const std::string& key, const std::string& where) {
  const json& v = require(obj, key, where);
  if (!v.is_string()) throw ConfigError(where + "." + key, "expected a string");
  return v.get<std::string>();
}

bool optional_bool(const json& obj, const std::string& key, bool fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_boolean()) throw ConfigError(where + "." + key, "expected a boolean");
  return obj.at(key).get<bool>();
}

Mat3 parse_frame(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 9) throw ConfigError(where, "expected 9 numbers (row-major 3x3)");
  Mat3 m;
  for (int i = 0; i < 9; ++i) {
    if (!v[i].is_number()) throw ConfigError(where, "expected 9 numbers (row-major 3x3)");
    m(i / 3, i % 3) = v[i].get<double>();
  }
  if (!is_rotation(m)) throw ConfigError(where, "not an orthonormal proper rotation");
  return m;
}

}  // namespace

int Skeleton::joint_index(std::string_view name) const {
  const auto it = std::find(joint_names_.begin(), joint_names_.end(), name);
  if (it == joint_names_.end()) throw InvalidArgument("unknown joint '" + std::string(name) + "'");
  return static_cast<int>(it - joint_names_.begin());
}

Pose Skeleton::neutral_pose() const {
  Pose pose;
  pose.rotations.reserve(rotating_.size());
  for (int slot = 0; slot < rotating_count(); ++slot) pose.rotations.push_back(neutral_frame(slot));
  return pose;
}

Skeleton load_skeleton(const json& doc) {
  if (!doc.is_object()) throw ConfigError("$", "expected an object");
  Skeleton s;
  s.name_ = require_string(doc, "name", "$");
  if (doc.contains("notes") && doc.at("notes").is_string()) s.notes_ = doc.at("notes").get<std::string>();

  // Joints and parent links.
  const json& joints = require(doc, "joints", "$");
  if (!joints.is_array() || joints.empty()) throw ConfigError("joints", "expected a non-empty array");
  std::map<std::string, int> joint_of;
  std::vector<std::string> parent_names(joints.size());
  for (std::size_t i = 0; i < joints.size(); ++i) {
    const std::string where = path("joints", i);
    const std::string name = require_string(joints[i], "name", where);
    if (!joint_of.emplace(name, static_cast<int>(i)).second) {
      throw ConfigError(where + ".name", "duplicate joint '" + name + "'");
    }
    s.joint_names_.push_back(name);
    const json& parent = require(joints[i], "parent", where);
    if (!parent.is_null() && !parent.is_string()) throw ConfigError(where + ".parent", "expected a joint name or null");
    if (parent.is_string()) parent_names[i] = parent.get<std::string>();
  }
  const int nj = static_cast<int>(joints.size());
  s.parents_.assign(nj, kNoParent);
  for (int j = 0; j < nj; ++j) {
    const std::string where = path("joints", j) + ".parent";
    if (parent_names[j].empty()) {
      if (s.root_ != kNoParent) throw ConfigError(where, "more than one root joint");
      s.root_ = j;
      continue;
    }
    const auto it = joint_of.find(parent_names[j]);
    if (it == joint_of.end()) throw ConfigError(where, "unknown joint '" + parent_names[j] + "'");
    if (it->second == j) throw ConfigError(where, "joint '" + s.joint_names_[j] + "' is its own parent");
    s.parents_[j] = it->second;
  }
  if (s.root_ == kNoParent) throw ConfigError("joints", "no root joint (parent: null)");
  std::vector<int> depth(nj, -1);
  for (int j = 0; j < nj; ++j) {
    int steps = 0;
    for (int k = j; k != s.root_; k = s.parents_[k]) {
      if (++steps > nj) throw ConfigError(path("joints", j) + ".parent", "cycle in the parent graph");
    }
    depth[j] = steps;
  }

  // Bones: exactly one per non-root joint.
  const json& bones = require(doc, "bones", "$");
  if (!bones.is_array()) throw ConfigError("bones", "expected an array");
  std::vector<int> bone_of_child(nj, -1);
  std::vector<std::string> follows_names(bones.size());
  std::vector<double> lengths;
  for (std::size_t i = 0; i < bones.size(); ++i) {
    const std::string where = path("bones", i);
    const json& entry = bones[i];
    const std::string child = require_string(entry, "child", where);
    const auto it = joint_of.find(child);
    if (it == joint_of.end()) throw ConfigError(where + ".child", "unknown joint '" + child + "'");
    const int c = it->second;
    if (c == s.root_) throw ConfigError(where + ".child", "the root joint has no incoming bone");
    if (bone_of_child[c] != -1) throw ConfigError(where + ".child", "joint '" + child + "' already has a bone");
    if (entry.contains("parent")) {
      const std::string parent = require_string(entry, "parent", where);
      if (parent != s.joint_names_[s.parents_[c]]) {
        throw ConfigError(where + ".parent", "'" + parent + "' is not the parent of '" + child + "'");
      }
    }
    Bone b;
    b.parent_joint = s.parents_[c];
    b.child_joint = c;
    b.rotating = optional_bool(entry, "rotating", true, where);
    b.reversed = optional_bool(entry, "reversed", false, where);
    b.neutral_frame = parse_frame(require(entry, "neutral_frame", where), where + ".neutral_frame");
    if (entry.contains("follows")) {
      if (b.rotating) throw ConfigError(where + ".follows", "only non-rotating bones follow another bone");
      follows_names[i] = require_string(entry, "follows", where);
    }
    const json& len = require(entry, "length", where);
    if (!len.is_number() || !(len.get<double>() > 0.0)) throw ConfigError(where + ".length", "must be a positive number");
    lengths.push_back(len.get<double>());
    bone_of_child[c] = static_cast<int>(i);
    s.bones_.push_back(b);
  }
  for (int j = 0; j < nj; ++j) {
    if (j != s.root_ && bone_of_child[j] == -1) {
      throw ConfigError("bones", "joint '" + s.joint_names_[j] + "' has no bone");
    }
  }
  const int nb = static_cast<int>(s.bones_.size());
  s.default_lengths_.values = Eigen::Map<const Eigen::VectorXd>(lengths.data(), nb);

  s.parent_bone_.resize(nb);
  for (int b = 0; b < nb; ++b) s.parent_bone_[b] = bone_of_child[s.bones_[b].parent_joint];

  s.topo_.resize(nb);
  for (int b = 0; b < nb; ++b) s.topo_[b] = b;
  std::stable_sort(s.topo_.begin(), s.topo_.end(),
                   [&](int a, int b) { return depth[s.bones_[a].child_joint] < depth[s.bones_[b].child_joint]; });
  std::vector<int> topo_pos(nb);
  for (int i = 0; i < nb; ++i) topo_pos[s.topo_[i]] = i;

  s.slot_of_bone_.assign(nb, -1);
  for (int b = 0; b < nb; ++b) {
    if (s.bones_[b].rotating) {
      s.slot_of_bone_[b] = static_cast<int>(s.rotating_.size());
      s.rotating_.push_back(b);
      continue;
    }
    const std::string where = path("bones", b) + ".follows";
    int source = s.parent_bone_[b];
    if (!follows_names[b].empty()) {
      const auto it = joint_of.find(follows_names[b]);
      if (it == joint_of.end() || bone_of_child[it->second] == -1) {
        throw ConfigError(where, "no bone ends at '" + follows_names[b] + "'");
      }
      source = bone_of_child[it->second];
    }
    if (source < 0) throw ConfigError(where, "fixed bone at the root needs an explicit bone to follow");
    if (topo_pos[source] >= topo_pos[b]) throw ConfigError(where, "followed bone must be closer to the root");
    s.bones_[b].follows = source;
  }
  if (s.rotating_.empty()) throw ConfigError("bones", "no rotating bones");

  // Mirror symmetry.
  s.mirror_joint_.resize(nj);
  for (int j = 0; j < nj; ++j) s.mirror_joint_[j] = j;
  std::vector<bool> paired(nj, false);
  if (doc.contains("flip_pairs")) {
    const json& pairs = doc.at("flip_pairs");
    if (!pairs.is_array()) throw ConfigError("flip_pairs", "expected an array of [left, right] pairs");
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const std::string where = path("flip_pairs", i);
      const json& p = pairs[i];
      if (!p.is_array() || p.size() != 2 || !p[0].is_string() || !p[1].is_string()) {
        throw ConfigError(where, "expected [left, right] joint names");
      }
      int idx[2];
      for (int k = 0; k < 2; ++k) {
        const auto it = joint_of.find(p[k].get<std::string>());
        if (it == joint_of.end()) throw ConfigError(path(where, k), "unknown joint '" + p[k].get<std::string>() + "'");
        idx[k] = it->second;
        if (paired[idx[k]]) throw ConfigError(path(where, k), "joint appears in more than one flip pair");
        paired[idx[k]] = true;
      }
      if (idx[0] == idx[1]) throw ConfigError(where, "a joint cannot be paired with itself");
      s.flip_pairs_.emplace_back(idx[0], idx[1]);
      s.mirror_joint_[idx[0]] = idx[1];
      s.mirror_joint_[idx[1]] = idx[0];
    }
  }
  s.mirror_slot_.resize(s.rotating_.size());
  for (int slot = 0; slot < s.rotating_count(); ++slot) {
    const Bone& b = s.bones_[s.rotating_[slot]];
    const int mb = bone_of_child[s.mirror_joint_[b.child_joint]];
    if (mb < 0 || s.bones_[mb].parent_joint != s.mirror_joint_[b.parent_joint] || !s.bones_[mb].rotating) {
      throw ConfigError("flip_pairs", "mirror image of rotating bone ending at '" + s.joint_names_[b.child_joint] +
                                          "' is not a rotating bone");
    }
    s.mirror_slot_[slot] = s.slot_of_bone_[mb];
  }

  if (doc.contains("pck_subset")) {
    const json& subset = doc.at("pck_subset");
    if (!subset.is_array()) throw ConfigError("pck_subset", "expected an array of joint names");
    for (std::size_t i = 0; i < subset.size(); ++i) {
      if (!subset[i].is_string()) throw ConfigError(path("pck_subset", i), "expected a joint name");
      const auto it = joint_of.find(subset[i].get<std::string>());
      if (it == joint_of.end()) throw ConfigError(path("pck_subset", i), "unknown joint");
      if (std::find(s.pck_subset_.begin(), s.pck_subset_.end(), it->second) != s.pck_subset_.end()) {
        throw ConfigError(path("pck_subset", i), "duplicate joint");
      }
      s.pck_subset_.push_back(it->second);
    }
  } else {
    for (int j = 0; j < nj; ++j) s.pck_subset_.push_back(j);
  }
  return s;
}

Skeleton load_skeleton_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError(file.string(), "cannot open skeleton config");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(file.string(), e.what());
  }
  return load_skeleton(doc);
}

const std::string& builtin_skeleton_config(std::string_view name) {
  if (name == "h36m17") return detail::kH36m17Config;
  if (name == "h36m21") return detail::kH36m21Config;
  throw InvalidArgument("unknown built-in skeleton '" + std::string(name) + "'");
}

Skeleton builtin_skeleton(std::string_view name) { return load_skeleton(json::parse(builtin_skeleton_config(name))); }

std::vector<std::string> builtin_skeleton_names() { return {"h36m17", "h36m21"}; }

json skeleton_to_json(const Skeleton& skel) {
  json doc;
  doc["name"] = skel.name();
  if (!skel.notes().empty()) doc["notes"] = skel.notes();
  const auto& names = skel.joint_names();
  json joints = json::array();
  for (int j = 0; j < skel.joint_count(); ++j) {
    const int p = skel.parent(j);
    joints.push_back({{"name", names[j]}, {"parent", p == kNoParent ? json(nullptr) : json(names[p])}});
  }
  doc["joints"] = joints;
  json bones = json::array();
  for (int b = 0; b < skel.bone_count(); ++b) {
    const Bone& bone = skel.bone(b);
    json frame = json::array();
    for (int i = 0; i < 9; ++i) frame.push_back(bone.neutral_frame(i / 3, i % 3));
    json entry = {{"child", names[bone.child_joint]},
                  {"parent", names[bone.parent_joint]},
                  {"rotating", bone.rotating},
                  {"reversed", bone.reversed},
                  {"neutral_frame", frame},
                  {"length", skel.default_lengths()[b]}};
    if (!bone.rotating) entry["follows"] = names[skel.bone(bone.follows).child_joint];
    bones.push_back(entry);
  }
  doc["bones"] = bones;
  json pairs = json::array();
  for (const auto& [l, r] : skel.flip_pairs()) pairs.push_back({names[l], names[r]});
  doc["flip_pairs"] = pairs;
  json subset = json::array();
  for (int j : skel.pck_subset()) subset.push_back(names[j]);
  doc["pck_subset"] = subset;
  return doc;
}

void validate_pose(const Skeleton& skel, const Pose& pose, RotationConvention expected) {
  if (pose.convention != expected) {
    throw InvalidArgument(expected == RotationConvention::Global ? "expected a global-convention pose"
                                                                 : "expected a parent-relative pose");
  }
  if (static_cast<int>(pose.rotations.size()) != skel.rotating_count()) {
    throw CountMismatch("pose has " + std::to_string(pose.rotations.size()) + " rotations, skeleton '" + skel.name() +
                        "' expects " + std::to_string(skel.rotating_count()));
  }
  if (!pose.root_position.allFinite()) throw InvalidArgument("pose root position is not finite");
  for (std::size_t i = 0; i < pose.rotations.size(); ++i) {
    if (!is_rotation(pose.rotations[i])) throw InvalidArgument("pose rotation " + std::to_string(i) + " is not a rotation");
  }
}

std::vector<Mat3> bone_frames(const Skeleton& skel, const Pose& pose) {
  validate_pose(skel, pose, RotationConvention::Global);
  std::vector<Mat3> frames(skel.bone_count());
  for (int b : skel.topological_bones()) {
    const Bone& bone = skel.bone(b);
    if (bone.rotating) {
      frames[b] = pose.rotations[skel.rotating_slot(b)];
    } else {
      const Bone& source = skel.bone(bone.follows);
      frames[b] = frames[bone.follows] * source.neutral_frame.transpose() * bone.neutral_frame;
    }
  }
  return frames;
}

JointPositions forward_kinematics(const Skeleton& skel, const Pose& pose, const BoneLengths& lengths) {
  if (lengths.values.size() != skel.bone_count()) throw CountMismatch("bone length count does not match skeleton");
  if ((lengths.values.array() <= 0.0).any()) throw InvalidArgument("bone lengths must be positive");
  const std::vector<Mat3> frames = bone_frames(skel, pose);
  JointPositions joints(3, skel.joint_count());
  joints.col(skel.root()) = pose.root_position;
  for (int b : skel.topological_bones()) {
    const Bone& bone = skel.bone(b);
    joints.col(bone.child_joint) = joints.col(bone.parent_joint) + lengths[b] * frames[b].col(1);
  }
  return joints;
}

Pose globals_to_locals(const Skeleton& skel, const Pose& pose) {
  const std::vector<Mat3> frames = bone_frames(skel, pose);
  Pose out{pose.root_position, {}, RotationConvention::ParentRelative};
  out.rotations.reserve(pose.rotations.size());
  for (int slot = 0; slot < skel.rotating_count(); ++slot) {
    const int pb = skel.parent_bone(skel.rotating_bones()[slot]);
    const Mat3& global = pose.rotations[slot];
    out.rotations.push_back(pb < 0 ? global : Mat3(frames[pb].transpose() * global));
  }
  return out;
}

Pose locals_to_globals(const Skeleton& skel, const Pose& pose) {
  validate_pose(skel, pose, RotationConvention::ParentRelative);
  std::vector<Mat3> frames(skel.bone_count());
  for (int b : skel.topological_bones()) {
    const Bone& bone = skel.bone(b);
    if (bone.rotating) {
      const int pb = skel.parent_bone(b);
      const Mat3& local = pose.rotations[skel.rotating_slot(b)];
      frames[b] = pb < 0 ? local : Mat3(frames[pb] * local);
    } else {
      frames[b] = frames[bone.follows] * skel.bone(bone.follows).neutral_frame.transpose() * bone.neutral_frame;
    }
  }
  Pose out{pose.root_position, {}, RotationConvention::Global};
  for (int b : skel.rotating_bones()) out.rotations.push_back(frames[b]);
  return out;
}

BoneLengths average_bone_lengths(const Skeleton& skel, std::span<const JointPositions> frames) {
  if (frames.empty()) throw EmptyDataset("average_bone_lengths: no frames");
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(skel.bone_count());
  for (const JointPositions& joints : frames) {
    if (joints.cols() != skel.joint_count()) throw CountMismatch("frame joint count does not match skeleton");
    for (int b = 0; b < skel.bone_count(); ++b) {
      const Bone& bone = skel.bone(b);
      sum(b) += (joints.col(bone.child_joint) - joints.col(bone.parent_joint)).norm();
    }
  }
  return {sum / static_cast<double>(frames.size())};
}

Mat3 realign_bone_frame(const Skeleton& skel, int bone, const JointPositions& joints, const Vec3& forward_hint) {
  if (joints.cols() != skel.joint_count()) throw CountMismatch("joint count does not match skeleton");
  const Bone& b = skel.bone(bone);
  const Vec3 dir = joints.col(b.child_joint) - joints.col(b.parent_joint);
  return frame_from_bone_and_forward(dir, forward_hint, b.reversed);
}

}  // namespace okp
