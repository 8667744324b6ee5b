#include "okp/keypoints.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <limits>
#include <random>

#include "test_support.hpp"

namespace okp {
namespace {

using nlohmann::json;
using testing::max_abs;
using testing::random_global_pose;

using Markers = Eigen::Matrix<double, 3, 6>;

Skeleton single_bone() {
  return load_skeleton(json::parse(R"({
    "name": "stick",
    "joints": [{"name": "A", "parent": null}, {"name": "B", "parent": "A"}],
    "bones": [{"child": "B", "neutral_frame": [1, 0, 0, 0, 1, 0, 0, 0, 1], "length": 2.0}]
  })"));
}

double worst_rotation_error(const Skeleton& s, const Pose& a, const Pose& b) {
  double worst = 0.0;
  for (int k = 0; k < s.rotating_count(); ++k) worst = std::max(worst, geodesic_angle(a.rotations[k], b.rotations[k]));
  return worst;
}

TEST(BoneMarkerTemplate, Columns) {
  Markers expected;
  expected << 0, 0, 0.5, -0.5, 0, 0,
              0, 1, 0.5, 0.5, 0.5, 0.5,
              0, 0, 0, 0, 0.5, -0.5;
  EXPECT_EQ(bone_marker_template(), expected);
}

TEST(SynthesizeOkps, SingleBoneIdentity) {
  const Skeleton s = single_bone();
  const KeypointSet kps = synthesize_okps(s, s.neutral_pose(), s.default_lengths());
  ASSERT_EQ(kps.size(), 6);
  EXPECT_EQ(kps.space, Space::WorldMetric);
  EXPECT_EQ(Vec3(kps.points.col(0)), Vec3(0, 0, 0));
  EXPECT_EQ(Vec3(kps.points.col(1)), Vec3(0, 2, 0));
  EXPECT_EQ(Vec3(kps.points.col(okp_index(s, 0, kLeft))), Vec3(1, 1, 0));
  EXPECT_EQ(Vec3(kps.points.col(okp_index(s, 0, kRight))), Vec3(-1, 1, 0));
  EXPECT_EQ(Vec3(kps.points.col(okp_index(s, 0, kForward))), Vec3(0, 1, 1));
  EXPECT_EQ(Vec3(kps.points.col(okp_index(s, 0, kBack))), Vec3(0, 1, -1));
}

TEST(SynthesizeOkps, ShinMarkersMidwayAndOffset) {
  const Skeleton s = builtin_skeleton("h36m17");
  const KeypointSet kps = synthesize_okps(s, s.neutral_pose(), s.default_lengths());
  const int bone = 2;  // RKnee -> RFoot
  const int slot = s.rotating_slot(bone);
  const Vec3 knee = kps.points.col(s.joint_index("RKnee"));
  const Vec3 ankle = kps.points.col(s.joint_index("RFoot"));
  const Vec3 axis = (ankle - knee).normalized();
  const double l = s.default_lengths()[bone];
  for (int k = 0; k < 4; ++k) {
    const Vec3 m = kps.points.col(okp_index(s, slot, k));
    EXPECT_NEAR((m - knee).dot(axis), 0.5 * l, 1e-9);
    EXPECT_NEAR((m - (knee + 0.5 * l * axis)).norm(), 0.5 * l, 1e-9);
  }
  // Local X = Y x Z; with Y pointing down and Z forward it is world -x.
  EXPECT_LT(kps.points(0, okp_index(s, slot, kLeft)), knee.x());
  EXPECT_GT(kps.points(2, okp_index(s, slot, kForward)), knee.z());
}

TEST(SynthesizeOkps, MarkersAtHalfBoneFromMidpoint) {
  std::mt19937_64 rng(31);
  for (const std::string& name : builtin_skeleton_names()) {
    const Skeleton s = builtin_skeleton(name);
    for (int trial = 0; trial < 200; ++trial) {
      const KeypointSet kps = synthesize_okps(s, random_global_pose(s, rng), s.default_lengths());
      for (int slot = 0; slot < s.rotating_count(); ++slot) {
        const Markers m = bone_markers(kps, s, slot);
        const Vec3 mid = 0.5 * (m.col(0) + m.col(1));
        const double l = s.default_lengths()[s.rotating_bones()[slot]];
        for (int k = 2; k < 6; ++k) ASSERT_NEAR((Vec3(m.col(k)) - mid).norm(), 0.5 * l, 1e-9);
      }
    }
  }
}

TEST(SolvePose, TPoseGivesNeutralFrames) {
  const Skeleton s = builtin_skeleton("h36m17");
  const Pose p = solve_pose(synthesize_okps(s, s.neutral_pose(), s.default_lengths()), s);
  for (int k = 0; k < s.rotating_count(); ++k) EXPECT_LT(max_abs(p.rotations[k] - s.neutral_frame(k)), 1e-12);
  EXPECT_EQ(p.root_position, Vec3::Zero());
  EXPECT_EQ(p.convention, RotationConvention::Global);
}

TEST(SolvePose, RoundTripIsExact) {
  std::mt19937_64 rng(32);
  for (const std::string& name : builtin_skeleton_names()) {
    const Skeleton s = builtin_skeleton(name);
    for (int trial = 0; trial < 1000; ++trial) {
      const Pose truth = random_global_pose(s, rng);
      const KeypointSet kps = synthesize_okps(s, truth, s.default_lengths());
      const Pose solved = solve_pose(kps, s);
      ASSERT_LT(worst_rotation_error(s, truth, solved), 1e-9);
      ASSERT_LT(max_abs(forward_kinematics(s, solved, s.default_lengths()) - kps.points.leftCols(s.joint_count())), 1e-9);
    }
  }
}

TEST(SolvePose, UniformScalingLeavesRotations) {
  const Skeleton s = builtin_skeleton("h36m17");
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 100; ++trial) {
    KeypointSet kps = synthesize_okps(s, random_global_pose(s, rng), s.default_lengths());
    const Pose a = solve_pose(kps, s);
    kps.points *= 0.5;
    const Pose b = solve_pose(kps, s);
    ASSERT_LT(worst_rotation_error(s, a, b), 1e-12);
  }
}

TEST(SolvePose, EquivariantUnderRigidMotion) {
  const Skeleton s = builtin_skeleton("h36m17");
  std::mt19937_64 rng(34);
  std::uniform_real_distribution<double> shift(-300.0, 300.0);
  for (int trial = 0; trial < 200; ++trial) {
    KeypointSet kps = synthesize_okps(s, random_global_pose(s, rng), s.default_lengths());
    const Pose a = solve_pose(kps, s);
    const Mat3 q = random_rotation(rng);
    const double tx = shift(rng);
    const double ty = shift(rng);
    const double tz = shift(rng);
    const Vec3 t(tx, ty, tz);
    kps.points = q * kps.points;
    kps.points.colwise() += t;
    const Pose b = solve_pose(kps, s);
    for (int k = 0; k < s.rotating_count(); ++k) ASSERT_LT(max_abs(b.rotations[k] - q * a.rotations[k]), 1e-9);
    ASSERT_LT((b.root_position - (q * a.root_position + t)).norm(), 1e-9);
  }
}

TEST(SolvePose, RollIsRecovered) {
  // Joints alone cannot see this rotation; the orientation markers can.
  const Skeleton s = builtin_skeleton("h36m17");
  Pose rolled = s.neutral_pose();
  const int slot = s.rotating_slot(11);
  rolled.rotations[slot] = rolled.rotations[slot] * axis_angle<double>(Vec3::UnitY(), 1.0);
  const Pose solved = solve_pose(synthesize_okps(s, rolled, s.default_lengths()), s);
  EXPECT_NEAR(geodesic_angle(solved.rotations[slot], s.neutral_frame(slot)), 1.0, 1e-12);
}

TEST(SolvePose, NoisyMarkersStayClose) {
  std::mt19937_64 rng(35);
  const Mat3 neutral = Mat3::Identity();
  const double l = 300.0;
  std::normal_distribution<double> noise(0.0, 0.01 * l);
  std::vector<double> errors;
  for (int trial = 0; trial < 1000; ++trial) {
    const Mat3 r = random_rotation(rng);
    Markers obs = l * (r * bone_marker_template());
    for (int c = 0; c < 6; ++c) {
      for (int d = 0; d < 3; ++d) obs(d, c) += noise(rng);
    }
    errors.push_back(geodesic_angle(solve_bone_rotation(obs, neutral), r));
  }
  std::nth_element(errors.begin(), errors.begin() + 500, errors.end());
  EXPECT_LT(errors[500], 0.05);
}

TEST(SolvePose, DoubledJointWeightsFavorEndpoints) {
  std::mt19937_64 rng(36);
  const double l = 300.0;
  std::normal_distribution<double> noise(0.0, 0.05 * l);
  double weighted_sum = 0.0;
  double unit_sum = 0.0;
  auto endpoint_error = [&](const Markers& obs, const Markers& truth, double joint_weight) {
    WeightedCorrespondences<double> corr{l * bone_marker_template(), obs, Eigen::VectorXd::Ones(6)};
    corr.weights.head(2).setConstant(joint_weight);
    const Transform<double> tf = umeyama_align(corr, false);
    return (tf(corr.source.col(0)) - truth.col(0)).norm() + (tf(corr.source.col(1)) - truth.col(1)).norm();
  };
  for (int trial = 0; trial < 1000; ++trial) {
    const Mat3 r = random_rotation(rng);
    const Markers truth = l * (r * bone_marker_template());
    Markers obs = truth;
    for (int c = 2; c < 6; ++c) {
      for (int d = 0; d < 3; ++d) obs(d, c) += noise(rng);
    }
    weighted_sum += endpoint_error(obs, truth, SolveOptions{}.joint_weight);
    unit_sum += endpoint_error(obs, truth, 1.0);
  }
  EXPECT_LE(weighted_sum, unit_sum);
}

TEST(SolvePose, ReportsMissingAndMiscountedKeypoints) {
  const Skeleton s = builtin_skeleton("h36m17");
  KeypointSet kps = synthesize_okps(s, s.neutral_pose(), s.default_lengths());
  kps.points.col(3).setConstant(std::numeric_limits<double>::quiet_NaN());
  kps.points(1, 40) = std::numeric_limits<double>::infinity();
  try {
    solve_pose(kps, s);
    FAIL() << "expected IncompleteKeypoints";
  } catch (const IncompleteKeypoints& e) {
    EXPECT_NE(std::string(e.what()).find("3,40"), std::string::npos) << e.what();
  }
  KeypointSet short_set{Eigen::Matrix3Xd::Zero(3, 76), Space::WorldMetric};
  EXPECT_THROW(solve_pose(short_set, s), CountMismatch);
}

TEST(SolvePose, DegenerateObservationsThrow) {
  const Skeleton s = builtin_skeleton("h36m17");
  KeypointSet kps{Eigen::Matrix3Xd::Zero(3, s.keypoint_count()), Space::WorldMetric};
  EXPECT_THROW(solve_pose(kps, s), DegenerateInput);
}

TEST(Mirror, IsAnInvolution) {
  const Skeleton s = builtin_skeleton("h36m21");
  KeypointSet kps{Eigen::Matrix3Xd::Random(3, s.keypoint_count()), Space::NormalizedImage};
  const KeypointSet twice = mirror_keypoints(mirror_keypoints(kps, s), s);
  EXPECT_EQ(twice.points, kps.points);
  EXPECT_EQ(twice.space, kps.space);
}

TEST(Mirror, MatchesMirroredPose) {
  // Reflecting the body through x = 0 maps bone k's rotation R to M R M on its mirror bone.
  Mat3 m = Mat3::Identity();
  m(0, 0) = -1.0;
  std::mt19937_64 rng(38);
  for (const std::string& name : builtin_skeleton_names()) {
    const Skeleton s = builtin_skeleton(name);
    for (int trial = 0; trial < 100; ++trial) {
      const Pose p = random_global_pose(s, rng);
      Pose mirrored = p;
      mirrored.root_position = m * p.root_position;
      for (int k = 0; k < s.rotating_count(); ++k) mirrored.rotations[s.mirror_slot(k)] = m * p.rotations[k] * m;
      const KeypointSet expected = synthesize_okps(s, mirrored, s.default_lengths());
      const KeypointSet got = mirror_keypoints(synthesize_okps(s, p, s.default_lengths()), s);
      ASSERT_LT(max_abs(got.points - expected.points), 1e-9);
    }
  }
}

TEST(FlipMerge, ExactMirrorIsFixedPoint) {
  const Skeleton s = builtin_skeleton("h36m17");
  std::mt19937_64 rng(39);
  KeypointSet kps = synthesize_okps(s, random_global_pose(s, rng), s.default_lengths());
  kps.space = Space::NormalizedImage;
  kps.points /= 1000.0;
  const KeypointSet merged = flip_merge(kps, mirror_keypoints(kps, s), s);
  EXPECT_EQ(merged.points, kps.points);
  EXPECT_EQ(merged.space, Space::NormalizedImage);
}

TEST(FlipMerge, HalvesSingleJointPerturbation) {
  const Skeleton s = builtin_skeleton("h36m17");
  KeypointSet kps{Eigen::Matrix3Xd::Random(3, s.keypoint_count()), Space::NormalizedImage};
  KeypointSet flipped = mirror_keypoints(kps, s);
  const double eps = 0.01;
  const int joint = s.joint_index("LElbow");
  // LElbow lands on RElbow in the flipped image, with x negated.
  flipped.points(1, s.joint_index("RElbow")) += eps;
  const KeypointSet merged = flip_merge(kps, flipped, s);
  Eigen::Matrix3Xd diff = merged.points - kps.points;
  EXPECT_NEAR(diff(1, joint), eps / 2, 1e-15);
  diff(1, joint) = 0.0;
  EXPECT_LT(max_abs(diff), 1e-15);
}

TEST(FlipMerge, SolveAfterMergeMatchesSolve) {
  const Skeleton s = builtin_skeleton("h36m17");
  std::mt19937_64 rng(40);
  for (int trial = 0; trial < 200; ++trial) {
    KeypointSet kps = synthesize_okps(s, random_global_pose(s, rng), s.default_lengths());
    kps.space = Space::NormalizedImage;
    kps.points /= 1000.0;
    const Pose a = solve_pose(kps, s);
    const Pose b = solve_pose(flip_merge(kps, mirror_keypoints(kps, s), s), s);
    ASSERT_LT(worst_rotation_error(s, a, b), 1e-9);
  }
}

TEST(FlipMerge, RejectsMixedSpaces) {
  const Skeleton s = builtin_skeleton("h36m17");
  KeypointSet a{Eigen::Matrix3Xd::Zero(3, s.keypoint_count()), Space::NormalizedImage};
  KeypointSet b{Eigen::Matrix3Xd::Zero(3, s.keypoint_count()), Space::WorldMetric};
  EXPECT_THROW(flip_merge(a, b, s), SpaceMismatch);
  b.space = Space::NormalizedImage;
  b.points.resize(3, 10);
  EXPECT_THROW(flip_merge(a, b, s), CountMismatch);
}

TEST(SpaceTag, RoundTripsThroughText) {
  for (Space sp : {Space::NormalizedImage, Space::WorldMetric}) EXPECT_EQ(space_from_string(to_string(sp)), sp);
  EXPECT_EQ(to_string(Space::NormalizedImage), "normalized-image");
  EXPECT_THROW(space_from_string("pixels"), FormatError);
}

}  // namespace
}  // namespace okp
