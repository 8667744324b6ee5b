// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "okp/cli.hpp"
#include "okp/codec.hpp"
#include "okp/harness.hpp"
#include "okp/keypoints.hpp"
#include "okp/metrics.hpp"
#include "test_support.hpp"

namespace {

using namespace okp;
using okp::testing::random_global_pose;
using Markers = Eigen::Matrix<double, 3, 6>;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), pattern, a, b, c);
  return buf;
}

Outcome round_trip() {
  const Skeleton skel = builtin_skeleton("h36m17");
  const BoneLengths lengths = skel.default_lengths();
  std::mt19937_64 rng(1001);
  double worst_angle = 0.0;
  double worst_mm = 0.0;
  const auto start = std::chrono::steady_clock::now();
  for (int trial = 0; trial < 1000; ++trial) {
    const Pose truth = random_global_pose(skel, rng);
    const KeypointSet kps = synthesize_okps(skel, truth, lengths);
    const Pose solved = solve_pose(kps, skel);
    worst_angle = std::max(worst_angle, mpjas(solved.rotations, truth.rotations));
    const JointPositions joints = forward_kinematics(skel, solved, lengths);
    worst_mm = std::max(worst_mm, (joints - kps.points.leftCols(skel.joint_count())).cwiseAbs().maxCoeff());
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {worst_angle < 1e-9 && worst_mm < 1e-9 && seconds < 5.0,
          fmt("worst mpjas %.3g rad, worst joint %.3g mm, %.3f s", worst_angle, worst_mm, seconds)};
}

Outcome uniform_baselines() {
  std::mt19937_64 rng(1002);
  const int n = 100000;
  std::vector<Mat3> a, b;
  a.reserve(n);
  b.reserve(n);
  for (int i = 0; i < n; ++i) {
    a.push_back(random_rotation(rng));
    b.push_back(random_rotation(rng));
  }
  const double theta = mpjas(a, b);
  const double acc = maa(a, b);
  return {std::abs(theta - 2.208) <= 0.02 && std::abs(acc - 0.297) <= 0.01,
          fmt("mean separation %.4f rad, maa %.4f over 1e5 pairs", theta, acc)};
}

Outcome maa_consistency() {
  const std::vector<Mat3> gt{Mat3::Identity()};
  const std::vector<Mat3> pred{axis_angle<double>(Vec3(1, 2, 3).normalized(), 0.213)};
  const double acc = maa(pred, gt);
  const double sep = mpjas(pred, gt);
  return {std::abs(acc - 0.932) <= 0.0005 && std::abs(sep - 0.213) <= 1e-12,
          fmt("maa %.6f for separation %.6f rad", acc, sep)};
}

Outcome alignment_optimality() {
  std::mt19937_64 rng(1004);
  std::normal_distribution<double> coord(0.0, 300.0);
  std::uniform_real_distribution<double> scale(0.2, 5.0);
  double worst_gap = -1e300;
  double worst_similar = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    JointPositions gt(3, 17), pred(3, 17);
    for (double& v : gt.reshaped()) v = coord(rng);
    for (double& v : pred.reshaped()) v = coord(rng);
    worst_gap = std::max(worst_gap, pmpjpe(pred, gt) - mpjpe(pred, gt, false));

    const Mat3 r = random_rotation(rng);
    const double s = scale(rng);
    const double tx = coord(rng);
    const double ty = coord(rng);
    const double tz = coord(rng);
    JointPositions similar = s * (r * gt);
    similar.colwise() += Vec3(tx, ty, tz);
    worst_similar = std::max(worst_similar, pmpjpe(similar, gt));
  }
  return {worst_gap <= 1e-9 && worst_similar <= 1e-9,
          fmt("max pmpjpe - mpjpe %.3g mm, max pmpjpe on similar sets %.3g mm", worst_gap, worst_similar)};
}

Outcome reflection_safety() {
  std::mt19937_64 rng(1005);
  std::normal_distribution<double> coord(0.0, 1.0);
  Mat3 mirror = Mat3::Identity();
  mirror(0, 0) = -1.0;
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 4 + trial % 20;
    Eigen::Matrix3Xd src(3, n);
    for (double& v : src.reshaped()) v = coord(rng);
    Eigen::Matrix3Xd dst(3, n);
    switch (trial % 3) {
      case 0:  // Coplanar target.
        dst = random_rotation(rng) * src;
        dst.row(2).setZero();
        break;
      case 1:  // Mirror image of the source.
        dst = random_rotation(rng) * mirror * src;
        break;
      default: {  // Two clusters.
        const Vec3 p(coord(rng), coord(rng), coord(rng));
        const Vec3 q = p + Vec3::UnitX();
        for (int i = 0; i < n; ++i) dst.col(i) = (i % 2 == 0) ? p : q;
      }
    }
    for (bool with_scale : {false, true}) {
      const Transform<double> tf = umeyama_align<double>(src, dst, with_scale);
      worst = std::max(worst, std::abs(tf.rotation.determinant() - 1.0));
    }
  }
  return {worst <= 1e-6, fmt("max |det R - 1| %.3g over 1000 targets", worst)};
}

Outcome soft_argmax_contract() {
  bool uniform_zero = true;
  for (Eigen::Index n = 2; n <= 256; ++n) {
    uniform_zero = uniform_zero && soft_argmax_1d(Eigen::VectorXd::Constant(n, 0.37)) == 0.0;
  }

  std::mt19937_64 rng(1006);
  std::uniform_real_distribution<double> coord(-0.9, 0.9);
  double worst_round_trip = 0.0;
  bool extension_exact = true;
  for (int i = 0; i < 10000; ++i) {
    const double c = coord(rng);
    const Eigen::VectorXd logits = encode_gaussian(c, 96, 1.0);
    const double decoded = soft_argmax_1d(logits);
    worst_round_trip = std::max(worst_round_trip, std::abs(decoded - c));
    extension_exact = extension_exact && soft_argmax_1d(logits, 1.25) == 1.25 * decoded;
  }

  // A dominant bin decodes to its center (2i + 1 - N) / N.
  double worst_one_hot = 0.0;
  for (Eigen::Index i = 0; i < 96; ++i) {
    Eigen::VectorXd logits = Eigen::VectorXd::Zero(96);
    logits(i) = 50.0;
    const double center = (2.0 * double(i) + 1.0 - 96.0) / 96.0;
    worst_one_hot = std::max(worst_one_hot, std::abs(soft_argmax_1d(logits) - center));
  }

  return {uniform_zero && worst_round_trip <= 1e-3 && worst_one_hot <= 1e-6 && extension_exact,
          fmt("uniform exact %g, worst round trip %.3g, worst one-hot %.3g", uniform_zero ? 1.0 : 0.0,
              worst_round_trip, worst_one_hot) +
              (extension_exact ? ", x1.25 exact" : ", x1.25 inexact")};
}

Outcome sweep_monotone() {
  const Skeleton skel = builtin_skeleton("h36m17");
  const BoneLengths lengths = skel.default_lengths();
  const std::vector<FrameRecord> frames = generate_synthetic_sequence(1007, 500, skel, lengths, 1.0, 5);
  SweepOptions options;
  options.eval.noise = NoiseRecipe{20.0, 1008};
  const std::vector<double> scales{0.0, 0.5, 1.0, 1.5, 2.0};
  const SensitivityCurve curve = sensitivity_sweep(frames, scales, skel, lengths, options);
  bool monotone = curve.rows.size() == scales.size();
  std::string detail = "mpjpe/mpjas:";
  for (std::size_t i = 0; i < curve.rows.size(); ++i) {
    detail += fmt(" %.3f/%.4f", curve.rows[i].mpjpe, curve.rows[i].mpjas);
    if (i > 0) {
      monotone = monotone && curve.rows[i].mpjpe >= curve.rows[i - 1].mpjpe &&
                 curve.rows[i].mpjas >= curve.rows[i - 1].mpjas;
    }
  }
  return {monotone, detail + " over 500 frames"};
}

Outcome roll_observability() {
  const Skeleton skel = builtin_skeleton("h36m17");
  const BoneLengths lengths = skel.default_lengths();
  std::mt19937_64 rng(1009);
  std::uniform_real_distribution<double> roll(0.1, 3.0);
  double worst_joint_shift = 0.0;
  double worst_detection = 0.0;
  double smallest_roll = 1e300;
  for (int trial = 0; trial < 20; ++trial) {
    const Pose base = random_global_pose(skel, rng);
    const JointPositions joints = forward_kinematics(skel, base, lengths);
    for (int slot = 0; slot < skel.rotating_count(); ++slot) {
      const double angle = roll(rng);
      Pose rolled = base;
      rolled.rotations[slot] = base.rotations[slot] * axis_angle<double>(Vec3::UnitY(), angle);
      worst_joint_shift =
          std::max(worst_joint_shift, (forward_kinematics(skel, rolled, lengths) - joints).cwiseAbs().maxCoeff());
      const Pose solved = solve_pose(synthesize_okps(skel, rolled, lengths), skel);
      worst_detection = std::max(worst_detection, geodesic_angle(solved.rotations[slot], rolled.rotations[slot]));
      smallest_roll = std::min(smallest_roll, geodesic_angle(solved.rotations[slot], base.rotations[slot]));
    }
  }
  return {worst_joint_shift < 1e-9 && worst_detection < 1e-9 && smallest_roll >= 0.1 - 1e-9,
          fmt("joint shift %.3g mm, roll recovered to %.3g rad, smallest detected roll %.3f rad", worst_joint_shift,
              worst_detection, smallest_roll)};
}

Outcome loss_identities() {
  // Integer coordinates with group sums divisible by 6 keep every centroid exact.
  std::mt19937_64 rng(1010);
  std::uniform_int_distribution<int> coord(-600, 600);
  std::uniform_int_distribution<int> shift(-5000, 5000);
  std::vector<Markers> gt, pred;
  for (int k = 0; k < 15; ++k) {
    Markers g;
    for (double& v : g.reshaped()) v = coord(rng);
    for (int d = 0; d < 3; ++d) {
      const double rem = std::fmod(g.row(d).sum(), 6.0);
      g(d, 5) -= rem;
    }
    Markers p = g;
    const int tx = shift(rng);
    const int ty = shift(rng);
    const int tz = shift(rng);
    p.colwise() += Vec3(tx, ty, tz);
    gt.push_back(g);
    pred.push_back(p);
  }
  const double cnt = loss_cnt(pred, gt);

  std::normal_distribution<double> noise(0.0, 100.0);
  JointPositions a(3, 17), b(3, 17);
  for (double& v : a.reshaped()) v = noise(rng);
  for (double& v : b.reshaped()) v = noise(rng);
  const double lm = loss_mpjpe(KeypointSet{a, Space::WorldMetric}, KeypointSet{b, Space::WorldMetric});
  const double mp = mpjpe(a, b, false);
  return {cnt == 0.0 && lm == mp, fmt("loss_cnt %g under group translations, loss_mpjpe - mpjpe %g", cnt, lm - mp)};
}

int run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "okp");
  std::vector<const char*> argv;
  for (const std::string& s : args) argv.push_back(s.c_str());
  std::ostringstream out, err;
  return cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome cli_determinism() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "okp_acceptance_cli";
  fs::remove_all(dir);
  fs::create_directories(dir);
  bool ok = true;
  for (const std::string tag : {"a", "b"}) {
    const std::string synth = (dir / ("synth_" + tag + ".jsonl")).string();
    const std::string solved = (dir / ("solved_" + tag + ".jsonl")).string();
    const std::string report = (dir / ("report_" + tag + ".csv")).string();
    ok = ok && run_cli({"synth", "--seed", "42", "--frames", "200", "--noise-sigma", "15", "-o", synth}) == 0;
    ok = ok && run_cli({"solve", "-i", synth, "-o", solved}) == 0;
    ok = ok && run_cli({"eval", "-i", solved, "--format", "csv", "-o", report}) == 0;
  }
  std::size_t bytes = 0;
  for (const std::string stem : {"synth_", "solved_", "report_"}) {
    const std::string ext = stem == "report_" ? ".csv" : ".jsonl";
    const std::string a = slurp(dir / (stem + "a" + ext));
    ok = ok && !a.empty() && a == slurp(dir / (stem + "b" + ext));
    bytes += a.size();
  }
  fs::remove_all(dir);
  return {ok, fmt("synth, solve and eval outputs identical across runs (%.0f bytes)", double(bytes))};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"AC1 round-trip exactness", round_trip},
      {"AC2 uniform-rotation baselines", uniform_baselines},
      {"AC3 maa/mpjas consistency", maa_consistency},
      {"AC4 alignment optimality", alignment_optimality},
      {"AC5 reflection safety", reflection_safety},
      {"AC6 soft-argmax contract", soft_argmax_contract},
      {"AC7 sensitivity monotonicity", sweep_monotone},
      {"AC8 roll observability", roll_observability},
      {"AC9 loss identities", loss_identities},
      {"AC10 CLI determinism", cli_determinism},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome outcome;
    try {
      outcome = check();
    } catch (const std::exception& e) {
      outcome = {false, std::string("threw: ") + e.what()};
    }
    if (!outcome.pass) ++failures;
    std::printf("%s %s: %s\n", outcome.pass ? "PASS" : "FAIL", name, outcome.detail.c_str());
  }
  std::printf("%d of %zu criteria passed\n", int(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
