#include "okp/metrics.hpp"

#include <iomanip>
#include <sstream>

namespace okp {

namespace {

void require_same_count(Eigen::Index a, Eigen::Index b, const char* what) {
  if (a != b) {
    throw CountMismatch(std::string(what) + ": " + std::to_string(a) + " vs " + std::to_string(b) + " points");
  }
}

void require_same_count(std::size_t a, std::size_t b, const char* what) {
  require_same_count(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b), what);
}

std::string number(double v) {
  std::ostringstream os;
  os << std::setprecision(9) << v;
  return os.str();
}

}  // namespace

double mpjpe(const JointPositions& pred, const JointPositions& gt, bool root_relative, int root) {
  require_same_count(pred.cols(), gt.cols(), "mpjpe");
  if (pred.cols() == 0) throw EmptyDataset("mpjpe: no joints");
  if (!root_relative) return (pred - gt).colwise().norm().mean();
  const Eigen::Matrix3Xd p = pred.colwise() - pred.col(root);
  const Eigen::Matrix3Xd g = gt.colwise() - gt.col(root);
  return (p - g).colwise().norm().mean();
}

JointPositions procrustes_aligned(const JointPositions& pred, const JointPositions& gt, bool with_scale) {
  require_same_count(pred.cols(), gt.cols(), "pmpjpe");
  return umeyama_align<double>(pred, gt, with_scale).apply(pred);
}

double pmpjpe(const JointPositions& pred, const JointPositions& gt, bool with_scale) {
  return mpjpe(procrustes_aligned(pred, gt, with_scale), gt, false);
}

double pck(const JointPositions& pred, const JointPositions& gt, double threshold, std::span<const int> subset,
           int root) {
  require_same_count(pred.cols(), gt.cols(), "pck");
  if (subset.empty()) throw InvalidArgument("pck: empty joint subset");
  std::size_t hits = 0;
  for (int j : subset) {
    if (j < 0 || j >= pred.cols()) throw InvalidArgument("pck: joint index " + std::to_string(j) + " out of range");
    const double err = ((pred.col(j) - pred.col(root)) - (gt.col(j) - gt.col(root))).norm();
    if (err < threshold) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(subset.size());
}

std::vector<double> angular_separations(std::span<const Mat3> pred, std::span<const Mat3> gt) {
  require_same_count(pred.size(), gt.size(), "angular separation");
  std::vector<double> out(pred.size());
  for (std::size_t i = 0; i < pred.size(); ++i) out[i] = geodesic_angle(gt[i], pred[i]);
  return out;
}

double mpjas(std::span<const Mat3> pred, std::span<const Mat3> gt) {
  const std::vector<double> sep = angular_separations(pred, gt);
  if (sep.empty()) throw EmptyDataset("mpjas: no rotation pairs");
  double sum = 0.0;
  for (double s : sep) sum += s;
  return sum / static_cast<double>(sep.size());
}

double maa(std::span<const Mat3> pred, std::span<const Mat3> gt) {
  const std::vector<double> sep = angular_separations(pred, gt);
  if (sep.empty()) throw EmptyDataset("maa: no rotation pairs");
  double sum = 0.0;
  for (double s : sep) sum += 1.0 - s / kPi;
  return sum / static_cast<double>(sep.size());
}

double loss_mpjpe(const KeypointSet& pred, const KeypointSet& gt) {
  require_same_space(pred, gt, "loss_mpjpe");
  require_same_count(pred.size(), gt.size(), "loss_mpjpe");
  if (pred.size() == 0) throw EmptyDataset("loss_mpjpe: no keypoints");
  return (pred.points - gt.points).colwise().norm().mean();
}

std::vector<Eigen::Matrix<double, 3, 6>> bone_marker_groups(const KeypointSet& kps, const Skeleton& skel) {
  require_layout(kps, skel, "bone_marker_groups");
  std::vector<Eigen::Matrix<double, 3, 6>> groups;
  groups.reserve(skel.rotating_count());
  for (int slot = 0; slot < skel.rotating_count(); ++slot) groups.push_back(bone_markers(kps, skel, slot));
  return groups;
}

double loss_cnt(std::span<const Eigen::Matrix<double, 3, 6>> pred, std::span<const Eigen::Matrix<double, 3, 6>> gt) {
  require_same_count(pred.size(), gt.size(), "loss_cnt");
  double total = 0.0;
  for (std::size_t k = 0; k < pred.size(); ++k) {
    const Eigen::Matrix<double, 3, 6> p = pred[k].colwise() - pred[k].rowwise().mean();
    const Eigen::Matrix<double, 3, 6> g = gt[k].colwise() - gt[k].rowwise().mean();
    total += (p - g).colwise().norm().sum();
  }
  return total;
}

double loss_cnt(const KeypointSet& pred, const KeypointSet& gt, const Skeleton& skel) {
  require_same_space(pred, gt, "loss_cnt");
  const auto p = bone_marker_groups(pred, skel);
  const auto g = bone_marker_groups(gt, skel);
  return loss_cnt(p, g);
}

nlohmann::json to_json(const MetricsReport& report) {
  const auto summary = [](const MetricSummary& s) {
    return nlohmann::json{{"frames", s.frame_count}, {"mpjpe_p1", s.mpjpe_p1}, {"mpjpe_p2", s.mpjpe_p2},
                          {"pck", s.pck},            {"ppck", s.ppck},         {"mpjas", s.mpjas},
                          {"maa", s.maa}};
  };
  nlohmann::json groups = nlohmann::json::object();
  for (const auto& [label, s] : report.per_group) groups[label] = summary(s);
  return {{"overall", summary(report.overall)},
          {"per_group", groups},
          {"failed_frames", report.failed_frames},
          {"failures", report.failures}};
}

void write_csv(std::ostream& out, const MetricsReport& report) {
  out << "group,frames,mpjpe_p1,mpjpe_p2,pck,ppck,mpjas,maa\n";
  const auto row = [&](const std::string& label, const MetricSummary& s) {
    out << label << ',' << s.frame_count << ',' << number(s.mpjpe_p1) << ',' << number(s.mpjpe_p2) << ','
        << number(s.pck) << ',' << number(s.ppck) << ',' << number(s.mpjas) << ',' << number(s.maa) << '\n';
  };
  for (const auto& [label, s] : report.per_group) row(label, s);
  row("overall", report.overall);
}

void write_text(std::ostream& out, const MetricsReport& report) {
  const auto line = [&](const std::string& label, const MetricSummary& s) {
    out << std::left << std::setw(16) << label << std::right << std::fixed << std::setprecision(3)
        << " frames=" << s.frame_count << " mpjpe=" << s.mpjpe_p1 << "mm pmpjpe=" << s.mpjpe_p2
        << "mm pck=" << 100.0 * s.pck << "% ppck=" << 100.0 * s.ppck << "% mpjas=" << std::setprecision(5) << s.mpjas
        << "rad maa=" << std::setprecision(3) << 100.0 * s.maa << "%\n";
    out.unsetf(std::ios::floatfield);
  };
  for (const auto& [label, s] : report.per_group) line(label, s);
  line("overall", report.overall);
  if (report.failed_frames > 0) out << "failed frames: " << report.failed_frames << '\n';
}

}  // namespace okp
