#pragma once

// Decoding of per-axis 1D heatmaps into keypoint coordinates.

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "okp/keypoints.hpp"

namespace okp {

/// Output range widening applied by the detector head (25% wider than the image).
inline constexpr double kDefaultExtend = 1.25;

/// Bin-center weights w_i = (i + 0.5 - N/2) / (N/2), symmetric in (-1, 1).
/// Mirrored bins get exactly negated weights.
template <typename Scalar = double>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> bin_centers(Eigen::Index bins) {
  const Scalar half = Scalar(bins) / Scalar(2);
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> w(bins);
  for (Eigen::Index i = 0; i < (bins + 1) / 2; ++i) {
    w(i) = (Scalar(i) + Scalar(0.5) - half) / half;
    w(bins - 1 - i) = -w(i);
  }
  return w;
}

/// Coordinate-weighted softmax over one heatmap, scaled by `extend`.
///
/// The weighted sum is folded over mirrored bin pairs so symmetric logits decode
/// to exactly zero.
template <typename Derived>
typename Derived::Scalar soft_argmax_1d(const Eigen::MatrixBase<Derived>& logits,
                                        typename Derived::Scalar extend = typename Derived::Scalar(1)) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = logits.size();
  if (n < 2) throw InvalidArgument("soft_argmax_1d: need at least 2 bins");
  if (!logits.allFinite()) throw InvalidArgument("soft_argmax_1d: non-finite logits");
  if (!(extend >= Scalar(1))) throw InvalidArgument("soft_argmax_1d: extend must be >= 1");
  const Eigen::Array<Scalar, Eigen::Dynamic, 1> e = (logits.array() - logits.maxCoeff()).exp();
  const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> w = bin_centers<Scalar>(n);
  Scalar weighted(0);
  for (Eigen::Index i = 0; i < n / 2; ++i) weighted += w(n - 1 - i) * (e(n - 1 - i) - e(i));
  return extend * (weighted / e.sum());
}

struct HeatmapTriple {
  Eigen::VectorXd x;
  Eigen::VectorXd y;
  Eigen::VectorXd z;
};

Eigen::Vector3d decode_point(const HeatmapTriple& maps, double extend = kDefaultExtend);

/// One heatmap triple per keypoint; the result is tagged normalized-image.
KeypointSet decode_keypoints(std::span<const HeatmapTriple> maps, double extend, const Skeleton& skel);
KeypointSet decode_keypoints(std::span<const HeatmapTriple> maps, double extend, Eigen::Index expected_count);

/// Gaussian logits -(c_i - u)^2 / (2 sigma^2) peaking at the bin position u of `coord`.
Eigen::VectorXd encode_gaussian(double coord, Eigen::Index bins, double sigma_bins, double extend = 1.0);

HeatmapTriple encode_point(const Eigen::Vector3d& coord, Eigen::Index nx, Eigen::Index ny, Eigen::Index nz,
                           double sigma_bins, double extend = kDefaultExtend);

/// Root-relative depth in normalized units.
inline double normalize_depth(double z_world, double root_z, double scale) {
  if (!(scale > 0.0)) throw InvalidArgument("normalize_depth: scale must be positive");
  return (z_world - root_z) / scale;
}

inline double denormalize_depth(double z_normalized, double root_z, double scale) {
  if (!(scale > 0.0)) throw InvalidArgument("denormalize_depth: scale must be positive");
  return z_normalized * scale + root_z;
}

/// Default depth unit: half the bounding-box width, so depth is isotropic with x.
inline double default_depth_scale(double bbox_width_mm) { return 0.5 * bbox_width_mm; }

/// Heatmap fixture stream: "OKH1", then count, N_x, N_y, N_z as little-endian u32,
/// then little-endian f32 logits keypoint-major, axis-major (all x, all y, all z).
struct HeatmapFile {
  std::uint32_t nx = 0;
  std::uint32_t ny = 0;
  std::uint32_t nz = 0;
  std::vector<HeatmapTriple> keypoints;
};

void write_heatmap_file(std::ostream& out, const HeatmapFile& file);
HeatmapFile read_heatmap_file(std::istream& in);
void write_heatmap_file(const std::filesystem::path& path, const HeatmapFile& file);
HeatmapFile read_heatmap_file(const std::filesystem::path& path);

}  // namespace okp
