#include "okp/codec.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

namespace okp {

Eigen::Vector3d decode_point(const HeatmapTriple& maps, double extend) {
  return {soft_argmax_1d(maps.x, extend), soft_argmax_1d(maps.y, extend), soft_argmax_1d(maps.z, extend)};
}

KeypointSet decode_keypoints(std::span<const HeatmapTriple> maps, double extend, Eigen::Index expected_count) {
  if (static_cast<Eigen::Index>(maps.size()) != expected_count) {
    throw CountMismatch("decode_keypoints: " + std::to_string(maps.size()) + " heatmap triples, expected " +
                        std::to_string(expected_count));
  }
  KeypointSet kps{Eigen::Matrix3Xd(3, expected_count), Space::NormalizedImage};
  for (Eigen::Index i = 0; i < expected_count; ++i) kps.points.col(i) = decode_point(maps[i], extend);
  return kps;
}

KeypointSet decode_keypoints(std::span<const HeatmapTriple> maps, double extend, const Skeleton& skel) {
  return decode_keypoints(maps, extend, skel.keypoint_count());
}

Eigen::VectorXd encode_gaussian(double coord, Eigen::Index bins, double sigma_bins, double extend) {
  if (bins < 2) throw InvalidArgument("encode_gaussian: need at least 2 bins");
  if (!(sigma_bins > 0.0)) throw InvalidArgument("encode_gaussian: sigma must be positive");
  if (!(extend >= 1.0)) throw InvalidArgument("encode_gaussian: extend must be >= 1");
  const double half = 0.5 * static_cast<double>(bins);
  // Fractional bin index whose center weight equals coord / extend.
  const double u = coord / extend * half + half - 0.5;
  const Eigen::ArrayXd idx = Eigen::ArrayXd::LinSpaced(bins, 0.0, static_cast<double>(bins - 1));
  return -(idx - u).square() / (2.0 * sigma_bins * sigma_bins);
}

HeatmapTriple encode_point(const Eigen::Vector3d& coord, Eigen::Index nx, Eigen::Index ny, Eigen::Index nz,
                           double sigma_bins, double extend) {
  return {encode_gaussian(coord.x(), nx, sigma_bins, extend), encode_gaussian(coord.y(), ny, sigma_bins, extend),
          encode_gaussian(coord.z(), nz, sigma_bins, extend)};
}

namespace {

constexpr std::array<char, 4> kMagic = {'O', 'K', 'H', '1'};

void put_u32(std::ostream& out, std::uint32_t v) {
  const char bytes[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                         static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
  out.write(bytes, 4);
}

std::uint32_t get_u32(std::istream& in) {
  unsigned char bytes[4];
  if (!in.read(reinterpret_cast<char*>(bytes), 4)) throw FormatError("heatmap file: truncated stream");
  return std::uint32_t(bytes[0]) | (std::uint32_t(bytes[1]) << 8) | (std::uint32_t(bytes[2]) << 16) |
         (std::uint32_t(bytes[3]) << 24);
}

void put_f32(std::ostream& out, float f) { put_u32(out, std::bit_cast<std::uint32_t>(f)); }

float get_f32(std::istream& in) { return std::bit_cast<float>(get_u32(in)); }

void put_axis(std::ostream& out, const Eigen::VectorXd& logits, std::uint32_t expected) {
  if (logits.size() != static_cast<Eigen::Index>(expected)) {
    throw CountMismatch("heatmap file: axis length " + std::to_string(logits.size()) + " differs from header " +
                        std::to_string(expected));
  }
  for (double v : logits) put_f32(out, static_cast<float>(v));
}

Eigen::VectorXd get_axis(std::istream& in, std::uint32_t n) {
  Eigen::VectorXd v(n);
  for (std::uint32_t i = 0; i < n; ++i) v(i) = get_f32(in);
  return v;
}

}  // namespace

void write_heatmap_file(std::ostream& out, const HeatmapFile& file) {
  out.write(kMagic.data(), kMagic.size());
  put_u32(out, static_cast<std::uint32_t>(file.keypoints.size()));
  put_u32(out, file.nx);
  put_u32(out, file.ny);
  put_u32(out, file.nz);
  for (const HeatmapTriple& t : file.keypoints) {
    put_axis(out, t.x, file.nx);
    put_axis(out, t.y, file.ny);
    put_axis(out, t.z, file.nz);
  }
  if (!out) throw FormatError("heatmap file: write failed");
}

HeatmapFile read_heatmap_file(std::istream& in) {
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) throw FormatError("heatmap file: bad magic");
  HeatmapFile file;
  const std::uint32_t count = get_u32(in);
  file.nx = get_u32(in);
  file.ny = get_u32(in);
  file.nz = get_u32(in);
  if (file.nx < 2 || file.ny < 2 || file.nz < 2) throw FormatError("heatmap file: axes need at least 2 bins");
  file.keypoints.reserve(std::min<std::uint32_t>(count, 4096));
  for (std::uint32_t k = 0; k < count; ++k) {
    HeatmapTriple t;
    t.x = get_axis(in, file.nx);
    t.y = get_axis(in, file.ny);
    t.z = get_axis(in, file.nz);
    file.keypoints.push_back(std::move(t));
  }
  if (in.peek() != std::char_traits<char>::eof()) throw FormatError("heatmap file: trailing bytes");
  return file;
}

void write_heatmap_file(const std::filesystem::path& path, const HeatmapFile& file) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open " + path.string() + " for writing");
  write_heatmap_file(out, file);
}

HeatmapFile read_heatmap_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  return read_heatmap_file(in);
}

}  // namespace okp
