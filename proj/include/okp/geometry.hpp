#pragma once

// Rotation utilities and weighted least-squares point-set alignment.
//
// Everything here is templated on the scalar type and accepts Eigen
// expressions; the rest of the library instantiates it with double.

#include <Eigen/Dense>

#include <cmath>
#include <random>
#include <string>

#include "okp/errors.hpp"

namespace okp {

template <typename Scalar>
using Vector3 = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar>
using Matrix3 = Eigen::Matrix<Scalar, 3, 3>;
/// One point per column.
template <typename Scalar>
using Points3 = Eigen::Matrix<Scalar, 3, Eigen::Dynamic>;

/// Max-norm tolerance used to accept a matrix as a rotation.
inline constexpr double kRotationTolerance = 1e-6;

/// Minimum weighted variance of the source set accepted by umeyama_align.
inline constexpr double kMinSourceVariance = 1e-12;

template <typename Derived>
bool is_rotation(const Eigen::MatrixBase<Derived>& r, double tol = kRotationTolerance) {
  using Scalar = typename Derived::Scalar;
  if (r.rows() != 3 || r.cols() != 3 || !r.allFinite()) return false;
  const Matrix3<Scalar> m = r;
  const Scalar orth = (m.transpose() * m - Matrix3<Scalar>::Identity()).cwiseAbs().maxCoeff();
  const Scalar det = m.determinant();
  return orth <= Scalar(tol) && std::abs(det - Scalar(1)) <= Scalar(tol);
}

template <typename Derived>
void require_rotation(const Eigen::MatrixBase<Derived>& r, const char* what) {
  if (!is_rotation(r)) throw InvalidArgument(std::string(what) + " is not a proper rotation matrix");
}

/// Similarity transform p -> scale * rotation * p + translation.
template <typename Scalar>
struct Transform {
  Matrix3<Scalar> rotation = Matrix3<Scalar>::Identity();
  Vector3<Scalar> translation = Vector3<Scalar>::Zero();
  Scalar scale = Scalar(1);

  Vector3<Scalar> operator()(const Vector3<Scalar>& p) const {
    return scale * (rotation * p) + translation;
  }

  template <typename Derived>
  Points3<Scalar> apply(const Eigen::MatrixBase<Derived>& points) const {
    Points3<Scalar> out = scale * (rotation * points);
    out.colwise() += translation;
    return out;
  }
};

/// Corresponded point sets with per-pair weights. Only relative weights matter.
template <typename Scalar>
struct WeightedCorrespondences {
  Points3<Scalar> source;
  Points3<Scalar> target;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> weights;

  static WeightedCorrespondences unit(Points3<Scalar> src, Points3<Scalar> dst) {
    WeightedCorrespondences c{std::move(src), std::move(dst), {}};
    c.weights.setOnes(c.source.cols());
    return c;
  }
};

/// Weighted Umeyama alignment: finds (R, t, s) minimizing
/// sum_i w_i |target_i - (s R source_i + t)|^2 with R a proper rotation.
///
/// The reflection correction D = diag(1, 1, det(U V^T)) is always applied, so the
/// result is in SO(3) even for mirrored or planar targets. With with_scale off the
/// returned scale is exactly 1.
template <typename Scalar>
Transform<Scalar> umeyama_align(const WeightedCorrespondences<Scalar>& corr, bool with_scale) {
  using Vec = Vector3<Scalar>;
  using Mat = Matrix3<Scalar>;
  const Eigen::Index n = corr.source.cols();
  if (corr.target.cols() != n || corr.weights.size() != n) {
    throw InvalidArgument("umeyama_align: source, target and weights differ in length");
  }
  if (n < 3) {
    throw DegenerateInput("umeyama_align: need at least 3 correspondences, got " + std::to_string(n));
  }
  if (!corr.source.allFinite() || !corr.target.allFinite() || !corr.weights.allFinite() ||
      (corr.weights.array() <= Scalar(0)).any()) {
    throw InvalidArgument("umeyama_align: non-finite points or non-positive weights");
  }

  const Scalar total = corr.weights.sum();
  const Vec src_mean = corr.source * corr.weights / total;
  const Vec dst_mean = corr.target * corr.weights / total;
  const Points3<Scalar> src = corr.source.colwise() - src_mean;
  const Points3<Scalar> dst = corr.target.colwise() - dst_mean;

  const Scalar src_var = src.colwise().squaredNorm().dot(corr.weights.transpose()) / total;
  if (!(src_var >= Scalar(kMinSourceVariance))) {
    throw DegenerateInput("umeyama_align: source points are coincident (weighted variance " +
                          std::to_string(double(src_var)) + ")");
  }
  // A collinear source leaves the roll about its line undetermined.
  const Mat scatter = src * corr.weights.asDiagonal() * src.transpose() / total;
  const Vec spread = Eigen::SelfAdjointEigenSolver<Mat>(scatter, Eigen::EigenvaluesOnly).eigenvalues();
  if (!(spread(1) > Scalar(kMinSourceVariance) * spread(2))) {
    throw DegenerateInput("umeyama_align: source points are collinear");
  }
  const Scalar dst_var = dst.colwise().squaredNorm().dot(corr.weights.transpose()) / total;
  if (!(dst_var > Scalar(0))) {
    throw DegenerateInput("umeyama_align: target points are all identical");
  }

  const Mat cov = dst * corr.weights.asDiagonal() * src.transpose() / total;
  const Eigen::JacobiSVD<Mat> svd(cov, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Vec d = Vec::Ones();
  if (svd.matrixU().determinant() * svd.matrixV().determinant() < Scalar(0)) d(2) = Scalar(-1);

  Transform<Scalar> out;
  out.rotation = svd.matrixU() * d.asDiagonal() * svd.matrixV().transpose();
  out.scale = with_scale ? svd.singularValues().dot(d) / src_var : Scalar(1);
  out.translation = dst_mean - out.scale * (out.rotation * src_mean);
  return out;
}

template <typename Scalar>
Transform<Scalar> umeyama_align(const Points3<Scalar>& source, const Points3<Scalar>& target,
                                bool with_scale) {
  return umeyama_align(WeightedCorrespondences<Scalar>::unit(source, target), with_scale);
}

/// Angle of the relative rotation a * b^T, in [0, pi].
///
/// Evaluated as atan2(|vee(A - A^T)| / 2, (tr A - 1) / 2), which equals the clamped
/// arccos of the trace term but keeps full precision near 0 and near pi.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar geodesic_angle(const Eigen::MatrixBase<DerivedA>& a,
                                         const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  require_rotation(a, "geodesic_angle: first argument");
  require_rotation(b, "geodesic_angle: second argument");
  const Matrix3<Scalar> r = a * b.transpose();
  const Scalar cos_part = (r.trace() - Scalar(1)) / Scalar(2);
  const Vector3<Scalar> skew(r(2, 1) - r(1, 2), r(0, 2) - r(2, 0), r(1, 0) - r(0, 1));
  const Scalar sin_part = skew.norm() / Scalar(2);
  return std::atan2(sin_part, cos_part);
}

template <typename Scalar>
Matrix3<Scalar> axis_angle(const Vector3<Scalar>& axis, Scalar angle) {
  return Eigen::AngleAxis<Scalar>(angle, axis.normalized()).toRotationMatrix();
}

/// Haar-uniform rotation from a normalized 4D Gaussian (uniform unit quaternion).
template <typename Scalar = double, typename Urbg>
Matrix3<Scalar> random_rotation(Urbg& rng) {
  std::normal_distribution<Scalar> normal(Scalar(0), Scalar(1));
  for (;;) {
    // Draws are sequenced explicitly; argument evaluation order is unspecified.
    const Scalar w = normal(rng);
    const Scalar x = normal(rng);
    const Scalar y = normal(rng);
    const Scalar z = normal(rng);
    Eigen::Quaternion<Scalar> q(w, x, y, z);
    if (q.norm() < Scalar(1e-8)) continue;
    q.normalize();
    return q.toRotationMatrix();
  }
}

/// Uniform direction on the unit sphere.
template <typename Scalar = double, typename Urbg>
Vector3<Scalar> random_unit_vector(Urbg& rng) {
  std::normal_distribution<Scalar> normal(Scalar(0), Scalar(1));
  for (;;) {
    const Scalar x = normal(rng);
    const Scalar y = normal(rng);
    const Scalar z = normal(rng);
    const Vector3<Scalar> v(x, y, z);
    if (v.norm() > Scalar(1e-8)) return v.normalized();
  }
}

/// Builds a bone frame from a bone direction and a forward hint.
///
/// Column Y is the bone direction (negated when `reversed`), column Z is the
/// forward hint orthogonalized against Y, and column X = Y x Z.
template <typename DerivedB, typename DerivedF>
Matrix3<typename DerivedB::Scalar> frame_from_bone_and_forward(const Eigen::MatrixBase<DerivedB>& bone_dir,
                                                               const Eigen::MatrixBase<DerivedF>& forward_hint,
                                                               bool reversed) {
  using Scalar = typename DerivedB::Scalar;
  const Vector3<Scalar> bone = bone_dir;
  const Vector3<Scalar> fwd = forward_hint;
  const Scalar bone_norm = bone.norm();
  const Scalar fwd_norm = fwd.norm();
  if (!(bone_norm > Scalar(0)) || !(fwd_norm > Scalar(0)) || !bone.allFinite() || !fwd.allFinite()) {
    throw DegenerateFrame("frame_from_bone_and_forward: zero or non-finite input vector");
  }
  const Scalar sin_angle = bone.cross(fwd).norm() / (bone_norm * fwd_norm);
  if (sin_angle <= Scalar(1e-6)) {
    throw DegenerateFrame("frame_from_bone_and_forward: bone direction and forward hint are parallel");
  }

  Vector3<Scalar> y = bone / bone_norm;
  if (reversed) y = -y;
  const Vector3<Scalar> f = fwd / fwd_norm;
  const Vector3<Scalar> z = (f - f.dot(y) * y).normalized();
  Matrix3<Scalar> r;
  r.col(0) = y.cross(z);
  r.col(1) = y;
  r.col(2) = z;
  return r;
}

}  // namespace okp
