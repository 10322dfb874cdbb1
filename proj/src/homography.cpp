/* Copyright 2026 The patchview Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "patchview/homography.hpp"

#include <Eigen/SVD>

#include <cmath>

#include "patchview/error.hpp"

namespace patchview {

namespace {

constexpr double kMinAbsDet = 1e-12;

Mat3 normalize_matrix(const Mat3& m) {
  const double h33 = m(2, 2);
  if (std::abs(h33) > 1e-14 * m.norm()) return m / h33;
  return m / m.norm();
}

// Similarity taking the centroid to the origin and the mean distance to sqrt(2).
Mat3 hartley_transform(std::span<const Vec2> pts) {
  Vec2 centroid = Vec2::Zero();
  for (const auto& p : pts) centroid += p;
  centroid /= double(pts.size());
  double mean_dist = 0.0;
  for (const auto& p : pts) mean_dist += (p - centroid).norm();
  mean_dist /= double(pts.size());
  if (!(mean_dist > 0.0) || !std::isfinite(mean_dist)) {
    throw Error("degenerate_homography", "correspondence points coincide");
  }
  const double s = std::sqrt(2.0) / mean_dist;
  Mat3 t;
  t << s, 0, -s * centroid.x(), 0, s, -s * centroid.y(), 0, 0, 1;
  return t;
}

bool has_collinear_triple(std::span<const Vec2> p) {
  double scale = 0.0;
  for (const auto& a : p)
    for (const auto& b : p) scale = std::max(scale, (a - b).norm());
  const double eps = 1e-9 * scale * scale;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j)
      for (std::size_t k = j + 1; k < p.size(); ++k) {
        const Vec2 a = p[j] - p[i];
        const Vec2 b = p[k] - p[i];
        if (std::abs(a.x() * b.y() - a.y() * b.x()) <= eps) return true;
      }
  return false;
}

}  // namespace

Homography::Homography(const Mat3& m) {
  if (!m.allFinite()) throw Error("degenerate_homography", "non-finite homography entries");
  m_ = normalize_matrix(m);
  if (!(std::abs(m_.determinant()) > kMinAbsDet)) {
    throw Error("degenerate_homography", "homography is singular");
  }
}

Vec2 Homography::apply(const Vec2& p) const {
  const Eigen::Vector3d q = m_ * Eigen::Vector3d(p.x(), p.y(), 1.0);
  return {q.x() / q.z(), q.y() / q.z()};
}

double Homography::weight(const Vec2& p) const {
  return m_(2, 0) * p.x() + m_(2, 1) * p.y() + m_(2, 2);
}

Homography Homography::inverse() const { return Homography(m_.inverse()); }

Homography Homography::operator*(const Homography& first) const { return Homography(m_ * first.m_); }

Homography estimate_homography(std::span<const Vec2> src, std::span<const Vec2> dst) {
  if (src.size() != dst.size()) {
    throw Error("invalid_argument", "estimate_homography: mismatched correspondence counts");
  }
  const std::size_t n = src.size();
  if (n < 4) throw Error("degenerate_homography", "at least four correspondences are required");
  for (std::size_t i = 0; i < n; ++i) {
    if (!src[i].allFinite() || !dst[i].allFinite()) {
      throw Error("degenerate_homography", "non-finite correspondence");
    }
  }
  if (n == 4 && (has_collinear_triple(src) || has_collinear_triple(dst))) {
    throw Error("degenerate_homography", "three of the four points are collinear");
  }

  const Mat3 ts = hartley_transform(src);
  const Mat3 td = hartley_transform(dst);

  Eigen::Matrix<double, Eigen::Dynamic, 9> a(2 * n, 9);
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::Vector3d s = ts * Eigen::Vector3d(src[i].x(), src[i].y(), 1.0);
    const Eigen::Vector3d d = td * Eigen::Vector3d(dst[i].x(), dst[i].y(), 1.0);
    const double x = s.x() / s.z(), y = s.y() / s.z();
    const double u = d.x() / d.z(), v = d.y() / d.z();
    const auto r = Eigen::Index(2 * i);
    a.row(r) << -x, -y, -1, 0, 0, 0, u * x, u * y, u;
    a.row(r + 1) << 0, 0, 0, -x, -y, -1, v * x, v * y, v;
  }
  // An 8x9 system needs the full V to expose the null vector.
  Eigen::Matrix<double, Eigen::Dynamic, 9> padded = a;
  if (padded.rows() < 9) {
    padded.conservativeResize(9, Eigen::NoChange);
    padded.row(8).setZero();
  }
  Eigen::JacobiSVD<Eigen::Matrix<double, Eigen::Dynamic, 9>> svd(padded, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  // Rank 8 is required for a unique solution.
  if (!(sv(7) > 1e-10 * sv(0))) {
    throw Error("degenerate_homography", "rank-deficient DLT design matrix");
  }
  const Eigen::Matrix<double, 9, 1> h = svd.matrixV().col(8);
  Mat3 hn;
  hn << h(0), h(1), h(2), h(3), h(4), h(5), h(6), h(7), h(8);
  return Homography(td.inverse() * hn * ts);
}

Homography estimate_affine(std::span<const Vec2> src, std::span<const Vec2> dst) {
  if (src.size() != dst.size()) {
    throw Error("invalid_argument", "estimate_affine: mismatched correspondence counts");
  }
  const std::size_t n = src.size();
  if (n < 3) throw Error("degenerate_homography", "at least three correspondences are required");
  for (std::size_t i = 0; i < n; ++i) {
    if (!src[i].allFinite() || !dst[i].allFinite()) {
      throw Error("degenerate_homography", "non-finite correspondence");
    }
  }
  const Mat3 ts = hartley_transform(src);
  const Mat3 td = hartley_transform(dst);
  Eigen::MatrixX3d a(Eigen::Index(n), 3);
  Eigen::MatrixX2d b(Eigen::Index(n), 2);
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::Vector3d s = ts * Eigen::Vector3d(src[i].x(), src[i].y(), 1.0);
    const Eigen::Vector3d d = td * Eigen::Vector3d(dst[i].x(), dst[i].y(), 1.0);
    a.row(Eigen::Index(i)) << s.x(), s.y(), 1.0;
    b.row(Eigen::Index(i)) << d.x(), d.y();
  }
  const Eigen::JacobiSVD<Eigen::MatrixX3d> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (!(sv(2) > 1e-10 * sv(0))) throw Error("degenerate_homography", "collinear affine correspondences");
  const Eigen::Matrix<double, 3, 2> x = svd.solve(b);
  Mat3 an = Mat3::Identity();
  an.topRows<2>() = x.transpose();
  return Homography(td.inverse() * an * ts);
}

double symmetric_transfer_error(const Homography& h, std::span<const Vec2> src,
                                std::span<const Vec2> dst) {
  if (src.empty()) return 0.0;
  const Homography inv = h.inverse();
  double total = 0.0;
  for (std::size_t i = 0; i < src.size(); ++i) {
    total += (h.apply(src[i]) - dst[i]).norm() + (inv.apply(dst[i]) - src[i]).norm();
  }
  return total / double(src.size());
}

}  // namespace patchview
