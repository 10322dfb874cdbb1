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

#pragma once

#include <Eigen/Core>

#include <filesystem>
#include <limits>
#include <optional>

#include "patchview/image.hpp"

namespace patchview {

struct GaussianStats {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
  Eigen::Index n = 0;
};

/// Sample mean and covariance (1/(n-1) normalization, symmetrized) of an
/// n x d feature matrix. Throws Error("invalid_argument") for n < 2.
GaussianStats gaussian_stats(const Eigen::MatrixXd& features);

/// ||m_a - m_b||^2 + Tr(C_a + C_b - 2 (C_a C_b)^{1/2}).
///
/// The trace of the square root is taken from the eigenvalues of the
/// symmetric product C_a^{1/2} C_b C_a^{1/2}, which shares them with C_a C_b.
/// Eigenvalues slightly below zero are clipped; the result is clamped at 0.
/// Throws Error("dimension_mismatch") or Error("not_psd") (an input
/// covariance eigenvalue below -1e-6).
double frechet_distance(const GaussianStats& a, const GaussianStats& b);

inline constexpr double kPsnrIdentical = std::numeric_limits<double>::infinity();

/// 10 log10(255^2 / MSE) over all channels; +inf for identical inputs. An
/// optional mask restricts the comparison to pixels where it is nonzero.
template <int C>
double psnr(const Image<C>& a, const Image<C>& b, const Mask* mask = nullptr);

/// Feature matrices: CSV with a header row (one column per dimension), or
/// little-endian float32 preceded by four uint32 words
/// [magic "PVFT", n, d, reserved]. The format is detected from the magic.
Eigen::MatrixXd read_features(const std::filesystem::path& path);
void write_features_csv(const std::filesystem::path& path, const Eigen::MatrixXd& features);
void write_features_binary(const std::filesystem::path& path, const Eigen::MatrixXd& features);

inline constexpr std::uint32_t kFeatureMagic = 0x54465650;  // "PVFT" little-endian

}  // namespace patchview
