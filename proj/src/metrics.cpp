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

#include "patchview/metrics.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "patchview/error.hpp"

namespace patchview {

GaussianStats gaussian_stats(const Eigen::MatrixXd& features) {
  const Eigen::Index n = features.rows();
  if (n < 2) throw Error("invalid_argument", "gaussian_stats needs at least two samples");
  GaussianStats s;
  s.n = n;
  s.mean = features.colwise().mean().transpose();
  const Eigen::MatrixXd centered = features.rowwise() - s.mean.transpose();
  s.cov = (centered.transpose() * centered) / double(n - 1);
  s.cov = 0.5 * (s.cov + s.cov.transpose());
  return s;
}

namespace {

constexpr double kNegativeEigenTolerance = 1e-6;

Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& c, const char* which) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (c + c.transpose()));
  if (eig.info() != Eigen::Success) throw Error("numerical_error", "eigendecomposition failed");
  Eigen::VectorXd vals = eig.eigenvalues();
  if (vals.size() > 0 && vals.minCoeff() < -kNegativeEigenTolerance) {
    throw Error("not_psd", std::string(which) + " covariance is not positive semidefinite (eigenvalue " +
                               std::to_string(vals.minCoeff()) + ")");
  }
  vals = vals.cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors() * vals.asDiagonal() * eig.eigenvectors().transpose();
}

}  // namespace

double frechet_distance(const GaussianStats& a, const GaussianStats& b) {
  const Eigen::Index d = a.mean.size();
  if (b.mean.size() != d || a.cov.rows() != d || a.cov.cols() != d || b.cov.rows() != d || b.cov.cols() != d) {
    throw Error("dimension_mismatch", "feature statistics have different dimensions");
  }
  const Eigen::MatrixXd sa = psd_sqrt(a.cov, "first");
  psd_sqrt(b.cov, "second");  // validates PSD

  Eigen::MatrixXd m = sa * b.cov * sa;
  m = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw Error("numerical_error", "eigendecomposition failed");
  const double tr_sqrt = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();

  const double mean_term = (a.mean - b.mean).squaredNorm();
  const double value = mean_term + a.cov.trace() + b.cov.trace() - 2.0 * tr_sqrt;
  return std::max(0.0, value);
}

template <int C>
double psnr(const Image<C>& a, const Image<C>& b, const Mask* mask) {
  if (a.size() != b.size()) throw Error("dimension_mismatch", "psnr: image sizes differ");
  if (mask && mask->size() != a.size()) throw Error("dimension_mismatch", "psnr: mask size differs");
  double sse = 0.0;
  std::size_t count = 0;
  for (int y = 0; y < a.height(); ++y) {
    for (int x = 0; x < a.width(); ++x) {
      if (mask && mask->at(x, y, 0) == 0) continue;
      for (int c = 0; c < C; ++c) {
        const double diff = double(a.at(x, y, c)) - double(b.at(x, y, c));
        sse += diff * diff;
      }
      count += C;
    }
  }
  if (count == 0) throw Error("invalid_argument", "psnr: empty comparison region");
  if (sse == 0.0) return kPsnrIdentical;
  const double mse = sse / double(count);
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

template double psnr<1>(const Image<1>&, const Image<1>&, const Mask*);
template double psnr<3>(const Image<3>&, const Image<3>&, const Mask*);
template double psnr<4>(const Image<4>&, const Image<4>&, const Mask*);

Eigen::MatrixXd read_features(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("missing_file", "cannot open feature file " + path.string());
  std::uint32_t header[4] = {0, 0, 0, 0};
  f.read(reinterpret_cast<char*>(header), sizeof(header));
  if (f.gcount() == sizeof(header) && header[0] == kFeatureMagic) {
    const std::uint32_t n = header[1], d = header[2];
    std::vector<float> raw(std::size_t(n) * d);
    f.read(reinterpret_cast<char*>(raw.data()), std::streamsize(raw.size() * sizeof(float)));
    if (std::size_t(f.gcount()) != raw.size() * sizeof(float)) {
      throw Error("invalid_features", path.string() + ": truncated float32 payload");
    }
    Eigen::MatrixXd m(n, d);
    for (std::uint32_t i = 0; i < n; ++i)
      for (std::uint32_t j = 0; j < d; ++j) m(i, j) = raw[std::size_t(i) * d + j];
    return m;
  }

  f.clear();
  f.seekg(0);
  std::string line;
  if (!std::getline(f, line)) throw Error("invalid_features", path.string() + ": empty file");
  const auto columns = std::count(line.begin(), line.end(), ',') + 1;
  std::vector<std::vector<double>> rows;
  int line_no = 1;
  while (std::getline(f, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    std::vector<double> row;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw Error("invalid_features", path.string() + ":" + std::to_string(line_no) + ": bad value '" + cell + "'");
      }
    }
    if (Eigen::Index(row.size()) != columns) {
      throw Error("invalid_features", path.string() + ":" + std::to_string(line_no) + ": expected " +
                                          std::to_string(columns) + " columns");
    }
    rows.push_back(std::move(row));
  }
  Eigen::MatrixXd m(Eigen::Index(rows.size()), columns);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (Eigen::Index j = 0; j < columns; ++j) m(Eigen::Index(i), j) = rows[i][std::size_t(j)];
  return m;
}

void write_features_csv(const std::filesystem::path& path, const Eigen::MatrixXd& features) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw Error("io_error", "cannot write " + path.string());
  for (Eigen::Index j = 0; j < features.cols(); ++j) f << (j ? "," : "") << "d" << j;
  f << '\n';
  f.precision(17);
  for (Eigen::Index i = 0; i < features.rows(); ++i) {
    for (Eigen::Index j = 0; j < features.cols(); ++j) f << (j ? "," : "") << features(i, j);
    f << '\n';
  }
}

void write_features_binary(const std::filesystem::path& path, const Eigen::MatrixXd& features) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("io_error", "cannot write " + path.string());
  const std::uint32_t header[4] = {kFeatureMagic, std::uint32_t(features.rows()), std::uint32_t(features.cols()), 0};
  f.write(reinterpret_cast<const char*>(header), sizeof(header));
  for (Eigen::Index i = 0; i < features.rows(); ++i) {
    for (Eigen::Index j = 0; j < features.cols(); ++j) {
      const float v = float(features(i, j));
      f.write(reinterpret_cast<const char*>(&v), sizeof(v));
    }
  }
}

}  // namespace patchview
