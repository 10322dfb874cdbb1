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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "patchview/cli.hpp"
#include "patchview/dataset.hpp"
#include "patchview/error.hpp"
#include "patchview/homography.hpp"
#include "patchview/metrics.hpp"
#include "patchview/pipeline.hpp"
#include "patchview/raster.hpp"
#include "patchview/sampling.hpp"
#include "patchview/service.hpp"
#include "patchview/toy.hpp"
#include "patchview/warp.hpp"

using namespace patchview;
namespace fs = std::filesystem;

namespace {

const ImageSize kSize{128, 128};
const fs::path kData = fs::path(PATCHVIEW_DATA_DIR) / "toy_vehicle";

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

template <typename... Args>
std::string fmt(const char* f, Args... args) {
  char buf[1024];
  if constexpr (sizeof...(Args) == 0) {
    return f;
  } else {
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
  }
}

Viewpoint orbit(double az, double el, double r) { return viewpoint_from_spherical(SphericalPose::make(az, el, r)); }

std::array<Vec3, 4> quad_of(const KeypointSet3D& kps, const std::vector<std::string>& names) {
  return {kps.at(names[0]), kps.at(names[1]), kps.at(names[2]), kps.at(names[3])};
}

double triangle_area(const Vec2& a, const Vec2& b, const Vec2& c) {
  return 0.5 * std::abs((b - a).x() * (c - a).y() - (b - a).y() * (c - a).x());
}

// ---------------------------------------------------------------------------

Outcome homography_exactness() {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> u(-1, 1), px(0, 128);
  const auto t0 = Clock::now();
  double worst = 0;
  for (int t = 0; t < 1000; ++t) {
    Mat3 m;
    m << 1 + 0.3 * u(rng), 0.3 * u(rng), 10 * u(rng), 0.3 * u(rng), 1 + 0.3 * u(rng), 10 * u(rng),
        1e-3 * u(rng), 1e-3 * u(rng), 1;
    const Homography truth(m);
    std::vector<Vec2> src;
    for (;;) {
      src.clear();
      for (int i = 0; i < 4; ++i) src.emplace_back(px(rng), px(rng));
      double min_area = 1e300;
      for (int a = 0; a < 4; ++a)
        for (int b = a + 1; b < 4; ++b)
          for (int c = b + 1; c < 4; ++c) min_area = std::min(min_area, triangle_area(src[a], src[b], src[c]));
      if (min_area > 50.0) break;
    }
    std::vector<Vec2> dst;
    for (const auto& p : src) dst.push_back(truth.apply(p));
    const Homography est = estimate_homography(src, dst);
    std::vector<Vec2> probe = src;
    for (int i = 0; i < 16; ++i) probe.emplace_back(px(rng), px(rng));
    for (const auto& p : probe) worst = std::max(worst, (est.apply(p) - truth.apply(p)).norm());
  }
  const double secs = seconds_since(t0);
  return {worst < 1e-8 && secs < 1.0, fmt("1000 trials, max transfer error %.3g px, %.3f s", worst, secs)};
}

Outcome planar_consistency() {
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> u(0, 1);
  const Intrinsics k = Intrinsics::centered(kSize);
  const auto t0 = Clock::now();
  double worst = 0;
  int pairs = 0;
  while (pairs < 200) {
    const Vec3 c(2 * u(rng) - 1, 2 * u(rng) - 1, 2 * u(rng) - 1);
    const Vec3 n = Vec3(2 * u(rng) - 1, 2 * u(rng) - 1, 2 * u(rng) - 1).normalized();
    const Vec3 e1 = n.unitOrthogonal(), e2 = n.cross(e1);
    KeypointSet3D pts;
    for (int i = 0; i < 4; ++i) {
      const double a = (i + 0.3 * u(rng)) * M_PI / 2, r = 0.5 + u(rng);
      pts["q" + std::to_string(i)] = c + r * (std::cos(a) * e1 + std::sin(a) * e2);
    }
    for (int i = 0; i < 20; ++i)
      pts["t" + std::to_string(i)] = c + (3 * u(rng) - 1.5) * e1 + (3 * u(rng) - 1.5) * e2;
    const Viewpoint a = orbit(360 * u(rng), 120 * u(rng) - 60, 10 + 20 * u(rng));
    const Viewpoint b = orbit(360 * u(rng), 120 * u(rng) - 60, 10 + 20 * u(rng));
    // Skip near edge-on planes: the fit is ill-conditioned there by construction.
    const auto grazing = [&](const Viewpoint& v) {
      return std::abs((v.rotation * n).dot(v.apply(c).normalized())) < 0.1;
    };
    if (grazing(a) || grazing(b)) continue;
    const KeypointSet2D pa = project_points(pts, a, k), pb = project_points(pts, b, k);
    std::vector<Vec2> src, dst;
    for (int i = 0; i < 4; ++i) {
      src.push_back(pa.at("q" + std::to_string(i)));
      dst.push_back(pb.at("q" + std::to_string(i)));
    }
    const Homography h = estimate_homography(src, dst);
    for (const auto& [name, p] : pa) worst = std::max(worst, (h.apply(p) - pb.at(name)).norm());
    ++pairs;
  }
  const double secs = seconds_since(t0);
  return {worst < 1e-6 && secs < 5.0, fmt("200 view pairs, max error %.3g px, %.3f s", worst, secs)};
}

Homography about_center(const Vec2& c, double scale, double angle, double px, double py) {
  Mat3 t = Mat3::Identity(), ti = Mat3::Identity(), a = Mat3::Identity();
  t(0, 2) = c.x();
  t(1, 2) = c.y();
  ti(0, 2) = -c.x();
  ti(1, 2) = -c.y();
  a << scale * std::cos(angle), -scale * std::sin(angle), 0, scale * std::sin(angle), scale * std::cos(angle), 0,
      px, py, 1;
  return Homography(t * a * ti);
}

// Pixels at least `margin` pixels inside a convex polygon.
Mask interior(const Polygon& poly, double margin) {
  Mask m(kSize);
  for (int y = 0; y < kSize.height; ++y) {
    for (int x = 0; x < kSize.width; ++x) {
      const Vec2 p(x + 0.5, y + 0.5);
      bool in = contains(poly, p, 0.0);
      for (std::size_t i = 0; in && i < poly.size(); ++i) {
        const Vec2 a = poly[i], e = (poly[(i + 1) % poly.size()] - a).normalized();
        in = std::abs(e.x() * (p - a).y() - e.y() * (p - a).x()) >= margin;
      }
      m.at(x, y, 0) = in ? 255 : 0;
    }
  }
  return m;
}

Outcome warp_round_trip() {
  const RgbImage board = oracle::smooth_checkerboard(kSize, 16.0);
  const Polygon src{{44, 44}, {84, 44}, {84, 84}, {44, 84}};
  const RgbaImage crop = source_crop(board, src);
  const Mask core = interior(src, 2.0);
  std::mt19937_64 rng(303);
  std::uniform_real_distribution<double> s(1.0, 2.0), a(-M_PI, M_PI), p(-6e-4, 6e-4);
  int good = 0;
  double worst = 1e300;
  for (int t = 0; t < 500; ++t) {
    const Homography h = about_center(Vec2(64, 64), s(rng), a(rng), p(rng), p(rng));
    Polygon dst;
    for (const auto& v : src) dst.push_back(h.apply(v));
    dst = convex_hull(dst);
    const RgbaImage there = warp_patch(crop, dst, h, kSize);
    const RgbaImage back = warp_patch(there, src, h.inverse(), kSize);
    const double db = psnr(drop_alpha(back), board, &core);
    good += db >= 30.0;
    worst = std::min(worst, db);
  }
  return {good >= 475, fmt("%d/500 trials >= 30 dB (worst %.2f dB)", good, worst)};
}

Outcome visibility_agreement() {
  const CadModel box = make_box(0, Vec3(1.0, 0.7, 0.5));
  const PatchSpec spec = box_patch_spec();
  const Intrinsics k = Intrinsics::centered(kSize);
  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> u(0, 1);
  int agree = 0, total = 0;
  for (int t = 0; t < 100; ++t) {
    // Area-uniform directions on the sphere.
    const double el = std::asin(2 * u(rng) - 1) * 180 / M_PI;
    const Viewpoint v = orbit(360 * u(rng), el, 20 + 20 * u(rng));
    const auto report = patch_visibility(box.keypoints, spec, rasterize(box.mesh, v, k, kSize), v, k);
    for (const auto& [name, names] : spec.patches) {
      const double f = oracle::ray_cast_visibility(box.mesh, quad_of(box.keypoints, names), v, k, kSize);
      agree += (f >= 0.5) == report.at(name).visible;
      ++total;
    }
  }
  const double rate = double(agree) / total;
  return {rate >= 0.95, fmt("%d/%d decisions agree (%.1f%%)", agree, total, 100 * rate)};
}

// +1 or -1 for a strictly convex quad in the given cyclic order, 0 otherwise.
int quad_orientation(const std::array<Vec2, 4>& q) {
  int sign = 0;
  for (int i = 0; i < 4; ++i) {
    const Vec2 a = q[(i + 1) % 4] - q[i], b = q[(i + 2) % 4] - q[(i + 1) % 4];
    const double c = a.x() * b.y() - a.y() * b.x();
    const int s = c > 0 ? 1 : (c < 0 ? -1 : 0);
    if (s == 0 || (sign != 0 && s != sign)) return 0;
    sign = s;
  }
  return sign;
}

std::array<Vec2, 4> quad2d(const KeypointSet2D& px, const std::vector<std::string>& names) {
  return {px.at(names[0]), px.at(names[1]), px.at(names[2]), px.at(names[3])};
}

Outcome dropout_statistics(const Dataset& ds) {
  const PipelineOptions options;
  SamplerConfig cfg;
  cfg.empirical = ds.empirical_poses();
  const auto& samples = ds.samples;
  const Intrinsics k = Intrinsics::centered(kSize, options.focal);
  const double tau = options.visibility.threshold;
  // Visibility by enumeration over the pose pool, outside the emission path.
  // The rasterized decision is checked against ray casting by the visibility
  // criterion; the ray-cast expectation is reported alongside.
  const auto raster_visible = [&](const CadModel& cad, const std::string& name, const Viewpoint& v) {
    return patch_visibility(cad.keypoints, ds.spec, rasterize(cad.mesh, v, k, kSize), v, k, options.visibility)
        .at(name)
        .visible;
  };
  const auto ray_visible = [&](const CadModel& cad, const std::string& name, const Viewpoint& v) {
    return oracle::ray_cast_visibility(cad.mesh, quad_of(cad.keypoints, ds.spec.patches.at(name)), v, k, kSize) >=
           tau;
  };

  // A patch survives an emission when it is visible at the source and at the
  // drawn pose, and its source and destination quads keep one orientation
  // (otherwise no orientation-preserving warp exists).
  const auto keep_rates = [&](const auto& visible) {
    std::vector<std::map<std::string, double>> keep(samples.size());
#pragma omp parallel for schedule(dynamic)
    for (std::size_t s = 0; s < samples.size(); ++s) {
      const CadModel& cad = ds.catalog.at(samples[s].cad_id);
      const KeypointSet2D src_px = to_pixels(samples[s].keypoints, kSize);
      for (const auto& [name, names] : ds.spec.patches) {
        keep[s][name] = 0.0;
        const int src_sign = quad_orientation(quad2d(src_px, names));
        if (src_sign == 0 || !visible(cad, name, samples[s].viewpoint())) continue;
        int kept = 0;
        for (const auto& pose : cfg.empirical) {
          const Viewpoint v = viewpoint_from_spherical(pose);
          kept += visible(cad, name, v) && quad_orientation(quad2d(project_points(cad.keypoints, v, k), names)) == src_sign;
        }
        keep[s][name] = double(kept) / double(cfg.empirical.size());
      }
    }
    return keep;
  };
  const auto keep = keep_rates(raster_visible);
  const auto keep_ray = keep_rates(ray_visible);

  const int n = 2000;
  std::vector<std::vector<std::string>> dropped(n);
  std::vector<int> emitted(n, 0);
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i) {
    const AnnotatedSample& s = samples[std::size_t(i) % samples.size()];
    try {
      dropped[i] = emit_training_pair(s, ds.catalog.at(s.cad_id), ds.spec, cfg,
                                      derive_seed(2000, s.id + "/" + std::to_string(i)), options)
                       .dropped;
      emitted[i] = 1;
    } catch (const Error&) {
    }
  }

  bool pass = true;
  std::string detail;
  for (const auto& [name, _] : ds.spec.patches) {
    double expect = 0, var = 0, expect_ray = 0;
    int count = 0, total = 0;
    for (int i = 0; i < n; ++i) {
      if (!emitted[i]) continue;
      ++total;
      const std::size_t s = std::size_t(i) % samples.size();
      const double p = 1.0 - keep[s].at(name);
      expect_ray += 1.0 - keep_ray[s].at(name);
      expect += p;
      var += p * (1 - p);
      count += std::count(dropped[i].begin(), dropped[i].end(), name) > 0;
    }
    const double sigma = std::sqrt(var);
    const double z = sigma > 0 ? (count - expect) / sigma : (count == expect ? 0.0 : 1e9);
    pass = pass && std::abs(z) <= 3.0 && total == n;
    detail += fmt("%s %.3f/%.3f z=%+.2f [ray %.3f]; ", name.c_str(), count / double(total), expect / total, z,
                  expect_ray / total);
  }
  return {pass, fmt("2000 emissions, drop rate observed/expected: ") + detail};
}

Outcome sketch_correctness() {
  const CadModel cube = make_box(0, Vec3(0.5, 0.5, 0.5));
  const Intrinsics k = Intrinsics::centered(kSize);
  std::mt19937_64 rng(606);
  std::uniform_real_distribution<double> u(0, 1);
  double worst = 0;
  long checked = 0;
  bool loop_exact = true;
  for (int t = 0; t < 20; ++t) {
    const SphericalPose pose = SphericalPose::make(360 * u(rng), 160 * u(rng) - 80, 20 + 10 * u(rng));
    const Viewpoint v = viewpoint_from_spherical(pose);
    const RgbImage sketch = render_sketch(rasterize(cube.mesh, v, k, kSize));
    const Viewpoint inv = v.inverse();
    for (int y = 0; y < kSize.height; ++y) {
      for (int x = 0; x < kSize.width; ++x) {
        // Skip pixels whose ray lands within a pixel footprint of a cube edge.
        const oracle::Hit hit = oracle::ray_cast(cube.mesh, v, k, x + 0.5, y + 0.5);
        if (hit.face < 0) continue;
        const Vec3 dir((x + 0.5 - k.principal_point.x()) / k.focal, (y + 0.5 - k.principal_point.y()) / k.focal, 1);
        const Vec3 p = inv.apply(dir * hit.depth);
        int axis = 0;
        p.cwiseAbs().maxCoeff(&axis);
        Vec3 sorted = p.cwiseAbs();
        std::sort(sorted.data(), sorted.data() + 3);
        if (sorted[2] - sorted[1] < 0.02) continue;
        Vec3 world_n = Vec3::Zero();
        world_n[axis] = p[axis] > 0 ? 1.0 : -1.0;
        const Vec3 cam_n = v.rotation * world_n;
        const Vec3 viewer_n(cam_n.x(), -cam_n.y(), -cam_n.z());
        for (int c = 0; c < 3; ++c) {
          const double expect = (viewer_n[c] + 1.0) * 0.5 * 255.0;
          worst = std::max(worst, std::abs(sketch.at(x, y, c) - expect) / 255.0);
        }
        ++checked;
      }
    }
    const SphericalPose turned = SphericalPose::make(pose.azimuth_deg + 360.0, pose.elevation_deg, pose.radius);
    const Viewpoint w = viewpoint_from_spherical(turned);
    loop_exact = loop_exact && w.rotation == v.rotation && w.translation == v.translation &&
                 render_sketch(rasterize(cube.mesh, w, k, kSize)) == sketch;
  }
  const bool pass = worst <= 1.0 / 255.0 + 1e-12 && checked > 1000 && loop_exact;
  return {pass, fmt("%ld face pixels, max channel error %.2f/255, +360 loop %s", checked, worst * 255,
                    loop_exact ? "bit-exact" : "differs")};
}

Outcome fid_statistic() {
  std::mt19937_64 rng(707);
  std::normal_distribution<double> g;
  const int d = 16;
  Eigen::MatrixXd a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = g(rng);
  GaussianStats s;
  s.mean = Eigen::VectorXd::NullaryExpr(d, [&] { return g(rng); });
  s.cov = a * a.transpose() / d + 0.1 * Eigen::MatrixXd::Identity(d, d);
  s.n = 1000;

  const double same = frechet_distance(s, s);

  GaussianStats shifted = s;
  const Eigen::VectorXd v = Eigen::VectorXd::NullaryExpr(d, [&] { return g(rng); });
  shifted.mean += v;
  const double shift_err = std::abs(frechet_distance(s, shifted) - v.squaredNorm());

  GaussianStats da, db;
  da.mean = Eigen::VectorXd::Zero(d);
  db.mean = Eigen::VectorXd::Zero(d);
  const Eigen::VectorXd va = Eigen::VectorXd::NullaryExpr(d, [&] { return 0.1 + std::abs(g(rng)); });
  const Eigen::VectorXd vb = Eigen::VectorXd::NullaryExpr(d, [&] { return 0.1 + std::abs(g(rng)); });
  da.cov = va.asDiagonal();
  db.cov = vb.asDiagonal();
  const double closed = (va.cwiseSqrt() - vb.cwiseSqrt()).squaredNorm();
  const double diag_err = std::abs(frechet_distance(da, db) - closed);

  const bool pass = std::abs(same) <= 1e-10 && shift_err <= 1e-9 * std::max(1.0, v.squaredNorm()) && diag_err <= 1e-6;
  return {pass, fmt("identical %.3g, mean shift error %.3g, diagonal error %.3g", same, shift_err, diag_err)};
}

Outcome keypoint_noise(const Dataset& ds) {
  const BaselineBackend backend;
  const std::array<double, 4> sigmas{0.0, 0.01, 0.02, 0.05};
  std::array<double, 4> mean_degraded{};
  double clean_at_002 = 0;
  for (std::size_t si = 0; si < sigmas.size(); ++si) {
    std::vector<int> degraded(200, 0);
#pragma omp parallel for schedule(dynamic)
    for (int j = 0; j < 200; ++j) {
      const AnnotatedSample& s = ds.samples[std::size_t(j) % ds.samples.size()];
      const SphericalPose src = *s.pose();
      const Viewpoint target =
          orbit(src.azimuth_deg + 30.0 * (1 + j % 11), src.elevation_deg, src.radius);
      const KeypointSet2D noisy = perturb_keypoints(s.keypoints, sigmas[si], derive_seed(13, std::to_string(j)));
      const Synthesis out = synthesize_view(s, target, ds.catalog.at(s.cad_id), ds.spec, backend, {}, &noisy);
      for (const auto& [_, p] : out.warped.patches) degraded[j] += p.drop == DropReason::kDegenerate;
    }
    mean_degraded[si] = std::accumulate(degraded.begin(), degraded.end(), 0.0) / 200.0;
    if (sigmas[si] == 0.02) clean_at_002 = std::count(degraded.begin(), degraded.end(), 0) / 200.0;
  }
  const bool monotone = std::is_sorted(mean_degraded.begin(), mean_degraded.end());
  return {clean_at_002 >= 0.90 && monotone,
          fmt("%.1f%% clean at sigma 0.02; mean degraded patches %.3f %.3f %.3f %.3f", 100 * clean_at_002,
              mean_degraded[0], mean_degraded[1], mean_degraded[2], mean_degraded[3])};
}

Outcome performance(const Dataset& ds) {
  const int threads = omp_get_max_threads();
  omp_set_num_threads(1);
  const RenderService service(ds);
  std::mt19937_64 rng(909);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<double> ms;
  for (int i = 0; i < 101; ++i) {
    RenderRequest req{ds.samples[std::size_t(i) % ds.samples.size()].id};
    req.azimuth_deg = 360 * u(rng);
    req.elevation_deg = 40 * u(rng);
    const auto t0 = Clock::now();
    service.render(req);
    ms.push_back(1e3 * seconds_since(t0));
  }
  std::nth_element(ms.begin(), ms.begin() + 50, ms.end());
  const double median = ms[50];

  const fs::path out = fs::temp_directory_path() / "patchview_acceptance_perf";
  int written = 0;
  const auto t0 = Clock::now();
  for (int rep = 0; rep < 4; ++rep) {
    fs::remove_all(out);
    std::ostringstream o, e;
    if (cli_main({"emit-pairs", "--data", kData.string(), "--out", out.string(), "--seed", std::to_string(rep)}, o,
                 e) == 0)
      written += nlohmann::json::parse(std::ifstream(out / "summary.json"))["samples_written"].get<int>();
  }
  const double rate = written / seconds_since(t0);
  fs::remove_all(out);
  omp_set_num_threads(threads);
  return {median <= 10.0 && rate >= 50.0,
          fmt("one thread: median render %.2f ms, emit-pairs %.0f samples/s", median, rate)};
}

std::uint64_t tree_hash(const fs::path& root) {
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file()) files.push_back(fs::relative(e.path(), root));
  std::sort(files.begin(), files.end());
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a
  const auto mix = [&h](const std::string& bytes) {
    for (unsigned char c : bytes) h = (h ^ c) * 1099511628211ull;
    h = (h ^ 0xff) * 1099511628211ull;
  };
  for (const auto& f : files) {
    mix(f.generic_string());
    std::ifstream in(root / f, std::ios::binary);
    mix(std::string(std::istreambuf_iterator<char>(in), {}));
  }
  return h;
}

Outcome determinism() {
  std::array<std::uint64_t, 2> hashes{};
  std::array<int, 2> codes{};
  for (int i = 0; i < 2; ++i) {
    const fs::path out = fs::temp_directory_path() / ("patchview_acceptance_det" + std::to_string(i));
    fs::remove_all(out);
    std::ostringstream o, e;
    codes[i] = cli_main({"emit-pairs", "--data", kData.string(), "--out", out.string(), "--seed", "7"}, o, e);
    hashes[i] = tree_hash(out);
    fs::remove_all(out);
  }
  return {codes[0] == 0 && codes[1] == 0 && hashes[0] == hashes[1],
          fmt("tree hashes %016llx %016llx", (unsigned long long)hashes[0], (unsigned long long)hashes[1])};
}

}  // namespace

int main() {
  const Dataset ds = load_dataset(kData);
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"homography exactness", homography_exactness},
      {"planar projection consistency", planar_consistency},
      {"warp round trip", warp_round_trip},
      {"visibility oracle agreement", visibility_agreement},
      {"dropout statistics", [&] { return dropout_statistics(ds); }},
      {"sketch correctness", sketch_correctness},
      {"fid statistic", fid_statistic},
      {"keypoint noise robustness", [&] { return keypoint_noise(ds); }},
      {"performance", [&] { return performance(ds); }},
      {"determinism", determinism},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}
