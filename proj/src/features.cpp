#include "roadsurf/features.hpp"

#include <algorithm>
#include <cmath>

namespace roadsurf {

RegionFeatures aggregate_region(const PointCloudFrame& frame, Region region,
                                const RoiConfig& cfg) {
  double count = 0.0;
  double refl_sum = 0.0;
  for (const Point& p : frame.points) {
    if (!in_roi(p, cfg)) continue;
    if (assign_region(p, cfg) != region) continue;
    count += 1.0;
    refl_sum += p.reflectivity;
  }
  RegionFeatures f;
  f.point_count = count;
  f.mean_reflectivity = count > 0.0 ? refl_sum / count : 0.0;
  return f;
}

double resample_speed(
    std::span<const std::pair<std::int64_t, double>> speed_samples,
    std::int64_t frame_t_ms) {
  if (speed_samples.empty())
    throw std::invalid_argument("resample_speed: empty speed trace");
  // Zero-order hold: last sample at or before the frame time.
  double held = speed_samples.front().second;
  for (const auto& [t, v] : speed_samples) {
    if (t > frame_t_ms) break;
    held = v;
  }
  return held;
}

FeatureVector stack_window(
    std::span<const std::pair<RegionFeatures, double>> history,
    int window_steps) {
  const int n = window_steps + 1;
  if (static_cast<int>(history.size()) < n) throw NotWarm();
  FeatureVector x(kNumFeatures * n);
  const auto newest = history.size() - 1;
  for (int i = 0; i < n; ++i) { // newest first within each block
    const auto& [feat, speed] = history[newest - i];
    x(i) = feat.point_count;
    x(n + i) = feat.mean_reflectivity;
    x(2 * n + i) = speed;
  }
  return x;
}

Eigen::VectorXd one_hot(ClassLabel label) {
  Eigen::VectorXd t = Eigen::VectorXd::Zero(kNumClasses);
  t(label.index) = 1.0;
  return t;
}

Standardizer Standardizer::fit(const Eigen::MatrixXd& x) {
  Standardizer s;
  s.mean = x.rowwise().mean();
  const Eigen::MatrixXd centered = x.colwise() - s.mean;
  s.stddev = (centered.array().square().rowwise().sum() /
              static_cast<double>(x.cols()))
                 .sqrt();
  return s;
}

Eigen::VectorXd Standardizer::apply(const Eigen::VectorXd& x) const {
  if (x.size() != mean.size())
    throw std::invalid_argument("Standardizer: dimension mismatch");
  Eigen::VectorXd out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i)
    out(i) = stddev(i) > 0.0 ? (x(i) - mean(i)) / stddev(i) : x(i);
  return out;
}

Eigen::MatrixXd Standardizer::apply(const Eigen::MatrixXd& x) const {
  if (x.rows() != mean.size())
    throw std::invalid_argument("Standardizer: dimension mismatch");
  Eigen::MatrixXd out(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    if (stddev(i) > 0.0)
      out.row(i) = (x.row(i).array() - mean(i)) / stddev(i);
    else
      out.row(i) = x.row(i);
  }
  return out;
}

void Dataset::append(const Dataset& other) {
  samples.insert(samples.end(), other.samples.begin(), other.samples.end());
}

int RegionDataset::label_of(Eigen::Index i) const {
  Eigen::Index best = 0;
  t.col(i).maxCoeff(&best);
  return static_cast<int>(best);
}

RegionDataset RegionDataset::without_velocity(int window_steps) const {
  const int n = window_steps + 1;
  RegionDataset out;
  out.x = x.topRows(2 * n);
  out.t = t;
  return out;
}

RegionDataset slice_region(const Dataset& ds, Region region) {
  std::vector<const LabeledSample*> picked;
  for (const auto& s : ds.samples)
    if (s.region == region) picked.push_back(&s);
  RegionDataset out;
  if (picked.empty()) return out;
  out.x.resize(picked.front()->x.size(), picked.size());
  out.t.resize(kNumClasses, picked.size());
  for (std::size_t i = 0; i < picked.size(); ++i) {
    out.x.col(static_cast<Eigen::Index>(i)) = picked[i]->x;
    out.t.col(static_cast<Eigen::Index>(i)) = picked[i]->target;
  }
  return out;
}

}  // namespace roadsurf
