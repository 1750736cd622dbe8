#pragma once

#include <Eigen/Dense>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "roadsurf/geometry.hpp"
#include "roadsurf/types.hpp"

namespace roadsurf {

inline constexpr int kWindowSteps = 10; // l_t
inline constexpr int kNumFeatures = 3;  // s_p, s_r, V_x

// Per-region aggregates for one frame. An empty region yields (0, 0).
struct RegionFeatures {
  double point_count = 0.0;      // s_p
  double mean_reflectivity = 0.0; // s_r
};

using FeatureVector = Eigen::VectorXd;

// Thrown while the history buffer is still shorter than l_t + 1 frames.
struct NotWarm : std::runtime_error {
  NotWarm() : std::runtime_error("feature window not warm yet") {}
};

RegionFeatures aggregate_region(const PointCloudFrame& frame, Region region,
                                const RoiConfig& cfg);

// Zero-order hold of an irregular speed trace at a frame timestamp.
double resample_speed(
    std::span<const std::pair<std::int64_t, double>> speed_samples,
    std::int64_t frame_t_ms);

// Stacks the last window_steps+1 entries (newest last in `history`) into the
// block layout [s_p block | s_r block | V_x block], newest first per block.
FeatureVector stack_window(
    std::span<const std::pair<RegionFeatures, double>> history,
    int window_steps);

Eigen::VectorXd one_hot(ClassLabel label);

// Per-dimension mean/stddev. Dimensions with zero variance pass through
// unchanged when applied.
struct Standardizer {
  Eigen::VectorXd mean;
  Eigen::VectorXd stddev;

  static Standardizer fit(const Eigen::MatrixXd& columns_are_samples);
  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd apply(const Eigen::MatrixXd& columns_are_samples) const;
};

struct LabeledSample {
  Region region = Region::LN;
  FeatureVector x;
  Eigen::VectorXd target; // one-hot, length kNumClasses
};

struct Dataset {
  std::vector<LabeledSample> samples;

  std::size_t size() const { return samples.size(); }
  void append(const Dataset& other);
};

// Dense per-region view used by training and evaluation; columns are samples.
struct RegionDataset {
  Eigen::MatrixXd x; // dim x n
  Eigen::MatrixXd t; // kNumClasses x n

  Eigen::Index size() const { return x.cols(); }
  int label_of(Eigen::Index i) const;
  // Drops the trailing V_x block (dim 33 -> 22) for the velocity ablation.
  RegionDataset without_velocity(int window_steps = kWindowSteps) const;
};

RegionDataset slice_region(const Dataset& ds, Region region);

}  // namespace roadsurf
