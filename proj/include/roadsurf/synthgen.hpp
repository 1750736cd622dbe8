#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "roadsurf/features.hpp"
#include "roadsurf/geometry.hpp"
#include "roadsurf/types.hpp"

namespace roadsurf {

inline constexpr double kMaxSpeed = 13.9; // 50 km/h scenario bound [m/s]

// Truncated-normal feature model for one class in one region. Point counts
// drop with speed by speed_coupling counts per m/s.
struct RegionProfile {
  double refl_mean = 0.0;
  double refl_std = 1.0;
  double count_mean = 0.0;
  double count_std = 1.0;
  double speed_coupling = 0.0;
};

struct ClassProfile {
  std::array<RegionProfile, 4> regions; // indexed by Region
};

using ProfileMap = std::array<ClassProfile, kNumClasses>;

// Synthetic profiles shaped so that wet counts sit below dry counts, wet
// asphalt carries a high-reflectivity mode and snow a low one, with every
// class pair Bhattacharyya-separated by >= 0.5 in at least one region.
ProfileMap default_profiles();

// Bhattacharyya distance between two diagonal 2-D Gaussians in (s_p, s_r).
double bhattacharyya(const RegionProfile& a, const RegionProfile& b);
// min over class pairs of (max over regions of the pairwise distance).
double min_pairwise_separation(const ProfileMap& profiles);

struct ScheduleEntry {
  double t = 0.0; // entry applies from t onward
  ClassLabel label;
};

struct ScenarioSpec {
  double duration_s = 10.0;
  // Piecewise-linear (t, speed) waypoints; speeds in [0, kMaxSpeed].
  std::vector<std::pair<double, double>> speed_profile{{0.0, 8.0}};
  std::vector<ScheduleEntry> left_schedule{{0.0, ClassLabel(0)}};
  std::vector<ScheduleEntry> right_schedule{{0.0, ClassLabel(0)}};
  std::uint64_t seed = 0;

  void validate() const;
  double speed_at(double t) const;
  ClassLabel left_at(double t) const;
  ClassLabel right_at(double t) const;
};

struct LabeledStream {
  std::vector<PointCloudFrame> frames;
  // Ground truth per frame: (left lane class, right lane class).
  std::vector<std::pair<ClassLabel, ClassLabel>> labels;
};

LabeledStream generate_stream(const ScenarioSpec& spec,
                              const ProfileMap& profiles,
                              const RoiConfig& roi = {});

// One LabeledSample per region per warm frame.
Dataset assemble_dataset(const LabeledStream& stream, const RoiConfig& roi = {},
                         int window_steps = kWindowSteps);

struct CorpusConfig {
  int train_streams_per_class = 4;
  int val_streams_per_class = 1;
  int frames_per_stream = 510; // 500 warm samples per stream at l_t = 10
  std::uint64_t seed = 1;
  double val_mean_shift = 0.02; // domain shift applied to validation profiles
  int window_steps = kWindowSteps;
};

struct Corpus {
  Dataset train;
  Dataset val;
  std::vector<LabeledStream> val_streams;
};

// Balanced per-class corpus; validation streams use disjoint seeds and
// +val_mean_shift perturbed profile means.
Corpus generate_corpus(const CorpusConfig& cfg, const ProfileMap& profiles,
                       const RoiConfig& roi = {});

}  // namespace roadsurf
