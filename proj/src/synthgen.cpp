#include "roadsurf/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace roadsurf {

namespace {

constexpr double kFrameRateHz = 10.0;

double truncated_normal(std::mt19937_64& rng, double mean, double std,
                        double lo, double hi) {
  std::normal_distribution<double> dist(mean, std);
  for (int tries = 0; tries < 64; ++tries) {
    const double v = dist(rng);
    if (v >= lo && v <= hi) return v;
  }
  return std::clamp(mean, lo, hi);
}

ClassLabel schedule_at(const std::vector<ScheduleEntry>& schedule, double t) {
  ClassLabel label = schedule.front().label;
  for (const auto& e : schedule) {
    if (e.t > t) break;
    label = e.label;
  }
  return label;
}

RegionProfile near_profile(double count, double refl, double coupling) {
  return RegionProfile{refl, 9.0, count, 12.0, coupling};
}

RegionProfile far_from_near(const RegionProfile& near) {
  RegionProfile far = near;
  far.count_mean = near.count_mean * 0.8;
  far.count_std = 16.0;
  far.refl_std = 12.0;
  far.speed_coupling = near.speed_coupling * 0.75;
  return far;
}

}  // namespace

ProfileMap default_profiles() {
  // Near-region (count_mean, refl_mean) anchors. Wet counts sit below dry
  // counts; wet asphalt carries the high-reflectivity mode, snow the low one.
  // Three pairs share the same reflectivity and are separated only by point
  // count, which the speed coupling erodes as the vehicle speeds up.
  struct Anchor {
    double count, refl, coupling;
  };
  const std::array<Anchor, kNumClasses> anchors{{
      {260.0, 100.0, 8.0}, // dry asphalt
      {210.0, 100.0, 8.0}, // dry cement
      {235.0, 70.0, 8.0},  // dry gravel
      {205.0, 172.0, 8.0}, // dry sand
      {150.0, 172.0, 8.0}, // wet asphalt
      {155.0, 130.0, 8.0}, // wet cement
      {125.0, 130.0, 8.0}, // wet gravel
      {140.0, 150.0, 8.0}, // wet sand
      {175.0, 25.0, 8.0},  // snow
  }};
  ProfileMap map;
  for (int c = 0; c < kNumClasses; ++c) {
    const auto& a = anchors[static_cast<std::size_t>(c)];
    const RegionProfile near = near_profile(a.count, a.refl, a.coupling);
    auto& cp = map[static_cast<std::size_t>(c)];
    cp.regions[static_cast<std::size_t>(Region::LN)] = near;
    cp.regions[static_cast<std::size_t>(Region::RN)] = near;
    cp.regions[static_cast<std::size_t>(Region::LF)] = far_from_near(near);
    cp.regions[static_cast<std::size_t>(Region::RF)] = far_from_near(near);
  }
  return map;
}

double bhattacharyya(const RegionProfile& a, const RegionProfile& b) {
  const double vc = 0.5 * (a.count_std * a.count_std + b.count_std * b.count_std);
  const double vr = 0.5 * (a.refl_std * a.refl_std + b.refl_std * b.refl_std);
  const double dc = a.count_mean - b.count_mean;
  const double dr = a.refl_mean - b.refl_mean;
  const double term_mean = (dc * dc / vc + dr * dr / vr) / 8.0;
  const double det_avg = vc * vr;
  const double det_a = a.count_std * a.count_std * a.refl_std * a.refl_std;
  const double det_b = b.count_std * b.count_std * b.refl_std * b.refl_std;
  const double term_cov = 0.5 * std::log(det_avg / std::sqrt(det_a * det_b));
  return term_mean + term_cov;
}

double min_pairwise_separation(const ProfileMap& profiles) {
  double worst = std::numeric_limits<double>::infinity();
  for (int a = 0; a < kNumClasses; ++a) {
    for (int b = a + 1; b < kNumClasses; ++b) {
      double best_region = 0.0;
      for (std::size_t r = 0; r < 4; ++r)
        best_region = std::max(
            best_region,
            bhattacharyya(profiles[static_cast<std::size_t>(a)].regions[r],
                          profiles[static_cast<std::size_t>(b)].regions[r]));
      worst = std::min(worst, best_region);
    }
  }
  return worst;
}

void ScenarioSpec::validate() const {
  if (duration_s <= 0.0)
    throw std::invalid_argument("ScenarioSpec: duration must be positive");
  if (speed_profile.empty() || left_schedule.empty() || right_schedule.empty())
    throw std::invalid_argument("ScenarioSpec: empty profile or schedule");
  if (left_schedule.front().t > 0.0 || right_schedule.front().t > 0.0)
    throw std::invalid_argument("ScenarioSpec: schedule must cover t = 0");
  for (const auto& [t, v] : speed_profile)
    if (v < 0.0 || v > kMaxSpeed)
      throw std::invalid_argument("ScenarioSpec: speed outside [0, 13.9] m/s");
  for (std::size_t i = 1; i < speed_profile.size(); ++i)
    if (speed_profile[i].first <= speed_profile[i - 1].first)
      throw std::invalid_argument("ScenarioSpec: speed waypoints not sorted");
}

double ScenarioSpec::speed_at(double t) const {
  const auto& sp = speed_profile;
  if (t <= sp.front().first) return sp.front().second;
  for (std::size_t i = 1; i < sp.size(); ++i) {
    if (t <= sp[i].first) {
      const double f =
          (t - sp[i - 1].first) / (sp[i].first - sp[i - 1].first);
      return sp[i - 1].second + f * (sp[i].second - sp[i - 1].second);
    }
  }
  return sp.back().second;
}

ClassLabel ScenarioSpec::left_at(double t) const {
  return schedule_at(left_schedule, t);
}
ClassLabel ScenarioSpec::right_at(double t) const {
  return schedule_at(right_schedule, t);
}

LabeledStream generate_stream(const ScenarioSpec& spec,
                              const ProfileMap& profiles,
                              const RoiConfig& roi) {
  spec.validate();
  roi.validate();
  std::mt19937_64 rng(spec.seed);
  const int n_frames =
      static_cast<int>(std::lround(spec.duration_s * kFrameRateHz));

  // Slowly varying per-region count fluctuation (sensor/patch drift). The
  // AR(1) state and the per-frame draw split the profile's count variance
  // (0.8^2 + 0.6^2 = 1) so the marginal per-frame count distribution keeps
  // count_std while consecutive frames stay correlated.
  constexpr double kBiasFrac = 0.8;
  constexpr double kBiasRho = 0.97;
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::array<double, 4> count_bias{};
  for (auto& b : count_bias) b = gauss(rng); // unit scale, stationary start

  LabeledStream stream;
  stream.frames.reserve(static_cast<std::size_t>(n_frames));
  for (int i = 0; i < n_frames; ++i) {
    if (i > 0)
      for (auto& b : count_bias)
        b = kBiasRho * b + std::sqrt(1.0 - kBiasRho * kBiasRho) * gauss(rng);
    const double t = static_cast<double>(i) / kFrameRateHz;
    const double v = spec.speed_at(t);
    const ClassLabel left = spec.left_at(t);
    const ClassLabel right = spec.right_at(t);

    PointCloudFrame frame;
    frame.t_ms = static_cast<std::int64_t>(std::lround(t * 1000.0));
    frame.speed = v;
    for (Region region : kAllRegions) {
      const bool is_left = region == Region::LN || region == Region::LF;
      const bool is_near = region == Region::LN || region == Region::RN;
      const ClassLabel label = is_left ? left : right;
      const RegionProfile& prof =
          profiles[static_cast<std::size_t>(label.index)]
              .regions[static_cast<std::size_t>(region)];
      const double bias = count_bias[static_cast<std::size_t>(region)];
      const double mean =
          std::max(prof.count_mean - prof.speed_coupling * v +
                       kBiasFrac * prof.count_std * bias,
                   0.0);
      const int count = static_cast<int>(std::lround(truncated_normal(
          rng, mean, std::sqrt(1.0 - kBiasFrac * kBiasFrac) * prof.count_std,
          0.0, 4.0 * prof.count_mean + 64.0)));
      const double x_lo = is_near ? roi.x_min : roi.near_far_split;
      const double x_hi = is_near ? roi.near_far_split : roi.x_max;
      const double y_lo = is_left ? 0.0 : roi.y_min;
      const double y_hi = is_left ? roi.y_max : 0.0;
      std::uniform_real_distribution<double> ux(x_lo, x_hi);
      std::uniform_real_distribution<double> uy(y_lo, y_hi);
      std::uniform_real_distribution<double> uz(0.0, roi.z_max);
      for (int p = 0; p < count; ++p) {
        Point pt;
        pt.x = ux(rng);
        pt.y = uy(rng);
        pt.z = uz(rng);
        pt.reflectivity =
            truncated_normal(rng, prof.refl_mean, prof.refl_std, 0.0, 255.0);
        frame.points.push_back(pt);
      }
    }
    stream.frames.push_back(std::move(frame));
    stream.labels.emplace_back(left, right);
  }
  return stream;
}

Dataset assemble_dataset(const LabeledStream& stream, const RoiConfig& roi,
                         int window_steps) {
  Dataset ds;
  std::array<std::vector<std::pair<RegionFeatures, double>>, 4> history;
  for (std::size_t i = 0; i < stream.frames.size(); ++i) {
    const PointCloudFrame filtered = filter_roi(stream.frames[i], roi);
    for (Region region : kAllRegions)
      history[static_cast<std::size_t>(region)].emplace_back(
          aggregate_region(filtered, region, roi), filtered.speed);
    if (static_cast<int>(i) < window_steps) continue;

    const auto& [left, right] = stream.labels[i];
    for (Region region : kAllRegions) {
      const bool is_left = region == Region::LN || region == Region::LF;
      LabeledSample sample;
      sample.region = region;
      sample.x = stack_window(history[static_cast<std::size_t>(region)],
                              window_steps);
      sample.target = one_hot(is_left ? left : right);
      ds.samples.push_back(std::move(sample));
    }
  }
  return ds;
}

namespace {

ScenarioSpec corpus_scenario(int class_index, std::uint64_t stream_seed,
                             double duration_s) {
  ScenarioSpec spec;
  spec.duration_s = duration_s;
  spec.seed = stream_seed;
  spec.left_schedule = {{0.0, ClassLabel(class_index)}};
  spec.right_schedule = {{0.0, ClassLabel(class_index)}};
  // Varied piecewise-linear speed so the count-speed coupling is exercised.
  std::mt19937_64 rng(stream_seed ^ 0xc2b2ae3d27d4eb4fULL);
  std::uniform_real_distribution<double> uv(0.0, kMaxSpeed);
  spec.speed_profile.clear();
  for (double t = 0.0; t <= duration_s + 5.0; t += 5.0)
    spec.speed_profile.emplace_back(t, uv(rng));
  return spec;
}

ProfileMap shifted(const ProfileMap& profiles, double rel_shift) {
  ProfileMap out = profiles;
  for (auto& cp : out) {
    for (auto& rp : cp.regions) {
      rp.count_mean *= 1.0 + rel_shift;
      rp.refl_mean *= 1.0 + rel_shift;
    }
  }
  return out;
}

}  // namespace

Corpus generate_corpus(const CorpusConfig& cfg, const ProfileMap& profiles,
                       const RoiConfig& roi) {
  if (cfg.train_streams_per_class < 1 || cfg.val_streams_per_class < 1)
    throw std::invalid_argument("generate_corpus: need at least one stream");
  const double duration_s = cfg.frames_per_stream / kFrameRateHz;
  const ProfileMap val_profiles = shifted(profiles, cfg.val_mean_shift);

  Corpus corpus;
  for (int c = 0; c < kNumClasses; ++c) {
    for (int s = 0; s < cfg.train_streams_per_class; ++s) {
      const std::uint64_t seed =
          cfg.seed * 0x100000ULL + static_cast<std::uint64_t>(c) * 256 + s;
      const auto stream =
          generate_stream(corpus_scenario(c, seed, duration_s), profiles, roi);
      corpus.train.append(assemble_dataset(stream, roi, cfg.window_steps));
    }
    for (int s = 0; s < cfg.val_streams_per_class; ++s) {
      const std::uint64_t seed = cfg.seed * 0x100000ULL + 0x80000ULL +
                                 static_cast<std::uint64_t>(c) * 256 + s;
      auto stream = generate_stream(corpus_scenario(c, seed, duration_s),
                                    val_profiles, roi);
      corpus.val.append(assemble_dataset(stream, roi, cfg.window_steps));
      corpus.val_streams.push_back(std::move(stream));
    }
  }
  return corpus;
}

}  // namespace roadsurf
