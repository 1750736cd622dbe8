#pragma once

#include <cstdint>
#include <vector>

#include "roadsurf/types.hpp"

namespace roadsurf {

struct Point {
  double x = 0.0;            // longitudinal, forward positive [m]
  double y = 0.0;            // lateral, left positive [m]
  double z = 0.0;            // height above ground [m]
  double reflectivity = 0.0; // intensity in [0, 255]
};

// All returns of one 10 Hz LiDAR rotation plus the ego speed at that time.
struct PointCloudFrame {
  std::int64_t t_ms = 0;
  double speed = 0.0; // longitudinal ego speed V_x [m/s]
  std::vector<Point> points;
};

// Ground-level box ahead of the vehicle kept for classification.
struct RoiConfig {
  double z_max = 0.1;
  double y_min = -1.75;
  double y_max = 1.75;
  double x_max = 48.7;
  double near_far_split = 12.0; // beta_1, length of the near regions
  double x_min = 3.2;           // nearest detectable ring

  void validate() const;
};

bool in_roi(const Point& p, const RoiConfig& cfg);

// Keeps exactly the ROI-passing points; order, timestamp and speed unchanged.
PointCloudFrame filter_roi(const PointCloudFrame& frame, const RoiConfig& cfg);

// Boundary convention: y >= 0 -> Left, x <= near_far_split -> Near.
// Throws std::invalid_argument for points outside the ROI.
Region assign_region(const Point& p, const RoiConfig& cfg);

// Distance by which the far-region slice of `step_back` frames ago overlaps
// the current near region, clamped to [0, near_far_split].
double overlap_length(int step_back, double speed, double sample_time,
                      double near_far_split = 12.0);

}  // namespace roadsurf
