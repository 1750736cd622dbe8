#include "roadsurf/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace roadsurf {

void RoiConfig::validate() const {
  if (!(x_min < near_far_split && near_far_split < x_max))
    throw std::invalid_argument("RoiConfig: need x_min < near_far_split < x_max");
  if (!(y_min < 0.0 && 0.0 < y_max))
    throw std::invalid_argument("RoiConfig: need y_min < 0 < y_max");
}

bool in_roi(const Point& p, const RoiConfig& cfg) {
  return p.z <= cfg.z_max && p.y >= cfg.y_min && p.y <= cfg.y_max &&
         p.x >= cfg.x_min && p.x <= cfg.x_max;
}

PointCloudFrame filter_roi(const PointCloudFrame& frame, const RoiConfig& cfg) {
  cfg.validate();
  PointCloudFrame out;
  out.t_ms = frame.t_ms;
  out.speed = frame.speed;
  out.points.reserve(frame.points.size());
  std::copy_if(frame.points.begin(), frame.points.end(),
               std::back_inserter(out.points),
               [&](const Point& p) { return in_roi(p, cfg); });
  return out;
}

Region assign_region(const Point& p, const RoiConfig& cfg) {
  if (!in_roi(p, cfg))
    throw std::invalid_argument("assign_region: point outside ROI");
  const bool left = p.y >= 0.0;
  const bool near = p.x <= cfg.near_far_split;
  if (left) return near ? Region::LN : Region::LF;
  return near ? Region::RN : Region::RF;
}

double overlap_length(int step_back, double speed, double sample_time,
                      double near_far_split) {
  if (step_back < 1)
    throw std::invalid_argument("overlap_length: step_back must be >= 1");
  if (sample_time <= 0.0)
    throw std::invalid_argument("overlap_length: sample_time must be > 0");
  if (speed < 0.0)
    throw std::invalid_argument("overlap_length: negative speed");
  const double d = static_cast<double>(step_back) * sample_time * speed;
  return std::clamp(d, 0.0, near_far_split);
}

}  // namespace roadsurf
