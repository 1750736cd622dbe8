#include "roadsurf/types.hpp"

#include <algorithm>

namespace roadsurf {

const char* to_string(Region r) {
  switch (r) {
    case Region::LN: return "LN";
    case Region::RN: return "RN";
    case Region::LF: return "LF";
    case Region::RF: return "RF";
  }
  throw std::logic_error("invalid Region value");
}

Region region_from_string(const std::string& name) {
  for (Region r : kAllRegions)
    if (name == to_string(r)) return r;
  throw std::invalid_argument("unknown region name: " + name);
}

const std::array<std::string, kNumClasses>& class_names() {
  static const std::array<std::string, kNumClasses> names{
      "dry_asphalt", "dry_cement", "dry_gravel", "dry_sand",
      "wet_asphalt", "wet_cement", "wet_gravel", "wet_sand",
      "snow"};
  return names;
}

ClassLabel class_from_string(const std::string& name) {
  const auto& names = class_names();
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end())
    throw std::invalid_argument("unknown class name: " + name);
  return ClassLabel(static_cast<int>(it - names.begin()));
}

}  // namespace roadsurf
