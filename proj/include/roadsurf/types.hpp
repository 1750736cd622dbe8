#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace roadsurf {

inline constexpr int kNumClasses = 9;

// Four subregions of the front-road ROI: Left/Right x Near/Far.
enum class Region : std::uint8_t { LN = 0, RN = 1, LF = 2, RF = 3 };

inline constexpr std::array<Region, 4> kAllRegions{Region::LN, Region::RN,
                                                   Region::LF, Region::RF};

const char* to_string(Region r);
Region region_from_string(const std::string& name);

// Index into the 9 road classes:
//   0..3 dry {asphalt, cement, gravel, sand}
//   4..7 wet {asphalt, cement, gravel, sand}
//   8    snow
struct ClassLabel {
  int index = 0;

  ClassLabel() = default;
  explicit ClassLabel(int i) : index(i) {
    if (i < 0 || i >= kNumClasses)
      throw std::out_of_range("ClassLabel index out of range: " +
                              std::to_string(i));
  }
  bool operator==(const ClassLabel&) const = default;
};

const std::array<std::string, kNumClasses>& class_names();
ClassLabel class_from_string(const std::string& name);

}  // namespace roadsurf
