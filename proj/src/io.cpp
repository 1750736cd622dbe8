#include "roadsurf/io.hpp"

#include <cstring>
#include <fstream>
#include <json.hpp>
#include <sstream>

namespace roadsurf {

using nlohmann::json;

namespace {

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open: " + path.string());
  return is;
}

std::ofstream open_out(const std::filesystem::path& path,
                       std::ios::openmode mode = std::ios::out) {
  std::ofstream os(path, mode);
  if (!os) throw std::runtime_error("cannot open for write: " + path.string());
  return os;
}

}  // namespace

void write_stream_jsonl(const std::vector<PointCloudFrame>& frames,
                        const std::filesystem::path& path) {
  auto os = open_out(path);
  for (const auto& f : frames) {
    json pts = json::array();
    for (const Point& p : f.points)
      pts.push_back({p.x, p.y, p.z, p.reflectivity});
    os << json{{"t_ms", f.t_ms}, {"v_mps", f.speed}, {"pts", std::move(pts)}}
       << "\n";
  }
  if (!os) throw std::runtime_error("write failed: " + path.string());
}

std::vector<PointCloudFrame> read_stream_jsonl(
    const std::filesystem::path& path) {
  auto is = open_in(path);
  std::vector<PointCloudFrame> frames;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const json j = json::parse(line);
    PointCloudFrame f;
    f.t_ms = j.at("t_ms").get<std::int64_t>();
    f.speed = j.at("v_mps").get<double>();
    for (const auto& p : j.at("pts"))
      f.points.push_back(Point{p.at(0).get<double>(), p.at(1).get<double>(),
                               p.at(2).get<double>(), p.at(3).get<double>()});
    if (!frames.empty() && f.t_ms <= frames.back().t_ms)
      throw std::runtime_error("stream timestamps not strictly increasing");
    frames.push_back(std::move(f));
  }
  return frames;
}

void write_labels_jsonl(const LabeledStream& stream,
                        const std::filesystem::path& path) {
  auto os = open_out(path);
  for (std::size_t i = 0; i < stream.frames.size(); ++i)
    os << json{{"t_ms", stream.frames[i].t_ms},
               {"left", stream.labels[i].first.index},
               {"right", stream.labels[i].second.index}}
       << "\n";
}

std::vector<std::pair<ClassLabel, ClassLabel>> read_labels_jsonl(
    const std::filesystem::path& path) {
  auto is = open_in(path);
  std::vector<std::pair<ClassLabel, ClassLabel>> labels;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const json j = json::parse(line);
    labels.emplace_back(ClassLabel(j.at("left").get<int>()),
                        ClassLabel(j.at("right").get<int>()));
  }
  return labels;
}

// ---------------------------------------------------------------------------
// Dataset file "RSDS" v1.

namespace {

constexpr char kDatasetMagic[4] = {'R', 'S', 'D', 'S'};
constexpr std::uint32_t kDatasetVersion = 1;

template <class T>
void put(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& is) {
  T v;
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw std::runtime_error("dataset file truncated");
  return v;
}

}  // namespace

void save_dataset(const Dataset& ds, const std::filesystem::path& path) {
  if (ds.samples.empty()) throw std::invalid_argument("save_dataset: empty");
  auto os = open_out(path, std::ios::binary);
  const auto dim = static_cast<std::uint32_t>(ds.samples.front().x.size());
  os.write(kDatasetMagic, 4);
  put(os, kDatasetVersion);
  put(os, static_cast<std::uint32_t>(kNumClasses));
  put(os, dim);
  put(os, static_cast<std::uint64_t>(ds.samples.size()));
  for (const auto& s : ds.samples) {
    put(os, static_cast<std::uint8_t>(s.region));
    for (Eigen::Index i = 0; i < s.x.size(); ++i)
      put(os, static_cast<float>(s.x(i)));
    for (Eigen::Index i = 0; i < s.target.size(); ++i)
      put(os, static_cast<float>(s.target(i)));
  }
  if (!os) throw std::runtime_error("write failed: " + path.string());
}

Dataset load_dataset(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open: " + path.string());
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kDatasetMagic, 4) != 0)
    throw std::runtime_error("not a dataset file: " + path.string());
  if (get<std::uint32_t>(is) != kDatasetVersion)
    throw std::runtime_error("unsupported dataset version");
  const auto n_c = get<std::uint32_t>(is);
  if (n_c != kNumClasses) throw std::runtime_error("unexpected class count");
  const auto dim = get<std::uint32_t>(is);
  const auto count = get<std::uint64_t>(is);
  Dataset ds;
  ds.samples.reserve(count);
  for (std::uint64_t r = 0; r < count; ++r) {
    LabeledSample s;
    const auto region = get<std::uint8_t>(is);
    if (region > 3) throw std::runtime_error("corrupt dataset record");
    s.region = static_cast<Region>(region);
    s.x.resize(dim);
    for (std::uint32_t i = 0; i < dim; ++i) s.x(i) = get<float>(is);
    s.target.resize(kNumClasses);
    for (std::uint32_t i = 0; i < n_c; ++i) s.target(i) = get<float>(is);
    ds.samples.push_back(std::move(s));
  }
  return ds;
}

// ---------------------------------------------------------------------------
// Profiles and scenario specs.

namespace {

json profile_to_json(const RegionProfile& p) {
  return {{"refl_mean", p.refl_mean},
          {"refl_std", p.refl_std},
          {"count_mean", p.count_mean},
          {"count_std", p.count_std},
          {"speed_coupling", p.speed_coupling}};
}

RegionProfile profile_from_json(const json& j) {
  return RegionProfile{j.at("refl_mean"), j.at("refl_std"), j.at("count_mean"),
                       j.at("count_std"), j.at("speed_coupling")};
}

}  // namespace

void save_profiles(const ProfileMap& profiles,
                   const std::filesystem::path& path) {
  json root;
  for (int c = 0; c < kNumClasses; ++c) {
    json per_region;
    for (Region r : kAllRegions)
      per_region[to_string(r)] = profile_to_json(
          profiles[static_cast<std::size_t>(c)]
              .regions[static_cast<std::size_t>(r)]);
    root[class_names()[static_cast<std::size_t>(c)]] = std::move(per_region);
  }
  open_out(path) << root.dump(2) << "\n";
}

ProfileMap load_profiles(const std::filesystem::path& path) {
  const json root = json::parse(open_in(path));
  ProfileMap map;
  for (int c = 0; c < kNumClasses; ++c) {
    const json& per_region = root.at(class_names()[static_cast<std::size_t>(c)]);
    for (Region r : kAllRegions)
      map[static_cast<std::size_t>(c)].regions[static_cast<std::size_t>(r)] =
          profile_from_json(per_region.at(to_string(r)));
  }
  return map;
}

void save_scenario(const ScenarioSpec& spec,
                   const std::filesystem::path& path) {
  json j;
  j["duration_s"] = spec.duration_s;
  j["seed"] = spec.seed;
  for (const auto& [t, v] : spec.speed_profile)
    j["speed_profile"].push_back({t, v});
  for (const auto& e : spec.left_schedule)
    j["left_schedule"].push_back(
        {{"t", e.t}, {"class", class_names()[static_cast<std::size_t>(e.label.index)]}});
  for (const auto& e : spec.right_schedule)
    j["right_schedule"].push_back(
        {{"t", e.t}, {"class", class_names()[static_cast<std::size_t>(e.label.index)]}});
  open_out(path) << j.dump(2) << "\n";
}

ScenarioSpec load_scenario(const std::filesystem::path& path) {
  const json j = json::parse(open_in(path));
  ScenarioSpec spec;
  spec.duration_s = j.at("duration_s").get<double>();
  if (j.contains("seed")) spec.seed = j.at("seed").get<std::uint64_t>();
  spec.speed_profile.clear();
  for (const auto& wp : j.at("speed_profile"))
    spec.speed_profile.emplace_back(wp.at(0).get<double>(),
                                    wp.at(1).get<double>());
  auto parse_schedule = [&](const char* key) {
    std::vector<ScheduleEntry> entries;
    for (const auto& e : j.at(key))
      entries.push_back(ScheduleEntry{
          e.at("t").get<double>(),
          class_from_string(e.at("class").get<std::string>())});
    return entries;
  };
  spec.left_schedule = parse_schedule("left_schedule");
  spec.right_schedule = parse_schedule("right_schedule");
  spec.validate();
  return spec;
}

std::string to_output_record(const FrameOutput& out) {
  json j;
  j["t_ms"] = out.t_ms;
  j["region"] = to_string(out.region);
  j["p_raw"] = std::vector<double>(out.p_raw.data(),
                                   out.p_raw.data() + out.p_raw.size());
  j["p_final"] = std::vector<double>(out.p_final.data(),
                                     out.p_final.data() + out.p_final.size());
  j["class"] = out.cls;
  j["alpha"] = std::vector<double>(out.alpha.data(),
                                   out.alpha.data() + out.alpha.size());
  return j.dump();
}

}  // namespace roadsurf
