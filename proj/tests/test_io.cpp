#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "roadsurf/io.hpp"
#include "roadsurf/synthgen.hpp"

using namespace roadsurf;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / "roadsurf_test_io") {
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

LabeledStream sample_stream() {
  ScenarioSpec spec;
  spec.duration_s = 2.0;
  spec.speed_profile = {{0.0, 5.0}, {2.0, 9.0}};
  spec.left_schedule = {{0.0, ClassLabel(1)}};
  spec.right_schedule = {{0.0, ClassLabel(6)}};
  spec.seed = 71;
  return generate_stream(spec, default_profiles());
}

}  // namespace

TEST_CASE("stream JSONL round trip") {
  TempDir tmp;
  const auto s = sample_stream();
  const auto p = tmp.path / "stream.jsonl";
  write_stream_jsonl(s.frames, p);
  const auto back = read_stream_jsonl(p);
  REQUIRE(back.size() == s.frames.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].t_ms == s.frames[i].t_ms);
    CHECK(back[i].speed == doctest::Approx(s.frames[i].speed).epsilon(1e-12));
    REQUIRE(back[i].points.size() == s.frames[i].points.size());
    for (std::size_t j = 0; j < back[i].points.size(); ++j) {
      CHECK(back[i].points[j].x ==
            doctest::Approx(s.frames[i].points[j].x).epsilon(1e-12));
      CHECK(back[i].points[j].reflectivity ==
            doctest::Approx(s.frames[i].points[j].reflectivity)
                .epsilon(1e-12));
    }
  }
}

TEST_CASE("stream reader rejects malformed input") {
  TempDir tmp;
  const auto p = tmp.path / "bad.jsonl";
  {
    std::ofstream out(p);
    out << R"({"t_ms":100,"v_mps":1.0,"pts":[[5,0,0,10]]})" << "\n";
    out << R"({"t_ms":50,"v_mps":1.0,"pts":[[5,0,0,10]]})" << "\n";
  }
  CHECK_THROWS(read_stream_jsonl(p)); // non-monotone timestamps
  {
    std::ofstream out(p);
    out << "not json at all\n";
  }
  CHECK_THROWS(read_stream_jsonl(p));
  {
    std::ofstream out(p);
    out << R"({"t_ms":100,"v_mps":1.0,"pts":[[5,0,0]]})" << "\n"; // 3 coords
  }
  CHECK_THROWS(read_stream_jsonl(p));
  CHECK_THROWS(read_stream_jsonl(tmp.path / "missing.jsonl"));
}

TEST_CASE("labels JSONL round trip") {
  TempDir tmp;
  const auto s = sample_stream();
  const auto p = tmp.path / "labels.jsonl";
  write_labels_jsonl(s, p);
  const auto back = read_labels_jsonl(p);
  REQUIRE(back.size() == s.labels.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].first.index == s.labels[i].first.index);
    CHECK(back[i].second.index == s.labels[i].second.index);
  }
}

TEST_CASE("dataset binary round trip") {
  TempDir tmp;
  const auto ds = assemble_dataset(sample_stream());
  REQUIRE(ds.size() > 0);
  const auto p = tmp.path / "d.rsds";
  save_dataset(ds, p);
  const auto back = load_dataset(p);
  REQUIRE(back.size() == ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    CHECK(back.samples[i].region == ds.samples[i].region);
    REQUIRE(back.samples[i].x.size() == ds.samples[i].x.size());
    for (Eigen::Index d = 0; d < ds.samples[i].x.size(); ++d)
      CHECK(back.samples[i].x(d) ==
            static_cast<double>(static_cast<float>(ds.samples[i].x(d))));
    CHECK((back.samples[i].target - ds.samples[i].target)
              .cwiseAbs()
              .maxCoeff() == 0.0);
  }

  // truncated file
  {
    std::ifstream in(p, std::ios::binary);
    std::vector<char> bytes((std::istreambuf_iterator<char>(in)),
                            std::istreambuf_iterator<char>());
    std::ofstream out(tmp.path / "trunc.rsds", std::ios::binary);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size() - 7));
  }
  CHECK_THROWS(load_dataset(tmp.path / "trunc.rsds"));
  {
    std::ofstream out(tmp.path / "bad.rsds", std::ios::binary);
    out << "XXXX" << std::string(32, '\0');
  }
  CHECK_THROWS(load_dataset(tmp.path / "bad.rsds"));
}

TEST_CASE("profiles JSON round trip") {
  TempDir tmp;
  const auto profiles = default_profiles();
  const auto p = tmp.path / "profiles.json";
  save_profiles(profiles, p);
  const auto back = load_profiles(p);
  for (int c = 0; c < kNumClasses; ++c)
    for (int r = 0; r < 4; ++r) {
      const auto& a = profiles[c].regions[r];
      const auto& b = back[c].regions[r];
      CHECK(b.refl_mean == doctest::Approx(a.refl_mean).epsilon(1e-12));
      CHECK(b.refl_std == doctest::Approx(a.refl_std).epsilon(1e-12));
      CHECK(b.count_mean == doctest::Approx(a.count_mean).epsilon(1e-12));
      CHECK(b.count_std == doctest::Approx(a.count_std).epsilon(1e-12));
      CHECK(b.speed_coupling ==
            doctest::Approx(a.speed_coupling).epsilon(1e-12));
    }
}

TEST_CASE("scenario JSON round trip and validation on load") {
  TempDir tmp;
  ScenarioSpec spec;
  spec.duration_s = 12.0;
  spec.speed_profile = {{0.0, 0.0}, {6.0, 12.0}, {12.0, 4.0}};
  spec.left_schedule = {{0.0, ClassLabel(0)}, {6.0, ClassLabel(8)}};
  spec.right_schedule = {{0.0, ClassLabel(4)}};
  spec.seed = 2024;
  const auto p = tmp.path / "scenario.json";
  save_scenario(spec, p);
  const auto back = load_scenario(p);
  CHECK(back.duration_s == spec.duration_s);
  CHECK(back.seed == spec.seed);
  REQUIRE(back.speed_profile.size() == spec.speed_profile.size());
  CHECK(back.speed_profile[1].second == doctest::Approx(12.0));
  CHECK(back.left_schedule[1].label.index == 8);
  CHECK(back.right_schedule[0].label.index == 4);

  // invalid speed must be rejected at load time
  ScenarioSpec bad = spec;
  bad.speed_profile = {{0.0, 99.0}};
  const auto pb = tmp.path / "bad.json";
  save_scenario(bad, pb);
  CHECK_THROWS(load_scenario(pb));
}

TEST_CASE("output record schema") {
  FrameOutput out;
  out.t_ms = 1234;
  out.region = Region::RN;
  out.p_raw = Eigen::VectorXd::Constant(kNumClasses, 1.0 / kNumClasses);
  out.p_final = one_hot(ClassLabel(5));
  out.cls = 5;
  out.alpha = Eigen::VectorXd::Constant(6, 1.0 / 6.0);
  const std::string rec = to_output_record(out);
  CHECK(rec.find("\"t_ms\":1234") != std::string::npos);
  CHECK(rec.find("\"region\":\"RN\"") != std::string::npos);
  CHECK(rec.find("\"class\":5") != std::string::npos);
  CHECK(rec.find("\"p_raw\"") != std::string::npos);
  CHECK(rec.find("\"p_final\"") != std::string::npos);
  CHECK(rec.find("\"alpha\"") != std::string::npos);
  CHECK(rec.find('\n') == std::string::npos); // single line
}
