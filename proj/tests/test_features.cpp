#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <vector>

#include "roadsurf/features.hpp"

using namespace roadsurf;

namespace {

PointCloudFrame frame_with(std::vector<Point> pts) {
  PointCloudFrame f;
  f.t_ms = 0;
  f.speed = 0.0;
  f.points = std::move(pts);
  return f;
}

}  // namespace

TEST_CASE("aggregate_region: count and mean reflectivity") {
  RoiConfig cfg;
  auto f = frame_with({{5.0, 1.0, 0.0, 10.0},
                       {6.0, 0.5, 0.0, 20.0},
                       {7.0, 1.2, 0.0, 30.0},
                       {6.0, -0.5, 0.0, 99.0},   // RN, must be ignored
                       {20.0, 1.0, 0.0, 99.0}}); // LF, must be ignored
  const auto ln = aggregate_region(f, Region::LN, cfg);
  CHECK(ln.point_count == 3.0);
  CHECK(ln.mean_reflectivity == doctest::Approx(20.0));

  const auto rf = aggregate_region(f, Region::RF, cfg);
  CHECK(rf.point_count == 0.0);
  CHECK(rf.mean_reflectivity == 0.0);
}

TEST_CASE("aggregate_region mean approaches the sampling mean") {
  RoiConfig cfg;
  std::mt19937_64 rng(3);
  std::normal_distribution<double> refl(100.0, 9.0);
  std::uniform_real_distribution<double> ux(3.3, 11.9), uy(0.01, 1.7);
  PointCloudFrame f;
  double acc = 0.0;
  for (int i = 0; i < 4000; ++i) {
    const double r = refl(rng);
    acc += r;
    f.points.push_back({ux(rng), uy(rng), 0.0, r});
  }
  const auto ln = aggregate_region(f, Region::LN, cfg);
  CHECK(ln.point_count == 4000.0);
  CHECK(ln.mean_reflectivity == doctest::Approx(acc / 4000.0).epsilon(1e-12));
  CHECK(ln.mean_reflectivity == doctest::Approx(100.0).epsilon(0.01));
}

TEST_CASE("resample_speed: zero-order hold against a brute-force scan") {
  std::vector<std::pair<std::int64_t, double>> trace = {
      {0, 1.0}, {95, 2.0}, {180, 3.0}, {310, 4.0}};
  CHECK(resample_speed(trace, 100) == 2.0);
  CHECK(resample_speed(trace, 95) == 2.0);  // equal timestamp counts
  CHECK(resample_speed(trace, 94) == 1.0);
  CHECK(resample_speed(trace, 1000) == 4.0);
  // before any sample: earliest value holds
  CHECK(resample_speed(trace, -5) == 1.0);

  // brute-force oracle: latest sample with t <= query
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<std::int64_t> qt(-50, 400);
  for (int trial = 0; trial < 500; ++trial) {
    const std::int64_t q = qt(rng);
    double expect = trace.front().second;
    for (const auto& [t, v] : trace)
      if (t <= q) expect = v;
    CHECK(resample_speed(trace, q) == expect);
  }
}

TEST_CASE("stack_window: layout, ordering, warm-up") {
  // history is oldest..newest; the stacked vector is newest-first per block
  std::vector<std::pair<RegionFeatures, double>> hist = {
      {{4.0, 9.0}, 2.0}, {{4.0, 9.0}, 2.0}, {{4.0, 9.0}, 2.0}};
  const auto v = stack_window(hist, 2);
  REQUIRE(v.size() == 9);
  for (int i = 0; i < 3; ++i) {
    CHECK(v(i) == 4.0);
    CHECK(v(3 + i) == 9.0);
    CHECK(v(6 + i) == 2.0);
  }

  std::vector<std::pair<RegionFeatures, double>> ramp = {
      {{1.0, 10.0}, 0.1}, {{2.0, 20.0}, 0.2}, {{3.0, 30.0}, 0.3}};
  const auto w = stack_window(ramp, 2);
  CHECK(w(0) == 3.0); // newest first
  CHECK(w(1) == 2.0);
  CHECK(w(2) == 1.0);
  CHECK(w(3) == 30.0);
  CHECK(w(5) == 10.0);
  CHECK(w(6) == 0.3);
  CHECK(w(8) == 0.1);

  CHECK_THROWS_AS(stack_window(std::span(ramp.data(), 2), 2), NotWarm);

  // full-size window is 33-dimensional
  std::vector<std::pair<RegionFeatures, double>> full(
      kWindowSteps + 1, {{1.0, 1.0}, 1.0});
  CHECK(stack_window(full, kWindowSteps).size() == 33);
}

TEST_CASE("stack_window shift consistency") {
  // Pushing one frame shifts every block by one slot.
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 100.0);
  std::vector<std::pair<RegionFeatures, double>> hist;
  for (int i = 0; i < kWindowSteps + 2; ++i)
    hist.push_back({{u(rng), u(rng)}, u(rng)});
  const auto prev =
      stack_window(std::span(hist.data(), hist.size() - 1), kWindowSteps);
  const auto next =
      stack_window(std::span(hist.data() + 1, hist.size() - 1), kWindowSteps);
  const int b = kWindowSteps + 1;
  for (int blk = 0; blk < 3; ++blk)
    for (int i = 0; i < b - 1; ++i)
      CHECK(next(blk * b + i + 1) == prev(blk * b + i));
}

TEST_CASE("one_hot") {
  const auto v = one_hot(ClassLabel(4));
  REQUIRE(v.size() == kNumClasses);
  CHECK(v.sum() == 1.0);
  CHECK(v(4) == 1.0);
  CHECK_THROWS_AS(ClassLabel(9), std::out_of_range);
  CHECK_THROWS_AS(ClassLabel(-1), std::out_of_range);
}

TEST_CASE("Standardizer: moments and zero-variance passthrough") {
  std::mt19937_64 rng(23);
  std::normal_distribution<double> g(5.0, 3.0);
  Eigen::MatrixXd x(4, 300);
  for (int j = 0; j < x.cols(); ++j) {
    x(0, j) = g(rng);
    x(1, j) = 10.0 * g(rng) - 40.0;
    x(2, j) = 7.0; // constant dimension
    x(3, j) = g(rng) * g(rng);
  }
  const auto s = Standardizer::fit(x);
  const Eigen::MatrixXd z = s.apply(x);
  for (int d : {0, 1, 3}) {
    CHECK(z.row(d).mean() == doctest::Approx(0.0).epsilon(1e-9));
    const double var =
        (z.row(d).array() - z.row(d).mean()).square().sum() / x.cols();
    CHECK(var == doctest::Approx(1.0).epsilon(1e-6));
  }
  CHECK((z.row(2).array() == 7.0).all()); // untouched

  Eigen::VectorXd bad(3);
  bad.setZero();
  CHECK_THROWS_AS(s.apply(bad), std::invalid_argument);
}

TEST_CASE("RegionDataset: labels, slicing, velocity ablation") {
  Dataset ds;
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    LabeledSample s;
    s.region = (i % 2 == 0) ? Region::LN : Region::RN;
    s.x = Eigen::VectorXd::NullaryExpr(33, [&] { return u(rng); });
    s.target = one_hot(ClassLabel(i % kNumClasses));
    ds.samples.push_back(s);
  }
  const auto ln = slice_region(ds, Region::LN);
  CHECK(ln.size() == 10);
  CHECK(ln.x.rows() == 33);
  CHECK(ln.label_of(0) == 0);
  CHECK(ln.label_of(1) == 2);

  const auto noV = ln.without_velocity();
  CHECK(noV.x.rows() == 22);
  // the retained rows are exactly the first two blocks
  for (int j = 0; j < noV.size(); ++j)
    for (int d = 0; d < 22; ++d) CHECK(noV.x(d, j) == ln.x(d, j));
}
