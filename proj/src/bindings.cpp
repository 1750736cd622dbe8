#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "roadsurf/eval.hpp"
#include "roadsurf/io.hpp"
#include "roadsurf/pipeline.hpp"
#include "roadsurf/synthgen.hpp"
#include "roadsurf/train.hpp"

namespace py = pybind11;
using namespace roadsurf;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Road surface classification core: LiDAR region features, "
            "per-region classifiers and speed-weighted fusion";

  py::enum_<Region>(m, "Region")
      .value("LN", Region::LN)
      .value("RN", Region::RN)
      .value("LF", Region::LF)
      .value("RF", Region::RF);

  py::class_<ClassLabel>(m, "ClassLabel")
      .def(py::init<int>())
      .def_readonly("index", &ClassLabel::index)
      .def("__repr__", [](const ClassLabel& c) {
        return "ClassLabel(" + class_names()[static_cast<std::size_t>(c.index)] + ")";
      });
  m.def("class_names", [] {
    return std::vector<std::string>(class_names().begin(), class_names().end());
  });

  py::class_<Point>(m, "Point")
      .def(py::init([](double x, double y, double z, double refl) {
             return Point{x, y, z, refl};
           }),
           py::arg("x"), py::arg("y"), py::arg("z"), py::arg("reflectivity"))
      .def_readwrite("x", &Point::x)
      .def_readwrite("y", &Point::y)
      .def_readwrite("z", &Point::z)
      .def_readwrite("reflectivity", &Point::reflectivity);

  py::class_<PointCloudFrame>(m, "PointCloudFrame")
      .def(py::init<>())
      .def_readwrite("t_ms", &PointCloudFrame::t_ms)
      .def_readwrite("speed", &PointCloudFrame::speed)
      .def_readwrite("points", &PointCloudFrame::points);

  py::class_<RoiConfig>(m, "RoiConfig")
      .def(py::init<>())
      .def_readwrite("z_max", &RoiConfig::z_max)
      .def_readwrite("y_min", &RoiConfig::y_min)
      .def_readwrite("y_max", &RoiConfig::y_max)
      .def_readwrite("x_max", &RoiConfig::x_max)
      .def_readwrite("near_far_split", &RoiConfig::near_far_split)
      .def_readwrite("x_min", &RoiConfig::x_min);

  m.def("filter_roi", &filter_roi, py::arg("frame"),
        py::arg("cfg") = RoiConfig{});
  m.def("assign_region", &assign_region, py::arg("point"),
        py::arg("cfg") = RoiConfig{});
  m.def("overlap_length", &overlap_length, py::arg("step_back"),
        py::arg("speed"), py::arg("sample_time"),
        py::arg("near_far_split") = 12.0);
  m.def(
      "aggregate_region",
      [](const PointCloudFrame& f, Region r, const RoiConfig& cfg) {
        const auto feats = aggregate_region(f, r, cfg);
        return std::make_pair(feats.point_count, feats.mean_reflectivity);
      },
      py::arg("frame"), py::arg("region"), py::arg("cfg") = RoiConfig{});
  m.def("one_hot", &one_hot);

  py::class_<FusionConfig>(m, "FusionConfig")
      .def(py::init<>())
      .def_readwrite("stack_steps", &FusionConfig::stack_steps)
      .def_readwrite("sample_time", &FusionConfig::sample_time)
      .def_readwrite("beta1", &FusionConfig::beta1)
      .def_readwrite("literal_normalizer", &FusionConfig::literal_normalizer);

  m.def(
      "omega_weights",
      [](const std::vector<double>& past_speeds, const FusionConfig& cfg) {
        return omega_weights(past_speeds, cfg).alpha;
      },
      py::arg("past_speeds"), py::arg("cfg") = FusionConfig{});
  m.def(
      "fuse",
      [](const Eigen::VectorXd& current,
         const std::vector<Eigen::VectorXd>& past,
         const Eigen::VectorXd& alpha) {
        return fuse(ProbStack{current, past}, OmegaWeights{alpha});
      },
      py::arg("current"), py::arg("past"), py::arg("alpha"));
  m.def("classify",
        [](const Eigen::VectorXd& p) { return classify(p).index; });

  py::class_<NetworkModel>(m, "NetworkModel")
      .def_readonly("layer_dims", &NetworkModel::layer_dims)
      .def_property_readonly(
          "region", [](const NetworkModel& m_) { return m_.region; })
      .def("forward",
           [](const NetworkModel& m_, const Eigen::VectorXd& x) {
             return predict(m_, x);
           },
           py::arg("raw_x"));
  m.def("load_model", &load_model);
  m.def("save_model", &save_model);

  py::class_<ScenarioSpec>(m, "ScenarioSpec")
      .def(py::init<>())
      .def_readwrite("duration_s", &ScenarioSpec::duration_s)
      .def_readwrite("seed", &ScenarioSpec::seed)
      .def_readwrite("speed_profile", &ScenarioSpec::speed_profile);

  py::class_<LabeledStream>(m, "LabeledStream")
      .def_readonly("frames", &LabeledStream::frames)
      .def("label_at", [](const LabeledStream& s, std::size_t i) {
        return std::make_pair(s.labels.at(i).first.index,
                              s.labels.at(i).second.index);
      });

  m.def("default_profiles_separation",
        [] { return min_pairwise_separation(default_profiles()); });
  m.def(
      "generate_stream",
      [](const ScenarioSpec& spec) {
        return generate_stream(spec, default_profiles());
      },
      py::arg("spec"));
}
