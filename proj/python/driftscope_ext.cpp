#include "driftscope/analysis.hpp"
#include "driftscope/descriptor.hpp"
#include "driftscope/error.hpp"
#include "driftscope/report.hpp"
#include "driftscope/synth.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace driftscope;

namespace {

AnalysisConfig config_from(const std::string& text)
{
  AnalysisConfig c;
  if (text.empty())
    return c;
  const auto j = nlohmann::json::parse(text);
  c.epsilon = j.value("epsilon", c.epsilon);
  c.theta = j.value("theta", c.theta);
  if (j.contains("grid")) {
    const auto g = j.at("grid").get<std::vector<double>>();
    if (g.size() != 3)
      throw ValidationError("grid must be [lo, hi, step]");
    c.grid_lo = g[0];
    c.grid_hi = g[1];
    c.grid_step = g[2];
  }
  if (j.contains("kernels")) {
    c.kernels.clear();
    for (const auto& k : j.at("kernels"))
      c.kernels.push_back(parse_kernel(k.get<std::string>()));
  }
  if (j.contains("overrides") && !j.at("overrides").is_null())
    c.overrides = j.at("overrides").get<std::vector<std::size_t>>();
  if (j.value("all_data_target", std::string("last")) == "next")
    c.all_data_target = AllDataTarget::NextPeriod;
  return c;
}

DatasetDescriptor descriptor_from(const std::string& name_or_json)
{
  const auto first = name_or_json.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && name_or_json[first] == '{')
    return descriptor_from_json(nlohmann::json::parse(name_or_json));
  return resolve_descriptor(name_or_json);
}

py::tuple sweep(const std::string& descriptor, const std::string& csv_text, const std::string& config)
{
  const auto d = descriptor_from(descriptor);
  const auto c = config_from(config);
  std::istringstream in(csv_text);
  const auto ds = load_dataset(d, in);
  const auto result = run_sweep(ds, d, c);
  const auto summary = summarize(result, c);
  RunManifest m;
  m.descriptor_digest = sha256_hex(to_json(d).dump());
  m.input_digest = sha256_hex(csv_text);
  m.config = to_json(c);
  std::ostringstream curves;
  write_curves_csv(result, curves);
  return py::make_tuple(curves.str(), verdicts_json(result, summary, m).dump());
}

py::tuple synth(const std::string& config, std::optional<std::uint64_t> seed)
{
  auto c = config.empty() ? SynthConfig{} : synth_config_from_json(nlohmann::json::parse(config));
  if (seed)
    c.seed = *seed;
  const auto s = synthesize(c);
  std::ostringstream csv;
  write_dataset_csv(s.dataset, s.descriptor, csv);
  return py::make_tuple(csv.str(), to_json(s.descriptor).dump());
}

Eigen::VectorXd wls(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& w)
{
  if (x.rows() != y.size() || x.rows() != w.size())
    throw std::invalid_argument("X, y and w disagree in length");
  DesignMatrix d;
  d.x = x;
  d.y = y;
  for (Eigen::Index j = 0; j < x.cols(); ++j)
    d.layout.labels.push_back("x" + std::to_string(j));
  return weighted_least_squares(d, WeightVector({w.data(), w.data() + w.size()})).coefficients;
}

} // namespace

PYBIND11_MODULE(_core, m)
{
  m.doc() = "Kernel-weighted regression sweeps for nonstationarity checks";
  m.attr("__version__") = kToolVersion;

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<ComputationError>(m, "ComputationError", PyExc_RuntimeError);

  m.def(
    "kernel_weight",
    [](const std::string& kind, double lag) { return kernel_weight(parse_kernel(kind), lag); },
    py::arg("kernel"), py::arg("lag"));
  m.def(
    "decay_horizon",
    [](const std::string& kind, double b, double theta) { return decay_horizon(parse_kernel(kind), b, theta); },
    py::arg("kernel"), py::arg("bandwidth"), py::arg("theta") = 0.01);
  m.def(
    "min_bandwidth",
    [](const std::string& kind, double max_elapsed, double step, double lo) {
      return min_bandwidth(parse_kernel(kind), max_elapsed, step, lo);
    },
    py::arg("kernel"), py::arg("max_elapsed"), py::arg("step") = 1.0, py::arg("lo") = 1.0);
  m.def(
    "shapiro_wilk",
    [](const std::vector<double>& x) {
      const auto r = shapiro_wilk(x);
      return py::make_tuple(r.w, r.p);
    },
    py::arg("sample"), "Returns (W, p).");
  m.def(
    "relative_error",
    [](const std::vector<double>& pred, const std::vector<double>& actual) {
      return relative_error(pred, actual);
    },
    py::arg("predictions"), py::arg("actuals"));
  m.def("wls", &wls, py::arg("x"), py::arg("y"), py::arg("w"), "Weighted least-squares coefficients.");
  m.def("describe_json", [](const std::string& name) { return to_json(descriptor_from(name)).dump(); },
        py::arg("descriptor"));
  m.def("sweep", &sweep, py::arg("descriptor"), py::arg("csv_text"), py::arg("config") = "",
        "Returns (curves_csv, verdicts_json).");
  m.def("synth", &synth, py::arg("config") = "", py::arg("seed") = py::none(),
        "Returns (csv_text, descriptor_json).");
}
