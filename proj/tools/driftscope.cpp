#include "driftscope/analysis.hpp"
#include "driftscope/cocomo.hpp"
#include "driftscope/descriptor.hpp"
#include "driftscope/error.hpp"
#include "driftscope/report.hpp"
#include "driftscope/synth.hpp"

#if __has_include(<CLI11.hpp>)
#include <CLI11.hpp>
#else
#include <CLI/CLI.hpp>
#endif

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace driftscope;

namespace {

std::string slurp(const fs::path& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw ValidationError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split_list(const std::string& text, char sep)
{
  std::vector<std::string> out;
  std::string item;
  std::istringstream ss(text);
  while (std::getline(ss, item, sep)) {
    if (!item.empty())
      out.push_back(item);
  }
  return out;
}

double parse_number(const std::string& s, const std::string& what)
{
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used == s.size())
      return v;
  } catch (const std::exception&) {
  }
  throw ValidationError("bad " + what + " '" + s + "'");
}

void apply_grid(AnalysisConfig& c, const std::string& text)
{
  const auto parts = split_list(text, ':');
  if (parts.size() != 2 && parts.size() != 3)
    throw ValidationError("--grid expects lo:hi[:step], got '" + text + "'");
  c.grid_lo = parse_number(parts[0], "grid bound");
  c.grid_hi = parse_number(parts[1], "grid bound");
  c.grid_step = parts.size() == 3 ? parse_number(parts[2], "grid step") : 1.0;
}

void apply_kernels(AnalysisConfig& c, const std::string& list)
{
  c.kernels.clear();
  for (const auto& k : split_list(list, ','))
    c.kernels.push_back(parse_kernel(k));
}

std::vector<std::size_t> parse_overrides(const std::string& list)
{
  std::vector<std::size_t> out;
  for (const auto& s : split_list(list, ',')) {
    const double v = parse_number(s, "override");
    if (v < 1 || v != static_cast<double>(static_cast<std::size_t>(v)))
      throw ValidationError("override sizes must be positive integers, got '" + s + "'");
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

AnalysisConfig config_from_file(const fs::path& path)
{
  AnalysisConfig c;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(slurp(path));
    c.epsilon = j.value("epsilon", c.epsilon);
    c.theta = j.value("theta", c.theta);
    c.normality_alpha = j.value("normality_alpha", c.normality_alpha);
    if (j.contains("grid")) {
      const auto& g = j.at("grid");
      c.grid_lo = g.value("lo", c.grid_lo);
      c.grid_hi = g.value("hi", c.grid_hi);
      c.grid_step = g.value("step", c.grid_step);
    }
    if (j.contains("kernels")) {
      c.kernels.clear();
      for (const auto& k : j.at("kernels"))
        c.kernels.push_back(parse_kernel(k.get<std::string>()));
    }
    if (j.contains("all_data_target"))
      c.all_data_target = j.at("all_data_target").get<std::string>() == "next"
                            ? AllDataTarget::NextPeriod
                            : AllDataTarget::LastPeriod;
    if (j.contains("overrides"))
      c.overrides = j.at("overrides").get<std::vector<std::size_t>>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("malformed config '" + path.string() + "': " + e.what());
  }
  return c;
}

void print_formula(const DatasetDescriptor& d)
{
  std::cout << "formula:     " << d.formula.to_string() << '\n';
  for (const auto& t : d.formula.terms) {
    std::cout << "  " << t.column << ": " << (t.kind == TermKind::Numeric ? "numeric" : "categorical")
              << ", transform " << to_string(t.transform);
    if (t.kind == TermKind::Categorical) {
      std::cout << ", reference " << (t.reference.empty() ? "(first level)" : t.reference);
      if (!t.levels.empty()) {
        std::cout << ", levels";
        for (const auto& l : t.levels)
          std::cout << ' ' << l;
      }
    }
    std::cout << '\n';
  }
}

int cmd_describe(const std::string& name)
{
  const auto d = resolve_descriptor(name);
  std::cout << "dataset:     " << d.name << '\n'
            << "granularity: " << to_string(d.granularity) << '\n'
            << "chronology:  " << to_string(d.chronology) << '\n';
  if (d.expected_rows)
    std::cout << "rows:        " << *d.expected_rows << " expected after filters\n";
  std::cout << "columns:\n";
  auto bind = [](const char* role, const std::string& col) {
    if (!col.empty())
      std::cout << "  " << role << " <- " << col << '\n';
  };
  bind("id", d.columns.id);
  bind("completion", d.columns.completion);
  bind("start", d.columns.start);
  if (!d.columns.duration.empty())
    std::cout << "  duration <- " << d.columns.duration << " ("
              << to_string(d.columns.duration_unit) << ")\n";
  for (const auto& [attr, col] : d.columns.attributes)
    std::cout << "  " << attr << " <- " << col << '\n';
  for (const auto& f : d.filters) {
    std::cout << "filter:      " << f.column
              << (f.op == FilterOp::Equals      ? " == " + f.value
                  : f.op == FilterOp::NotEquals ? " != " + f.value
                                                : " not missing")
              << '\n';
  }
  for (const auto& x : d.derived) {
    std::cout << "derived:     " << x.name << " = " << x.op << '(';
    for (std::size_t i = 0; i < x.columns.size(); ++i)
      std::cout << (i ? "," : "") << x.columns[i];
    std::cout << ")\n";
  }
  print_formula(d);
  std::cout << "well-formed minimum training size: " << well_formed_min(d.formula) << '\n';
  if (!d.overrides.empty()) {
    std::cout << "training-size overrides:";
    for (auto s : d.overrides)
      std::cout << ' ' << s;
    std::cout << '\n';
  }
  std::cout << "bandwidth grid: lo..100 step 1 per kernel; gaussian and uniform start at 1,\n"
               "  epanechnikov and triangular start at the first value above the largest\n"
               "  elapsed period of any split\n";

  bool cocomo = false;
  for (const auto& x : d.derived)
    cocomo = cocomo || x.op == "cocomo81_eaf";
  for (const auto& t : d.formula.terms)
    cocomo = cocomo || t.column == "mode";
  if (cocomo) {
    std::cout << "COCOMO81 modes (effort = a * KLOC^b * EAF person-months, "
              << cocomo::kHoursPerPersonMonth << " h each):\n";
    for (auto m : {cocomo::Mode::Organic, cocomo::Mode::SemiDetached, cocomo::Mode::Embedded}) {
      const auto c = cocomo::constants(m);
      std::cout << "  " << cocomo::to_string(m) << ": a = " << c.a << ", b = " << c.b << '\n';
    }
  }
  return 0;
}

int cmd_validate(const std::string& descriptor, const std::string& data, const std::string& out)
{
  const auto d = resolve_descriptor(descriptor);
  const auto ds = load_dataset_file(d, data);
  const auto formula = resolve_levels(d.formula, ds);
  PlanOptions opts;
  opts.overrides = d.overrides;
  const auto plan = build_split_plan(ds, d.chronology, formula, opts);

  std::cout << ds.name() << ": " << ds.records().size() << " records, " << plan.splits.size()
            << " splits (" << plan.test_bearing() << " with test sets)\n";
  std::ostringstream table;
  write_split_plan(plan, ds, table);
  if (out.empty()) {
    std::cout << table.str();
  } else {
    fs::create_directories(out);
    write_file_atomic(fs::path(out) / "splits.csv", table.str());
  }
  return 0;
}

struct SweepArgs
{
  std::string descriptor;
  std::string data;
  std::string out = "out";
  std::string kernels;
  std::string grid;
  std::string overrides;
  std::string config;
  std::string all_data_target;
  std::optional<double> epsilon;
  std::optional<double> theta;
  bool svg = false;
};

int cmd_sweep(const SweepArgs& a)
{
  AnalysisConfig c = a.config.empty() ? AnalysisConfig{} : config_from_file(a.config);
  if (!a.kernels.empty())
    apply_kernels(c, a.kernels);
  if (!a.grid.empty())
    apply_grid(c, a.grid);
  if (a.epsilon)
    c.epsilon = *a.epsilon;
  if (a.theta)
    c.theta = *a.theta;
  if (!a.overrides.empty())
    c.overrides = parse_overrides(a.overrides);
  if (!a.all_data_target.empty())
    c.all_data_target = a.all_data_target == "next" ? AllDataTarget::NextPeriod : AllDataTarget::LastPeriod;
  c.validate();

  const auto d = resolve_descriptor(a.descriptor);
  const auto bytes = slurp(a.data);
  std::istringstream in(bytes);
  const auto ds = load_dataset(d, in);

  const auto sweep = run_sweep(ds, d, c);
  const auto summary = summarize(sweep, c);

  RunManifest m;
  m.descriptor_digest = sha256_hex(to_json(d).dump());
  m.input_digest = sha256_hex(bytes);
  m.config = to_json(c);
  m.timestamp = utc_timestamp();

  const fs::path out(a.out);
  fs::create_directories(out);
  std::ostringstream curves;
  write_curves_csv(sweep, curves);
  write_file_atomic(out / "curves.csv", curves.str());
  write_file_atomic(out / "verdicts.json", verdicts_json(sweep, summary, m).dump(2) + "\n");
  write_file_atomic(out / "manifest.json", m.to_json().dump(2) + "\n");

  if (a.svg) {
    const auto rows = curve_rows(sweep);
    for (const auto& s : sweep.splits) {
      for (const auto& [k, g] : sweep.grids) {
        write_file_atomic(out / ("split" + std::to_string(s.ordinal) + "_" + to_string(k) + ".svg"),
                          render_svg(rows, s.ordinal, k));
      }
    }
  }

  std::cout << sweep.dataset << ": " << sweep.splits.size() << " splits, " << sweep.cells.size()
            << " cells, overall " << to_string(summary.overall) << '\n';
  for (const auto& v : summary.verdicts) {
    std::cout << "  split " << v.split << ' ' << to_string(v.kernel) << ": "
              << to_string(v.classification);
    if (v.convergence)
      std::cout << " (b* " << v.convergence->bandwidth << ", horizon " << v.horizon.value_or(0)
                << ", span " << v.train_span << ')';
    std::cout << '\n';
  }
  return 0;
}

int cmd_plot(const std::string& curves, int split, const std::string& kernel, const std::string& out)
{
  std::ifstream in(curves, std::ios::binary);
  if (!in)
    throw ValidationError("cannot open '" + curves + "'");
  const auto rows = read_curves_csv(in);
  const auto kind = parse_kernel(kernel);
  const auto svg = render_svg(rows, split, kind);
  fs::path target(out);
  if (target.empty() || fs::is_directory(target)) {
    target /= "split" + std::to_string(split) + "_" + to_string(kind) + ".svg";
  } else if (target.has_parent_path()) {
    fs::create_directories(target.parent_path());
  }
  write_file_atomic(target, svg);
  std::cout << target.string() << '\n';
  return 0;
}

int cmd_synth(const std::string& config, std::optional<std::uint64_t> seed, const std::string& out)
{
  SynthConfig c;
  if (!config.empty()) {
    try {
      c = synth_config_from_json(nlohmann::json::parse(slurp(config)));
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError("malformed synthetic config: " + std::string(e.what()));
    }
  }
  if (seed)
    c.seed = *seed;
  const auto s = synthesize(c);

  const fs::path dir(out);
  fs::create_directories(dir);
  std::ostringstream csv;
  write_dataset_csv(s.dataset, s.descriptor, csv);
  write_file_atomic(dir / "synthetic.csv", csv.str());
  write_file_atomic(dir / "synthetic.json", to_json(s.descriptor).dump(2) + "\n");
  write_file_atomic(dir / "synth_config.json", to_json(c).dump(2) + "\n");
  std::cout << (dir / "synthetic.csv").string() << '\n';
  return 0;
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Kernel-weighted effort models for detecting nonstationarity in project data"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  std::string describe_name;
  auto* describe = app.add_subcommand("describe", "Show a descriptor's columns, formula and rules");
  describe->add_option("name", describe_name, "Builtin name or descriptor JSON path");
  describe->add_option("--descriptor", describe_name, "Builtin name or descriptor JSON path");

  std::string v_desc, v_data, v_out;
  auto* validate = app.add_subcommand("validate", "Load a dataset and print its split plan");
  validate->add_option("--descriptor", v_desc)->required();
  validate->add_option("--data", v_data)->required()->check(CLI::ExistingFile);
  validate->add_option("--out", v_out, "Write splits.csv here instead of stdout");

  SweepArgs sa;
  auto* sweep = app.add_subcommand("sweep", "Run the bandwidth sweep and write curves and verdicts");
  sweep->add_option("--descriptor", sa.descriptor)->required();
  sweep->add_option("--data", sa.data)->required()->check(CLI::ExistingFile);
  sweep->add_option("--out", sa.out, "Output directory")->capture_default_str();
  sweep->add_option("--kernels", sa.kernels, "Comma list: gaussian,epanechnikov,triangular,uniform");
  sweep->add_option("--grid", sa.grid, "lo:hi:step");
  sweep->add_option("--epsilon", sa.epsilon, "Convergence tolerance");
  sweep->add_option("--theta", sa.theta, "Decay-horizon weight threshold");
  sweep->add_option("--overrides", sa.overrides, "Comma list of training sizes");
  sweep->add_option("--config", sa.config, "JSON analysis config")->check(CLI::ExistingFile);
  sweep->add_option("--all-data-target", sa.all_data_target, "last or next")
    ->check(CLI::IsMember({"last", "next"}));
  sweep->add_flag("--svg", sa.svg, "Also write one SVG per split and kernel");

  std::string p_curves, p_kernel = "gaussian", p_out = ".";
  int p_split = 1;
  auto* plot = app.add_subcommand("plot", "Render one split/kernel slice of curves.csv as SVG");
  plot->add_option("--data,curves", p_curves, "curves.csv")->required()->check(CLI::ExistingFile);
  plot->add_option("--split", p_split)->capture_default_str();
  plot->add_option("--kernel", p_kernel)->capture_default_str();
  plot->add_option("--out", p_out, "SVG path or directory")->capture_default_str();

  std::string s_config, s_out = "synth";
  std::optional<std::uint64_t> s_seed;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic dataset and its descriptor");
  synth->add_option("--config", s_config, "JSON synthetic config")->check(CLI::ExistingFile);
  synth->add_option("--seed", s_seed);
  synth->add_option("--out", s_out, "Output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (*describe) {
      if (describe_name.empty()) {
        std::cerr << "describe: a descriptor name or path is required\n";
        return 1;
      }
      return cmd_describe(describe_name);
    }
    if (*validate)
      return cmd_validate(v_desc, v_data, v_out);
    if (*sweep)
      return cmd_sweep(sa);
    if (*plot)
      return cmd_plot(p_curves, p_split, p_kernel, p_out);
    if (*synth)
      return cmd_synth(s_config, s_seed, s_out);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const ComputationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 1;
}
