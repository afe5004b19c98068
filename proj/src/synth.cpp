#include "driftscope/synth.hpp"

#include "driftscope/error.hpp"

#include <cmath>
#include <cstdio>
#include <random>

namespace driftscope {

DatasetDescriptor synthetic_descriptor()
{
  DatasetDescriptor d;
  d.name = "synthetic";
  d.granularity = Granularity::Yearly;
  d.chronology = ChronologyMode::YearAccumulate;
  d.columns.id = "id";
  d.columns.completion = "year";
  d.columns.attributes = {{"effort", "effort"}, {"size", "size"}};
  d.formula.response = {"effort", Transform::Log};
  d.formula.terms = {Term{"size", TermKind::Numeric, Transform::Log, {}, {}}};
  return d;
}

SynthOutput synthesize(const SynthConfig& c)
{
  auto descriptor = synthetic_descriptor();
  const auto min_train = well_formed_min(descriptor.formula);
  if (c.projects < 2 * min_train) {
    throw ValidationError("infeasible synthetic config: " + std::to_string(c.projects) +
                          " projects, need at least " + std::to_string(2 * min_train));
  }
  if (c.periods < 1 || c.periods > c.projects)
    throw ValidationError("infeasible synthetic config: periods must be in [1, projects]");
  if (!(c.noise_sd >= 0.0))
    throw ValidationError("infeasible synthetic config: noise sd must be >= 0");
  if (!(c.size_min > 0.0) || c.size_max < c.size_min)
    throw ValidationError("infeasible synthetic config: need 0 < size_min <= size_max");

  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> log_size(std::log(c.size_min), std::log(c.size_max));
  std::normal_distribution<double> noise(0.0, 1.0);

  std::vector<ProjectRecord> records;
  records.reserve(c.projects);
  for (std::size_t i = 0; i < c.projects; ++i) {
    const auto period = i * c.periods / c.projects;
    const double p = static_cast<double>(period);
    const double ln_size = log_size(rng);
    const double eps = c.noise_sd * noise(rng);
    const double ln_effort =
      (c.beta0 + c.drift_beta0 * p) + (c.beta1 + c.drift_beta1 * p) * ln_size + eps;

    char id[32];
    std::snprintf(id, sizeof id, "S%04zu", i + 1);
    ProjectRecord r;
    r.id = id;
    r.completion = Date{c.first_year + static_cast<int>(period), 0, 0};
    r.attributes["size"] = std::exp(ln_size);
    r.attributes["effort"] = std::exp(ln_effort);
    records.push_back(std::move(r));
  }
  descriptor.expected_rows = c.projects;
  return {Dataset(descriptor.name, descriptor.granularity, std::move(records)), descriptor};
}

SynthConfig synth_config_from_json(const nlohmann::json& j)
{
  try {
    SynthConfig c;
    c.projects = j.value("projects", c.projects);
    c.periods = j.value("periods", c.periods);
    c.seed = j.value("seed", c.seed);
    c.beta0 = j.value("beta0", c.beta0);
    c.beta1 = j.value("beta1", c.beta1);
    c.drift_beta0 = j.value("drift_beta0", c.drift_beta0);
    c.drift_beta1 = j.value("drift_beta1", c.drift_beta1);
    c.noise_sd = j.value("noise_sd", c.noise_sd);
    c.size_min = j.value("size_min", c.size_min);
    c.size_max = j.value("size_max", c.size_max);
    c.first_year = j.value("first_year", c.first_year);
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed synthetic config: ") + e.what());
  }
}

nlohmann::ordered_json to_json(const SynthConfig& c)
{
  return {{"projects", c.projects},       {"periods", c.periods},   {"seed", c.seed},
          {"beta0", c.beta0},             {"beta1", c.beta1},       {"drift_beta0", c.drift_beta0},
          {"drift_beta1", c.drift_beta1}, {"noise_sd", c.noise_sd}, {"size_min", c.size_min},
          {"size_max", c.size_max},       {"first_year", c.first_year}};
}

} // namespace driftscope
