#pragma once

#include "driftscope/descriptor.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>

namespace driftscope {

// ln(effort) = (beta0 + drift_beta0 * p) + (beta1 + drift_beta1 * p) * ln(size) + noise
// for period p = 0 .. periods-1. Projects are spread evenly over periods;
// sizes are log-uniform in [size_min, size_max].
struct SynthConfig
{
  std::size_t projects = 120;
  std::size_t periods = 8;
  std::uint64_t seed = 1;
  double beta0 = 2.0;
  double beta1 = 1.0;
  double drift_beta0 = 0.0;
  double drift_beta1 = 0.0;
  double noise_sd = 0.1;
  double size_min = 10.0;
  double size_max = 1000.0;
  int first_year = 1980;
};

struct SynthOutput
{
  Dataset dataset;
  DatasetDescriptor descriptor;
};

// Descriptor of the generated CSV: yearly, year-accumulating,
// ln(effort) = ln(size).
DatasetDescriptor synthetic_descriptor();

// Deterministic for a fixed seed (std::mt19937_64).
SynthOutput synthesize(const SynthConfig& config);

SynthConfig synth_config_from_json(const nlohmann::json& j);
nlohmann::ordered_json to_json(const SynthConfig& c);

} // namespace driftscope
