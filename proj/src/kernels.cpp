#include "driftscope/kernels.hpp"

#include "driftscope/error.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace driftscope {

namespace {

// Slack for comparing period indices built from 0.1 increments.
constexpr double kIndexSlack = 1e-9;

} // namespace

std::string to_string(KernelKind k)
{
  switch (k) {
    case KernelKind::Uniform:
      return "uniform";
    case KernelKind::Gaussian:
      return "gaussian";
    case KernelKind::Epanechnikov:
      return "epanechnikov";
    case KernelKind::Triangular:
      return "triangular";
  }
  return "unknown";
}

KernelKind parse_kernel(std::string_view name)
{
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (auto k : kAllKernels) {
    if (to_string(k) == lower)
      return k;
  }
  throw ValidationError("unknown kernel '" + std::string(name) + "'");
}

PeriodIndex::PeriodIndex(double value)
  : value_(value)
{
  if (!(value > 0.0) || !std::isfinite(value))
    throw std::invalid_argument("period index must be positive and finite");
}

std::vector<PeriodIndex> assign_period_indices(std::span<const Date> completions,
                                               Granularity granularity)
{
  if (completions.empty())
    throw ValidationError("cannot assign period indices to an empty list");

  std::vector<long> keys;
  keys.reserve(completions.size());
  for (const auto& d : completions)
    keys.push_back(period_key(d, granularity));
  const long oldest = *std::min_element(keys.begin(), keys.end());
  const double inc = period_increment(granularity);

  std::vector<PeriodIndex> out;
  out.reserve(keys.size());
  for (long k : keys)
    out.emplace_back(inc * static_cast<double>(1 + (k - oldest)));
  return out;
}

double normalized_lag(PeriodIndex origin, PeriodIndex target, double bandwidth)
{
  if (!(bandwidth > 0.0))
    throw std::invalid_argument("bandwidth must be positive");
  const double elapsed = target.value() - origin.value();
  if (elapsed < -kIndexSlack)
    throw std::invalid_argument("training record is newer than the target period");
  return std::max(elapsed, 0.0) / bandwidth;
}

double kernel_weight(KernelKind kind, double lag)
{
  if (!(lag >= 0.0))
    throw std::invalid_argument("kernel lag must be nonnegative");
  if (has_finite_support(kind) && lag >= 1.0)
    throw std::domain_error(to_string(kind) + " kernel evaluated outside its support (lag >= 1)");
  switch (kind) {
    case KernelKind::Uniform:
      return 1.0;
    case KernelKind::Gaussian:
      return std::exp(-0.5 * lag * lag);
    case KernelKind::Epanechnikov:
      return 1.0 - lag * lag;
    case KernelKind::Triangular:
      return 1.0 - lag;
  }
  return 1.0;
}

WeightVector::WeightVector(std::vector<double> weights)
  : weights_(std::move(weights))
{
  for (double w : weights_) {
    if (!(w > 0.0) || w > 1.0)
      throw std::invalid_argument("weights must lie in (0, 1]");
  }
}

WeightVector WeightVector::ones(std::size_t n)
{
  return WeightVector(std::vector<double>(n, 1.0));
}

WeightVector weights_for_target(std::span<const PeriodIndex> indices,
                                PeriodIndex target,
                                KernelKind kind,
                                double bandwidth)
{
  std::vector<double> w;
  w.reserve(indices.size());
  for (auto idx : indices) {
    const double lag = normalized_lag(idx, target, bandwidth);
    if (has_finite_support(kind) && lag >= 1.0) {
      throw ComputationError("bandwidth below support minimum: " + to_string(kind) +
                             " at bandwidth " + std::to_string(bandwidth) +
                             " reaches lag " + std::to_string(lag));
    }
    w.push_back(kernel_weight(kind, lag));
  }
  // Very small Gaussian bandwidths can underflow to exactly zero.
  for (double& x : w)
    x = std::max(x, std::numeric_limits<double>::min());
  return WeightVector(std::move(w));
}

double min_bandwidth(KernelKind kind, double max_elapsed, double step, double lo)
{
  if (!(step > 0.0))
    throw std::invalid_argument("grid step must be positive");
  if (!has_finite_support(kind) || max_elapsed < lo)
    return lo;
  // Smallest lo + k*step strictly greater than max_elapsed.
  auto k = static_cast<long>(std::floor((max_elapsed - lo) / step + kIndexSlack)) + 1;
  return lo + static_cast<double>(k) * step;
}

BandwidthGrid build_grid(KernelKind kind, double max_elapsed, double lo, double hi, double step)
{
  if (!(step > 0.0) || !(lo > 0.0) || lo > hi)
    throw ValidationError("bandwidth grid needs 0 < lo <= hi and step > 0");
  BandwidthGrid grid{lo, hi, step, {}};
  const double start = min_bandwidth(kind, max_elapsed, step, lo);
  // Index of the first admissible point on the lo-anchored lattice.
  auto k = static_cast<long>(std::llround((start - lo) / step));
  for (;; ++k) {
    const double b = lo + static_cast<double>(k) * step;
    if (b > hi + kIndexSlack * step)
      break;
    grid.values.push_back(b);
  }
  if (grid.values.empty()) {
    throw ValidationError("empty bandwidth grid: " + to_string(kind) + " needs bandwidth > " +
                          std::to_string(max_elapsed) + " but grid ends at " +
                          std::to_string(hi));
  }
  return grid;
}

double decay_horizon(KernelKind kind, double bandwidth, double threshold)
{
  if (!(threshold > 0.0 && threshold < 1.0))
    throw std::invalid_argument("decay threshold must lie strictly between 0 and 1");
  if (!(bandwidth > 0.0))
    throw std::invalid_argument("bandwidth must be positive");
  switch (kind) {
    case KernelKind::Uniform:
      return std::numeric_limits<double>::infinity();
    case KernelKind::Gaussian:
      return bandwidth * std::sqrt(-2.0 * std::log(threshold));
    case KernelKind::Epanechnikov:
      return bandwidth * std::sqrt(1.0 - threshold);
    case KernelKind::Triangular:
      return bandwidth * (1.0 - threshold);
  }
  return std::numeric_limits<double>::infinity();
}

} // namespace driftscope
