#pragma once

#include "driftscope/calendar.hpp"

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace driftscope {

enum class KernelKind
{
  Uniform,
  Gaussian,
  Epanechnikov,
  Triangular
};

inline constexpr KernelKind kAllKernels[] = {
  KernelKind::Uniform, KernelKind::Gaussian, KernelKind::Epanechnikov, KernelKind::Triangular
};

// Epanechnikov and Triangular are zero outside lag < 1.
constexpr bool has_finite_support(KernelKind k)
{
  return k == KernelKind::Epanechnikov || k == KernelKind::Triangular;
}

std::string to_string(KernelKind k);
KernelKind parse_kernel(std::string_view name);

// Dimensionless period coordinate. The oldest completion period of a
// dataset is 1 (yearly) or 0.1 (monthly).
class PeriodIndex
{
public:
  PeriodIndex() = default;
  explicit PeriodIndex(double value);

  double value() const { return value_; }

  friend bool operator==(PeriodIndex a, PeriodIndex b) = default;
  friend auto operator<=>(PeriodIndex a, PeriodIndex b) = default;

private:
  double value_ = 1.0;
};

// Distance between consecutive periods: 1 for years, 0.1 for months.
constexpr double period_increment(Granularity g)
{
  return g == Granularity::Yearly ? 1.0 : 0.1;
}

// Calendar-anchored indices; gaps in the calendar consume index distance.
std::vector<PeriodIndex> assign_period_indices(std::span<const Date> completions,
                                               Granularity granularity);

// (target - origin) / bandwidth
double normalized_lag(PeriodIndex origin, PeriodIndex target, double bandwidth);

double kernel_weight(KernelKind kind, double lag);

// Record weights, guaranteed to lie in (0, 1].
class WeightVector
{
public:
  WeightVector() = default;
  explicit WeightVector(std::vector<double> weights);

  static WeightVector ones(std::size_t n);

  std::span<const double> values() const { return weights_; }
  std::size_t size() const { return weights_.size(); }
  double operator[](std::size_t i) const { return weights_[i]; }

private:
  std::vector<double> weights_;
};

WeightVector weights_for_target(std::span<const PeriodIndex> indices,
                                PeriodIndex target,
                                KernelKind kind,
                                double bandwidth);

// Smallest admissible bandwidth on the grid lo, lo+step, ... For finite
// support kernels every lag up to max_elapsed must stay strictly below 1.
double min_bandwidth(KernelKind kind, double max_elapsed, double step, double lo = 1.0);

struct BandwidthGrid
{
  double lo = 1.0;
  double hi = 100.0;
  double step = 1.0;
  std::vector<double> values;
};

// Grid values are lo + k*step (computed by multiplication, not
// accumulation) up to hi inclusive.
BandwidthGrid build_grid(KernelKind kind,
                         double max_elapsed,
                         double lo = 1.0,
                         double hi = 100.0,
                         double step = 1.0);

// Elapsed time at which a kernel of the given bandwidth first drops to the
// threshold. +infinity for the uniform kernel.
double decay_horizon(KernelKind kind, double bandwidth, double threshold = 0.01);

} // namespace driftscope
