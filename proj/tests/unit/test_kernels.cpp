#include "driftscope/error.hpp"
#include "driftscope/kernels.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace driftscope;

namespace {

std::vector<double> values(const std::vector<PeriodIndex>& ix)
{
  std::vector<double> out;
  for (auto p : ix)
    out.push_back(p.value());
  return out;
}

std::vector<PeriodIndex> idx(std::initializer_list<double> v)
{
  std::vector<PeriodIndex> out;
  for (double x : v)
    out.emplace_back(x);
  return out;
}

} // namespace

TEST(PeriodIndices, YearlyGapConsumesAUnit)
{
  std::vector<Date> d{{1971, 0, 0}, {1972, 0, 0}, {1974, 0, 0}};
  EXPECT_EQ(values(assign_period_indices(d, Granularity::Yearly)), (std::vector<double>{1, 2, 4}));
}

TEST(PeriodIndices, SameYearSameIndex)
{
  std::vector<Date> d{{1999, 0, 0}, {1999, 0, 0}};
  EXPECT_EQ(values(assign_period_indices(d, Granularity::Yearly)), (std::vector<double>{1, 1}));
}

TEST(PeriodIndices, MonthlyTenthSteps)
{
  std::vector<Date> d{{1999, 10, 0}, {1999, 11, 0}, {2000, 1, 0}};
  const auto v = values(assign_period_indices(d, Granularity::Monthly));
  ASSERT_EQ(v.size(), 3u);
  EXPECT_NEAR(v[0], 0.1, 1e-12);
  EXPECT_NEAR(v[1], 0.2, 1e-12);
  EXPECT_NEAR(v[2], 0.4, 1e-12);
}

TEST(PeriodIndices, OrderIndependentAndEmptyRejected)
{
  std::vector<Date> d{{1980, 0, 0}, {1975, 0, 0}};
  EXPECT_EQ(values(assign_period_indices(d, Granularity::Yearly)), (std::vector<double>{6, 1}));
  EXPECT_THROW(assign_period_indices({}, Granularity::Yearly), ValidationError);
  EXPECT_THROW(PeriodIndex(0.0), std::invalid_argument);
}

TEST(NormalizedLag, Examples)
{
  EXPECT_DOUBLE_EQ(normalized_lag(PeriodIndex(3), PeriodIndex(8), 5), 1.0);
  EXPECT_DOUBLE_EQ(normalized_lag(PeriodIndex(4), PeriodIndex(4), 17), 0.0);
  EXPECT_NEAR(normalized_lag(PeriodIndex(0.1), PeriodIndex(0.4), 10), 0.03, 1e-12);
}

TEST(NormalizedLag, Errors)
{
  EXPECT_THROW(normalized_lag(PeriodIndex(1), PeriodIndex(2), 0), std::invalid_argument);
  EXPECT_THROW(normalized_lag(PeriodIndex(1), PeriodIndex(2), -1), std::invalid_argument);
  EXPECT_THROW(normalized_lag(PeriodIndex(3), PeriodIndex(2), 1), std::invalid_argument);
}

TEST(KernelWeight, TableValues)
{
  EXPECT_EQ(kernel_weight(KernelKind::Gaussian, 0.0), 1.0);
  EXPECT_NEAR(kernel_weight(KernelKind::Gaussian, 1.0), 0.606531, 1e-6);
  EXPECT_EQ(kernel_weight(KernelKind::Gaussian, 1.0), std::exp(-0.5));
  EXPECT_EQ(kernel_weight(KernelKind::Epanechnikov, 0.5), 0.75);
  EXPECT_EQ(kernel_weight(KernelKind::Triangular, 0.25), 0.75);
  EXPECT_EQ(kernel_weight(KernelKind::Uniform, 0.9), 1.0);
}

TEST(KernelWeight, DomainErrors)
{
  EXPECT_THROW(kernel_weight(KernelKind::Gaussian, -0.1), std::invalid_argument);
  EXPECT_THROW(kernel_weight(KernelKind::Epanechnikov, 1.0), std::domain_error);
  EXPECT_THROW(kernel_weight(KernelKind::Triangular, 1.5), std::domain_error);
  EXPECT_NO_THROW(kernel_weight(KernelKind::Gaussian, 30.0));
  EXPECT_NO_THROW(kernel_weight(KernelKind::Uniform, 30.0));
}

TEST(KernelWeight, MonotoneAndBoundedOnDenseGrid)
{
  for (auto k : kAllKernels) {
    double prev = 2.0;
    for (int i = 0; i < 10000; ++i) {
      const double t = i / 10000.0; // [0, 1)
      const double w = kernel_weight(k, t);
      EXPECT_GT(w, 0.0) << to_string(k) << " t=" << t;
      EXPECT_LE(w, 1.0) << to_string(k) << " t=" << t;
      EXPECT_LE(w, prev) << to_string(k) << " t=" << t;
      prev = w;
    }
  }
}

TEST(KernelNames, RoundTrip)
{
  for (auto k : kAllKernels)
    EXPECT_EQ(parse_kernel(to_string(k)), k);
  EXPECT_EQ(parse_kernel("Gaussian"), KernelKind::Gaussian);
  EXPECT_THROW(parse_kernel("cosine"), ValidationError);
}

TEST(WeightsForTarget, Examples)
{
  auto u = weights_for_target(idx({1, 1, 2}), PeriodIndex(2), KernelKind::Uniform, 10);
  EXPECT_EQ(std::vector<double>(u.values().begin(), u.values().end()), (std::vector<double>{1, 1, 1}));

  auto g = weights_for_target(idx({1, 2, 3}), PeriodIndex(3), KernelKind::Gaussian, 2);
  EXPECT_NEAR(g[0], 0.606531, 1e-6);
  EXPECT_NEAR(g[1], 0.882497, 1e-6);
  EXPECT_EQ(g[2], 1.0);

  EXPECT_THROW(weights_for_target(idx({1, 3}), PeriodIndex(3), KernelKind::Epanechnikov, 2),
               ComputationError);
}

TEST(WeightsForTarget, TargetPeriodGetsWeightOne)
{
  for (auto k : kAllKernels) {
    auto w = weights_for_target(idx({1, 2, 5, 5}), PeriodIndex(5), k, 10);
    EXPECT_EQ(w[2], 1.0);
    EXPECT_EQ(w[3], 1.0);
  }
}

TEST(WeightsForTarget, GaussianUnderflowStaysPositive)
{
  auto w = weights_for_target(idx({1, 100}), PeriodIndex(100), KernelKind::Gaussian, 1);
  EXPECT_GT(w[0], 0.0);
}

TEST(WeightVector, RejectsOutOfRange)
{
  EXPECT_THROW(WeightVector({0.5, 0.0}), std::invalid_argument);
  EXPECT_THROW(WeightVector({1.5}), std::invalid_argument);
  EXPECT_NO_THROW(WeightVector({1.0, 1e-300}));
  EXPECT_EQ(WeightVector::ones(4).size(), 4u);
}

TEST(MinBandwidth, Examples)
{
  EXPECT_EQ(min_bandwidth(KernelKind::Epanechnikov, 16, 1), 17);
  EXPECT_EQ(min_bandwidth(KernelKind::Triangular, 4, 1), 5);
  EXPECT_EQ(min_bandwidth(KernelKind::Triangular, 7, 1), 8);
  EXPECT_EQ(min_bandwidth(KernelKind::Gaussian, 16, 1), 1);
  EXPECT_EQ(min_bandwidth(KernelKind::Uniform, 16, 1), 1);
}

TEST(MinBandwidth, FractionalStepAndMonthlySpans)
{
  EXPECT_NEAR(min_bandwidth(KernelKind::Triangular, 1.7, 0.5), 2.0, 1e-12);
  EXPECT_NEAR(min_bandwidth(KernelKind::Epanechnikov, 0.7, 1), 1.0, 1e-12);
}

TEST(BuildGrid, Examples)
{
  const auto g = build_grid(KernelKind::Gaussian, 16);
  ASSERT_EQ(g.values.size(), 100u);
  EXPECT_EQ(g.values.front(), 1);
  EXPECT_EQ(g.values.back(), 100);

  const auto e = build_grid(KernelKind::Epanechnikov, 16);
  ASSERT_EQ(e.values.size(), 84u);
  EXPECT_EQ(e.values.front(), 17);
  EXPECT_EQ(e.values.back(), 100);

  EXPECT_THROW(build_grid(KernelKind::Triangular, 120), ValidationError);
}

TEST(BuildGrid, FractionalStepHitsUpperBoundExactly)
{
  const auto g = build_grid(KernelKind::Gaussian, 0, 0.1, 1.0, 0.1);
  ASSERT_EQ(g.values.size(), 10u);
  EXPECT_DOUBLE_EQ(g.values.back(), 1.0);
}

TEST(BuildGrid, EveryGridValueIsAdmissible)
{
  for (auto k : kAllKernels) {
    for (double span : {0.0, 3.0, 16.0, 42.0}) {
      for (double b : build_grid(k, span).values) {
        if (has_finite_support(k))
          EXPECT_LT(span / b, 1.0);
      }
    }
  }
}

TEST(DecayHorizon, Examples)
{
  EXPECT_NEAR(decay_horizon(KernelKind::Gaussian, 5, 0.01), 15.17, 0.01);
  EXPECT_NEAR(decay_horizon(KernelKind::Triangular, 10, 1e-12), 10.0, 1e-9);
  EXPECT_NEAR(decay_horizon(KernelKind::Epanechnikov, 20, 0.01), 19.90, 0.01);
  EXPECT_NEAR(decay_horizon(KernelKind::Gaussian, 18, 0.01), 54.6, 0.1);
  EXPECT_TRUE(std::isinf(decay_horizon(KernelKind::Uniform, 5, 0.01)));
}

TEST(DecayHorizon, WeightAtHorizonEqualsThreshold)
{
  for (auto k : {KernelKind::Gaussian, KernelKind::Epanechnikov, KernelKind::Triangular}) {
    for (double theta : {0.5, 0.1, 0.01}) {
      const double b = 7.0;
      const double h = decay_horizon(k, b, theta);
      EXPECT_NEAR(kernel_weight(k, h / b), theta, 1e-12);
    }
  }
}

TEST(DecayHorizon, GrowsAsThresholdShrinks)
{
  for (auto k : {KernelKind::Gaussian, KernelKind::Epanechnikov, KernelKind::Triangular})
    EXPECT_LT(decay_horizon(k, 5, 0.1), decay_horizon(k, 5, 0.01));
}

TEST(DecayHorizon, Errors)
{
  EXPECT_THROW(decay_horizon(KernelKind::Gaussian, 0, 0.01), std::invalid_argument);
  EXPECT_THROW(decay_horizon(KernelKind::Gaussian, 5, 0.0), std::invalid_argument);
  EXPECT_THROW(decay_horizon(KernelKind::Gaussian, 5, 1.0), std::invalid_argument);
}
