#include "driftscope/analysis.hpp"
#include "driftscope/error.hpp"
#include "driftscope/synth.hpp"
#include "helpers.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace driftscope;

namespace {

DatasetDescriptor toy_descriptor()
{
  DatasetDescriptor d;
  d.name = "toy";
  d.formula = dstest::log_log();
  return d;
}

AnalysisConfig small_grid()
{
  AnalysisConfig c;
  c.grid_hi = 30;
  return c;
}

std::optional<ConvergencePoint> converge(std::vector<double> curve, double uniform, double eps = 0.05)
{
  std::vector<double> bw;
  for (std::size_t i = 0; i < curve.size(); ++i)
    bw.push_back(1.0 + static_cast<double>(i));
  return detect_convergence(bw, curve, uniform, eps);
}

} // namespace

TEST(Analysis, ConfigValidation)
{
  AnalysisConfig c;
  EXPECT_NO_THROW(c.validate());
  c.kernels.clear();
  EXPECT_THROW(c.validate(), ValidationError);
  c = {};
  c.epsilon = 0;
  EXPECT_THROW(c.validate(), ValidationError);
  c = {};
  c.theta = 1;
  EXPECT_THROW(c.validate(), ValidationError);
  c = {};
  c.grid_lo = 10;
  c.grid_hi = 5;
  EXPECT_THROW(c.validate(), ValidationError);
}

TEST(Analysis, EmptyKernelSetRejectedBySweep)
{
  auto c = small_grid();
  c.kernels = {};
  EXPECT_THROW(run_sweep(dstest::yearly({{1990, 4}, {1991, 4}, {1992, 4}}), toy_descriptor(), c),
               ValidationError);
}

TEST(Analysis, UniformKernelWeightedEqualsUnweighted)
{
  const auto ds = dstest::yearly({{1990, 4}, {1991, 3}, {1992, 5}, {1993, 4}}, 0.3);
  auto c = small_grid();
  c.kernels = {KernelKind::Uniform};
  const auto s = run_sweep(ds, toy_descriptor(), c);
  ASSERT_FALSE(s.cells.empty());
  for (const auto& cell : s.cells) {
    EXPECT_NEAR(cell.re_train_nu, cell.re_train_u, 1e-12);
    if (cell.re_test_nu) {
      EXPECT_NEAR(*cell.re_test_nu, *cell.re_test_u, 1e-12);
    }
  }
}

TEST(Analysis, NoiselessDataGivesZeroError)
{
  const auto ds = dstest::yearly({{1990, 4}, {1991, 3}, {1992, 5}, {1993, 4}});
  const auto s = run_sweep(ds, toy_descriptor(), small_grid());
  for (const auto& cell : s.cells) {
    EXPECT_NEAR(cell.re_train_nu, 0.0, 1e-9);
    EXPECT_NEAR(cell.re_train_u, 0.0, 1e-9);
    if (cell.re_test_nu)
      EXPECT_NEAR(*cell.re_test_nu, 0.0, 1e-9);
  }
}

TEST(Analysis, SweepOrderingAndGridSizes)
{
  const auto ds = dstest::yearly({{1990, 4}, {1991, 3}, {1992, 5}, {1993, 4}, {1995, 3}}, 0.2);
  const auto c = small_grid();
  const auto s = run_sweep(ds, toy_descriptor(), c);
  ASSERT_EQ(s.grids.size(), c.kernels.size());

  std::size_t expected = 0;
  for (const auto& [k, g] : s.grids) {
    EXPECT_EQ(g.values.back(), 30.0);
    // every lag must stay below one for finite support kernels
    if (has_finite_support(k))
      EXPECT_EQ(g.values.front(), 6.0);
    else
      EXPECT_EQ(g.values.front(), 1.0);
    expected += g.values.size();
  }
  EXPECT_EQ(s.cells.size(), expected * s.splits.size());

  for (std::size_t i = 1; i < s.cells.size(); ++i) {
    const auto& a = s.cells[i - 1];
    const auto& b = s.cells[i];
    ASSERT_LE(a.split, b.split);
    if (a.split == b.split && a.kernel == b.kernel)
      EXPECT_LT(a.bandwidth, b.bandwidth);
  }
  EXPECT_TRUE(s.splits.back().test_size == 0);
  for (const auto& sp : s.splits)
    EXPECT_EQ(s.slice(sp.ordinal, KernelKind::Gaussian).size(), s.grid(KernelKind::Gaussian).values.size());
}

TEST(Analysis, UnweightedErrorIsConstantAcrossBandwidths)
{
  const auto ds = dstest::yearly({{1990, 4}, {1991, 3}, {1992, 5}, {1993, 4}}, 0.3);
  const auto s = run_sweep(ds, toy_descriptor(), small_grid());
  for (const auto& sp : s.splits) {
    const auto cells = s.slice(sp.ordinal, KernelKind::Epanechnikov);
    for (const auto* cell : cells)
      EXPECT_EQ(cell->re_train_u, cells.front()->re_train_u);
  }
}

TEST(Analysis, SweepIsDeterministic)
{
  const auto ds = dstest::yearly({{1990, 4}, {1991, 3}, {1992, 5}, {1993, 4}}, 0.3);
  const auto a = run_sweep(ds, toy_descriptor(), small_grid());
  const auto b = run_sweep(ds, toy_descriptor(), small_grid());
  ASSERT_EQ(a.cells.size(), b.cells.size());
  for (std::size_t i = 0; i < a.cells.size(); ++i) {
    EXPECT_EQ(a.cells[i].re_train_nu, b.cells[i].re_train_nu);
    EXPECT_EQ(a.cells[i].re_test_nu, b.cells[i].re_test_nu);
  }
}

TEST(Analysis, ConvergenceDetection)
{
  // enters the band at 3 and stays
  auto p = converge({0.9, 0.7, 0.52, 0.51, 0.5, 0.5}, 0.5);
  ASSERT_TRUE(p);
  EXPECT_EQ(p->bandwidth, 3.0);
  EXPECT_FALSE(p->at_grid_min);

  // dips in early, leaves, returns at 5
  p = converge({0.5, 0.9, 0.9, 0.9, 0.5, 0.5}, 0.5);
  ASSERT_TRUE(p);
  EXPECT_EQ(p->bandwidth, 5.0);
  std::vector<double> bw{1, 2, 3, 4, 5, 6};
  std::vector<double> curve{0.5, 0.9, 0.9, 0.9, 0.5, 0.5};
  EXPECT_EQ(first_within(bw, curve, 0.5, 0.05), 1.0);

  // flat: within tolerance over the whole grid
  p = converge({0.5, 0.5, 0.5}, 0.5);
  ASSERT_TRUE(p);
  EXPECT_TRUE(p->at_grid_min);

  // last point out of band: no convergence
  EXPECT_FALSE(converge({0.5, 0.5, 0.9}, 0.5));

  // absolute floor for small errors
  EXPECT_TRUE(converge({0.04, 0.0}, 0.0)->at_grid_min);
}

TEST(Analysis, VerdictExamples)
{
  AnalysisConfig c;
  // horizon of b=5 is about 15.2 > 7
  auto v = stationarity_verdict(ConvergencePoint{5.0, true, false}, KernelKind::Gaussian, 7.0, c);
  EXPECT_EQ(v.classification, Classification::NonStationary);
  EXPECT_NEAR(*v.horizon, 5.0 * std::sqrt(-2.0 * std::log(0.01)), 1e-12);

  v = stationarity_verdict(ConvergencePoint{18.0, true, false}, KernelKind::Gaussian, 16.0, c);
  EXPECT_EQ(v.classification, Classification::NonStationary);

  // horizon about 6.1 <= 16
  v = stationarity_verdict(ConvergencePoint{2.0, true, false}, KernelKind::Gaussian, 16.0, c);
  EXPECT_EQ(v.classification, Classification::Stationary);

  v = stationarity_verdict(ConvergencePoint{1.0, true, true}, KernelKind::Gaussian, 16.0, c);
  EXPECT_EQ(v.classification, Classification::NearStationary);

  v = stationarity_verdict(std::nullopt, KernelKind::Gaussian, 16.0, c);
  EXPECT_EQ(v.classification, Classification::NonStationary);
  EXPECT_FALSE(v.horizon);
}

TEST(Analysis, LargerThetaNeverMakesAVerdictLessStationary)
{
  // horizon shrinks as theta grows, so Stationary can only be gained
  for (double b = 1; b <= 30; b += 1)
    for (double span = 0; span <= 30; span += 2) {
      AnalysisConfig lo_t, hi_t;
      lo_t.theta = 0.01;
      hi_t.theta = 0.1;
      for (auto k : {KernelKind::Gaussian, KernelKind::Epanechnikov, KernelKind::Triangular}) {
        const auto a = stationarity_verdict(ConvergencePoint{b, true, false}, k, span, lo_t);
        const auto z = stationarity_verdict(ConvergencePoint{b, true, false}, k, span, hi_t);
        if (a.classification == Classification::Stationary)
          EXPECT_EQ(z.classification, Classification::Stationary);
      }
    }
}

TEST(Analysis, ClassificationNames)
{
  for (auto c : {Classification::Stationary, Classification::NearStationary, Classification::NonStationary})
    EXPECT_EQ(parse_classification(to_string(c)), c);
  EXPECT_THROW(parse_classification("wobbly"), ValidationError);
}

TEST(Analysis, UniformOnlyIsNearStationaryEverywhere)
{
  const auto ds = dstest::yearly({{1990, 4}, {1991, 3}, {1992, 5}, {1993, 4}}, 0.3);
  auto c = small_grid();
  c.kernels = {KernelKind::Uniform};
  const auto s = run_sweep(ds, toy_descriptor(), c);
  const auto sum = summarize(s, c);
  EXPECT_EQ(sum.verdicts.size(), s.splits.size());
  for (const auto& v : sum.verdicts)
    EXPECT_EQ(v.classification, Classification::NearStationary);
  EXPECT_EQ(sum.overall, Classification::NearStationary);
  EXPECT_EQ(sum.agreement_rate, 1.0);
}

TEST(Analysis, SummaryRangesBracketTheCurves)
{
  const auto ds = dstest::yearly({{1990, 4}, {1991, 3}, {1992, 5}, {1993, 4}}, 0.3);
  const auto c = small_grid();
  const auto s = run_sweep(ds, toy_descriptor(), c);
  const auto sum = summarize(s, c);
  EXPECT_EQ(sum.verdicts.size(), s.splits.size() * c.kernels.size());
  for (const auto& r : sum.ranges) {
    for (const auto* cell : s.slice(r.split, r.kernel)) {
      EXPECT_GE(cell->re_train_nu, r.min_train_nu);
      EXPECT_LE(cell->re_train_nu, r.max_train_nu);
    }
  }
}

TEST(Analysis, SyntheticDriftIsDetected)
{
  SynthConfig sc;
  sc.seed = 3;
  auto c = AnalysisConfig{};
  c.kernels = {KernelKind::Gaussian};
  const auto flat = synthesize(sc);
  EXPECT_NE(summarize(run_sweep(flat.dataset, flat.descriptor, c), c).overall,
            Classification::NonStationary);
  sc.drift_beta0 = 0.5;
  const auto drift = synthesize(sc);
  EXPECT_EQ(summarize(run_sweep(drift.dataset, drift.descriptor, c), c).overall,
            Classification::NonStationary);
}

TEST(Analysis, WideningTheGridPullsTheWeightedFitTowardUniform)
{
  const auto ds = dstest::yearly({{1990, 4}, {1991, 3}, {1992, 5}, {1993, 4}, {1996, 4}}, 0.4);
  double prev_gap = INFINITY;
  for (double hi : {20.0, 50.0, 100.0, 400.0}) {
    AnalysisConfig c;
    c.grid_hi = hi;
    c.kernels = {KernelKind::Gaussian};
    const auto s = run_sweep(ds, toy_descriptor(), c);
    double gap = 0.0;
    for (const auto& sp : s.splits) {
      const auto* last = s.slice(sp.ordinal, KernelKind::Gaussian).back();
      gap = std::max(gap, std::abs(last->re_train_nu - last->re_train_u));
    }
    // weights at the widest bandwidth are bounded by the span
    const auto w = weights_for_target(ds.period_indices(), PeriodIndex(7.0), KernelKind::Gaussian, hi);
    for (double x : w.values())
      EXPECT_GE(x, kernel_weight(KernelKind::Gaussian, 6.0 / hi) - 1e-15);
    EXPECT_LE(gap, prev_gap + 1e-9) << "grid hi " << hi;
    prev_gap = gap;
  }
}
