#pragma once

#include "driftscope/chronology.hpp"
#include "driftscope/descriptor.hpp"
#include "driftscope/kernels.hpp"
#include "driftscope/stats.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace driftscope {

struct AnalysisConfig
{
  double epsilon = 0.05; // relative convergence tolerance, floored at absolute epsilon
  double theta = 0.01;   // decay-horizon weight threshold
  double grid_lo = 1.0;
  double grid_hi = 100.0;
  double grid_step = 1.0;
  std::vector<KernelKind> kernels = {KernelKind::Gaussian, KernelKind::Epanechnikov,
                                     KernelKind::Triangular};
  AllDataTarget all_data_target = AllDataTarget::LastPeriod;
  double normality_alpha = 0.05;
  // Replaces the descriptor's overrides when set.
  std::optional<std::vector<std::size_t>> overrides;

  void validate() const;
};

struct FitDiagnostics
{
  double min_weight = 1.0;
  double effective_n = 0.0; // (sum w)^2 / sum w^2
  std::size_t train_n = 0;
  std::size_t test_n = 0;
};

struct SweepCell
{
  int split = 0;
  KernelKind kernel = KernelKind::Gaussian;
  double bandwidth = 0.0;
  double re_train_nu = 0.0;
  std::optional<double> re_test_nu;
  double re_train_u = 0.0;
  std::optional<double> re_test_u;
  FitDiagnostics diagnostics;
};

struct SplitInfo
{
  int ordinal = 0;
  std::size_t train_size = 0;
  std::size_t test_size = 0;
  double target = 0.0;
  double train_span = 0.0;
  std::string train_through;
  std::string test_period;
  std::vector<VariableNormality> normality;
};

struct SweepResult
{
  std::string dataset;
  std::vector<SplitInfo> splits;
  std::vector<std::pair<KernelKind, BandwidthGrid>> grids;
  std::vector<SweepCell> cells; // ordered by split, kernel, bandwidth

  // Cells of one (split, kernel) slice, ascending bandwidth.
  std::vector<const SweepCell*> slice(int split, KernelKind kernel) const;
  const BandwidthGrid& grid(KernelKind kernel) const;
};

// One (split, kernel, bandwidth) evaluation: a kernel-weighted and an
// unweighted fit on the training records, REs on the natural scale.
SweepCell fit_cell(const Dataset& dataset,
                   const Split& split,
                   const ModelFormula& formula,
                   KernelKind kind,
                   double bandwidth,
                   double normality_alpha = 0.05);

SweepResult run_sweep(const Dataset& dataset,
                      const DatasetDescriptor& descriptor,
                      const AnalysisConfig& config = {});

struct ConvergencePoint
{
  double bandwidth = 0.0;
  bool sustained = true;
  bool at_grid_min = false; // tolerance held over the whole grid
};

// Smallest grid bandwidth from which |curve - uniform| stays within
// epsilon * max(1, uniform) for every larger bandwidth.
std::optional<ConvergencePoint> detect_convergence(std::span<const double> bandwidths,
                                                   std::span<const double> curve,
                                                   double uniform_re,
                                                   double epsilon);

// Smallest bandwidth where the curve first enters the tolerance band, sustained or not.
std::optional<double> first_within(std::span<const double> bandwidths,
                                   std::span<const double> curve,
                                   double uniform_re,
                                   double epsilon);

enum class Classification
{
  Stationary,
  NearStationary,
  NonStationary
};

std::string to_string(Classification c);
Classification parse_classification(std::string_view text);

struct StationarityVerdict
{
  int split = 0;
  KernelKind kernel = KernelKind::Gaussian;
  Classification classification = Classification::NonStationary;
  std::optional<ConvergencePoint> convergence;
  std::optional<double> approach; // first entry into the tolerance band
  std::optional<double> horizon;  // decay horizon at the convergence bandwidth
  double train_span = 0.0;
  double epsilon = 0.05;
  double theta = 0.01;
};

StationarityVerdict stationarity_verdict(const std::optional<ConvergencePoint>& point,
                                         KernelKind kind,
                                         double train_span,
                                         const AnalysisConfig& config);

// Verdict of one (split, kernel) slice from its training curves, optionally
// restricted to bandwidths >= min_bandwidth.
StationarityVerdict slice_verdict(const SweepResult& sweep,
                                  int split,
                                  KernelKind kind,
                                  const AnalysisConfig& config,
                                  double min_bandwidth = 0.0);

struct KernelAgreement
{
  int split = 0;
  double common_lo = 0.0;
  std::vector<std::pair<KernelKind, Classification>> verdicts;
  bool agree = true;
};

struct SplitErrorRange
{
  int split = 0;
  KernelKind kernel = KernelKind::Gaussian;
  double min_train_nu = 0.0;
  double max_train_nu = 0.0;
  double train_u = 0.0;
  std::optional<double> min_test_nu;
  std::optional<double> max_test_nu;
  std::optional<double> test_u;
};

struct Summary
{
  std::string dataset;
  std::vector<StationarityVerdict> verdicts;
  std::vector<KernelAgreement> agreement;
  double agreement_rate = 1.0; // fraction of splits whose kernels agree
  std::vector<SplitErrorRange> ranges;
  // NonStationary if any split is; NearStationary if every split is; else Stationary.
  Classification overall = Classification::NearStationary;
};

Summary summarize(const SweepResult& sweep, const AnalysisConfig& config = {});

} // namespace driftscope
