#include "driftscope/analysis.hpp"

#include "driftscope/error.hpp"

#include <algorithm>
#include <cmath>

namespace driftscope {

void AnalysisConfig::validate() const
{
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw ValidationError("epsilon must lie strictly between 0 and 1");
  if (!(theta > 0.0 && theta < 1.0))
    throw ValidationError("theta must lie strictly between 0 and 1");
  if (!(grid_step > 0.0) || !(grid_lo > 0.0) || grid_lo > grid_hi)
    throw ValidationError("bandwidth grid needs 0 < lo <= hi and step > 0");
  if (kernels.empty())
    throw ValidationError("kernel set is empty");
}

std::vector<const SweepCell*> SweepResult::slice(int split, KernelKind kernel) const
{
  std::vector<const SweepCell*> out;
  for (const auto& c : cells) {
    if (c.split == split && c.kernel == kernel)
      out.push_back(&c);
  }
  return out;
}

const BandwidthGrid& SweepResult::grid(KernelKind kernel) const
{
  for (const auto& [k, g] : grids) {
    if (k == kernel)
      return g;
  }
  throw std::out_of_range("no grid for kernel " + to_string(kernel));
}

namespace {

// Everything about a split that does not depend on the kernel.
struct SplitContext
{
  const Split* split = nullptr;
  DesignMatrix train;
  std::optional<DesignMatrix> test;
  std::vector<double> train_actual;
  std::vector<double> test_actual;
  std::vector<PeriodIndex> train_indices;
  double re_train_u = 0.0;
  std::optional<double> re_test_u;
  std::vector<ProjectRecord> train_records;
};

struct Errors
{
  double train = 0.0;
  std::optional<double> test;
};

Errors evaluate(const SplitContext& ctx, const FittedModel& model)
{
  const auto t = ctx.train.layout.response_transform;
  Errors e;
  e.train = relative_error(inverse_transform(t, predict(model, ctx.train)), ctx.train_actual);
  if (ctx.test)
    e.test = relative_error(inverse_transform(t, predict(model, *ctx.test)), ctx.test_actual);
  return e;
}

SplitContext make_context(const Dataset& ds, const Split& split, const ModelFormula& formula,
                          double alpha)
{
  SplitContext ctx;
  ctx.split = &split;
  ctx.train_records = ds.subset(split.train);
  ctx.train = build_design_matrix(ctx.train_records, formula, alpha);
  const auto t = ctx.train.layout.response_transform;
  ctx.train_actual = inverse_transform(t, {ctx.train.y.data(), static_cast<std::size_t>(ctx.train.y.size())});
  if (!split.test.empty()) {
    const auto test_records = ds.subset(split.test);
    ctx.test = build_design_matrix(test_records, formula, ctx.train.layout, UnseenLevel::AsReference);
    ctx.test_actual =
      inverse_transform(t, {ctx.test->y.data(), static_cast<std::size_t>(ctx.test->y.size())});
  }
  const auto all = ds.period_indices();
  for (auto p : split.train)
    ctx.train_indices.push_back(all[p]);

  const auto uniform = weighted_least_squares(ctx.train, WeightVector::ones(split.train.size()));
  const auto e = evaluate(ctx, uniform);
  ctx.re_train_u = e.train;
  ctx.re_test_u = e.test;
  return ctx;
}

SweepCell evaluate_cell(const SplitContext& ctx, KernelKind kind, double bandwidth)
{
  const auto w = weights_for_target(ctx.train_indices, ctx.split->target, kind, bandwidth);
  const auto model = weighted_least_squares(ctx.train, w);
  const auto e = evaluate(ctx, model);

  SweepCell cell;
  cell.split = ctx.split->ordinal;
  cell.kernel = kind;
  cell.bandwidth = bandwidth;
  cell.re_train_nu = e.train;
  cell.re_test_nu = e.test;
  cell.re_train_u = ctx.re_train_u;
  cell.re_test_u = ctx.re_test_u;

  double sum = 0.0;
  double sum_sq = 0.0;
  double lo = 1.0;
  for (double x : w.values()) {
    sum += x;
    sum_sq += x * x;
    lo = std::min(lo, x);
  }
  cell.diagnostics.min_weight = lo;
  cell.diagnostics.effective_n = sum * sum / sum_sq;
  cell.diagnostics.train_n = ctx.split->train.size();
  cell.diagnostics.test_n = ctx.split->test.size();
  return cell;
}

bool within(double value, double uniform_re, double epsilon)
{
  return std::abs(value - uniform_re) <= epsilon * std::max(1.0, uniform_re);
}

} // namespace

SweepCell fit_cell(const Dataset& dataset,
                   const Split& split,
                   const ModelFormula& formula,
                   KernelKind kind,
                   double bandwidth,
                   double normality_alpha)
{
  const auto ctx = make_context(dataset, split, formula, normality_alpha);
  return evaluate_cell(ctx, kind, bandwidth);
}

SweepResult run_sweep(const Dataset& dataset,
                      const DatasetDescriptor& descriptor,
                      const AnalysisConfig& config)
{
  config.validate();
  std::vector<KernelKind> kernels;
  for (auto k : config.kernels) {
    if (std::find(kernels.begin(), kernels.end(), k) == kernels.end())
      kernels.push_back(k);
  }

  const auto formula = resolve_levels(descriptor.formula, dataset);
  PlanOptions opts;
  opts.overrides = config.overrides.value_or(descriptor.overrides);
  opts.all_data_target = config.all_data_target;
  const auto plan = build_split_plan(dataset, descriptor.chronology, formula, opts);

  double max_span = 0.0;
  for (const auto& s : plan.splits)
    max_span = std::max(max_span, s.train_span);

  SweepResult result;
  result.dataset = dataset.name();
  for (auto k : kernels)
    result.grids.emplace_back(k, build_grid(k, max_span, config.grid_lo, config.grid_hi, config.grid_step));

  for (const auto& split : plan.splits) {
    const std::string where = "split " + std::to_string(split.ordinal);
    std::optional<SplitContext> ctx;
    try {
      ctx = make_context(dataset, split, formula, config.normality_alpha);
    } catch (const std::exception& e) {
      throw ComputationError(where + ": " + e.what());
    }

    SplitInfo info;
    info.ordinal = split.ordinal;
    info.train_size = split.train.size();
    info.test_size = split.test.size();
    info.target = split.target.value();
    info.train_span = split.train_span;
    info.train_through = split.train_through;
    info.test_period = split.test_period;
    info.normality =
      normality_diagnostics(ctx->train_records, formula, ctx->train.layout, config.normality_alpha);
    result.splits.push_back(std::move(info));

    for (const auto& [kind, grid] : result.grids) {
      for (double b : grid.values) {
        try {
          result.cells.push_back(evaluate_cell(*ctx, kind, b));
        } catch (const std::exception& e) {
          throw ComputationError(where + ", kernel " + to_string(kind) + ", bandwidth " +
                                 std::to_string(b) + ": " + e.what());
        }
      }
    }
  }
  return result;
}

std::optional<ConvergencePoint> detect_convergence(std::span<const double> bandwidths,
                                                   std::span<const double> curve,
                                                   double uniform_re,
                                                   double epsilon)
{
  if (bandwidths.size() != curve.size())
    throw std::invalid_argument("bandwidths and curve differ in length");
  std::size_t start = curve.size();
  while (start > 0 && within(curve[start - 1], uniform_re, epsilon))
    --start;
  if (start == curve.size())
    return std::nullopt;
  return ConvergencePoint{bandwidths[start], true, start == 0};
}

std::optional<double> first_within(std::span<const double> bandwidths,
                                   std::span<const double> curve,
                                   double uniform_re,
                                   double epsilon)
{
  for (std::size_t i = 0; i < curve.size(); ++i) {
    if (within(curve[i], uniform_re, epsilon))
      return bandwidths[i];
  }
  return std::nullopt;
}

std::string to_string(Classification c)
{
  switch (c) {
    case Classification::Stationary:
      return "Stationary";
    case Classification::NearStationary:
      return "NearStationary";
    case Classification::NonStationary:
      return "NonStationary";
  }
  return "NonStationary";
}

Classification parse_classification(std::string_view text)
{
  for (auto c : {Classification::Stationary, Classification::NearStationary,
                 Classification::NonStationary}) {
    if (to_string(c) == text)
      return c;
  }
  throw ValidationError("unknown classification '" + std::string(text) + "'");
}

StationarityVerdict stationarity_verdict(const std::optional<ConvergencePoint>& point,
                                         KernelKind kind,
                                         double train_span,
                                         const AnalysisConfig& config)
{
  if (train_span < 0.0)
    throw std::invalid_argument("training span must be nonnegative");
  StationarityVerdict v;
  v.kernel = kind;
  v.convergence = point;
  v.train_span = train_span;
  v.epsilon = config.epsilon;
  v.theta = config.theta;
  if (!point || !point->sustained) {
    v.classification = Classification::NonStationary;
    return v;
  }
  v.horizon = decay_horizon(kind, point->bandwidth, config.theta);
  if (point->at_grid_min)
    v.classification = Classification::NearStationary;
  else if (*v.horizon <= train_span)
    v.classification = Classification::Stationary;
  else
    v.classification = Classification::NonStationary;
  return v;
}

StationarityVerdict slice_verdict(const SweepResult& sweep,
                                  int split,
                                  KernelKind kind,
                                  const AnalysisConfig& config,
                                  double min_bandwidth)
{
  std::vector<double> bw;
  std::vector<double> curve;
  double uniform = 0.0;
  for (const auto* c : sweep.slice(split, kind)) {
    if (c->bandwidth < min_bandwidth)
      continue;
    bw.push_back(c->bandwidth);
    curve.push_back(c->re_train_nu);
    uniform = c->re_train_u;
  }
  if (bw.empty())
    throw std::invalid_argument("empty sweep slice for split " + std::to_string(split));
  double span = 0.0;
  for (const auto& s : sweep.splits) {
    if (s.ordinal == split)
      span = s.train_span;
  }
  auto v = stationarity_verdict(detect_convergence(bw, curve, uniform, config.epsilon), kind, span,
                                config);
  v.split = split;
  v.approach = first_within(bw, curve, uniform, config.epsilon);
  return v;
}

Summary summarize(const SweepResult& sweep, const AnalysisConfig& config)
{
  Summary s;
  s.dataset = sweep.dataset;

  std::vector<KernelKind> weighted;
  double common_lo = 0.0;
  for (const auto& [k, g] : sweep.grids) {
    if (k == KernelKind::Uniform)
      continue;
    weighted.push_back(k);
    common_lo = std::max(common_lo, g.values.front());
  }

  bool all_near = true;
  bool any_non = false;
  std::size_t agreeing = 0;
  for (const auto& split : sweep.splits) {
    for (const auto& [k, g] : sweep.grids) {
      auto v = slice_verdict(sweep, split.ordinal, k, config);
      all_near = all_near && v.classification == Classification::NearStationary;
      any_non = any_non || v.classification == Classification::NonStationary;
      s.verdicts.push_back(v);

      SplitErrorRange r;
      r.split = split.ordinal;
      r.kernel = k;
      bool first = true;
      for (const auto* c : sweep.slice(split.ordinal, k)) {
        r.train_u = c->re_train_u;
        r.test_u = c->re_test_u;
        if (first) {
          r.min_train_nu = r.max_train_nu = c->re_train_nu;
          r.min_test_nu = r.max_test_nu = c->re_test_nu;
          first = false;
          continue;
        }
        r.min_train_nu = std::min(r.min_train_nu, c->re_train_nu);
        r.max_train_nu = std::max(r.max_train_nu, c->re_train_nu);
        if (c->re_test_nu) {
          r.min_test_nu = std::min(*r.min_test_nu, *c->re_test_nu);
          r.max_test_nu = std::max(*r.max_test_nu, *c->re_test_nu);
        }
      }
      s.ranges.push_back(r);
    }

    KernelAgreement a;
    a.split = split.ordinal;
    a.common_lo = common_lo;
    for (auto k : weighted) {
      auto v = slice_verdict(sweep, split.ordinal, k, config, common_lo);
      a.verdicts.emplace_back(k, v.classification);
      a.agree = a.agree && v.classification == a.verdicts.front().second;
    }
    agreeing += a.agree ? 1 : 0;
    s.agreement.push_back(std::move(a));
  }
  if (!sweep.splits.empty())
    s.agreement_rate = static_cast<double>(agreeing) / static_cast<double>(sweep.splits.size());
  s.overall = any_non    ? Classification::NonStationary
              : all_near ? Classification::NearStationary
                         : Classification::Stationary;
  return s;
}

} // namespace driftscope
