#include "driftscope/stats.hpp"

#include "driftscope/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace driftscope {

std::string to_string(Transform t)
{
  switch (t) {
    case Transform::Identity:
      return "identity";
    case Transform::Log:
      return "log";
    case Transform::Auto:
      return "auto";
  }
  return "identity";
}

Transform parse_transform(std::string_view text)
{
  if (text == "identity" || text == "none")
    return Transform::Identity;
  if (text == "log")
    return Transform::Log;
  if (text == "auto")
    return Transform::Auto;
  throw ValidationError("unknown transform '" + std::string(text) + "'");
}

std::string to_string(TermKind k)
{
  return k == TermKind::Numeric ? "numeric" : "categorical";
}

TermKind parse_term_kind(std::string_view text)
{
  if (text == "numeric")
    return TermKind::Numeric;
  if (text == "categorical")
    return TermKind::Categorical;
  throw ValidationError("unknown term kind '" + std::string(text) + "'");
}

double ProjectRecord::numeric(const std::string& name) const
{
  auto it = attributes.find(name);
  if (it == attributes.end())
    throw ValidationError("record '" + id + "' has no attribute '" + name + "'");
  if (const auto* v = std::get_if<double>(&it->second))
    return *v;
  throw ValidationError("attribute '" + name + "' of record '" + id + "' is not numeric");
}

const std::string& ProjectRecord::label(const std::string& name) const
{
  auto it = attributes.find(name);
  if (it == attributes.end())
    throw ValidationError("record '" + id + "' has no attribute '" + name + "'");
  if (const auto* v = std::get_if<std::string>(&it->second))
    return *v;
  throw ValidationError("attribute '" + name + "' of record '" + id + "' is not categorical");
}

std::size_t ModelFormula::explanatory_columns() const
{
  std::size_t cols = 0;
  for (const auto& t : terms) {
    if (t.kind == TermKind::Numeric) {
      ++cols;
      continue;
    }
    if (t.levels.empty())
      throw ValidationError("levels of categorical term '" + t.column + "' are unresolved");
    cols += t.levels.size() - 1;
  }
  return cols;
}

namespace {

std::string wrap(Transform t, const std::string& name)
{
  switch (t) {
    case Transform::Log:
      return "ln(" + name + ")";
    case Transform::Auto:
      return "auto(" + name + ")";
    case Transform::Identity:
      break;
  }
  return name;
}

double apply(Transform t, double v, const std::string& column, const std::string& id)
{
  if (t != Transform::Log)
    return v;
  if (!(v > 0.0)) {
    throw ValidationError("cannot take log of nonpositive " + column + " = " + std::to_string(v) +
                          " in record '" + id + "'");
  }
  return std::log(v);
}

Transform resolve(Transform t,
                  std::span<const ProjectRecord> records,
                  const std::string& column,
                  double alpha)
{
  if (t != Transform::Auto)
    return t;
  std::vector<double> values;
  values.reserve(records.size());
  for (const auto& r : records)
    values.push_back(r.numeric(column));
  const bool positive = std::all_of(values.begin(), values.end(), [](double v) { return v > 0; });
  if (!positive || values.size() < 3)
    return Transform::Identity;
  try {
    return shapiro_wilk(values, alpha).normal ? Transform::Identity : Transform::Log;
  } catch (const ValidationError&) {
    return Transform::Identity;
  }
}

} // namespace

std::string ModelFormula::to_string() const
{
  std::string s = wrap(response.transform, response.column) + " =";
  for (std::size_t i = 0; i < terms.size(); ++i) {
    s += i == 0 ? " " : " + ";
    s += wrap(terms[i].transform, terms[i].column);
  }
  return s;
}

DesignMatrix build_design_matrix(std::span<const ProjectRecord> records,
                                 const ModelFormula& formula,
                                 double normality_alpha)
{
  DesignLayout layout;
  layout.response_transform =
    resolve(formula.response.transform, records, formula.response.column, normality_alpha);
  layout.labels.push_back("(intercept)");
  for (const auto& term : formula.terms) {
    if (term.kind == TermKind::Numeric) {
      const auto t = resolve(term.transform, records, term.column, normality_alpha);
      layout.term_transforms.push_back(t);
      layout.indicator_levels.emplace_back();
      layout.labels.push_back(wrap(t, term.column));
      continue;
    }
    layout.term_transforms.push_back(Transform::Identity);
    std::set<std::string> present;
    for (const auto& r : records)
      present.insert(r.label(term.column));
    if (!present.contains(term.reference)) {
      throw ComputationError("reference level '" + term.reference + "' of '" + term.column +
                             "' is absent from the training records");
    }
    // Declared level order first, then anything undeclared in sorted order.
    std::vector<std::string> levels;
    for (const auto& l : term.levels) {
      if (l != term.reference && present.contains(l))
        levels.push_back(l);
    }
    for (const auto& l : present) {
      if (l != term.reference && std::find(levels.begin(), levels.end(), l) == levels.end())
        levels.push_back(l);
    }
    for (const auto& l : levels)
      layout.labels.push_back(term.column + "=" + l);
    layout.indicator_levels.push_back(std::move(levels));
  }
  return build_design_matrix(records, formula, layout);
}

DesignMatrix build_design_matrix(std::span<const ProjectRecord> records,
                                 const ModelFormula& formula,
                                 const DesignLayout& layout,
                                 UnseenLevel unseen)
{
  if (layout.term_transforms.size() != formula.terms.size())
    throw std::invalid_argument("design layout does not match the formula");

  const auto n = static_cast<Eigen::Index>(records.size());
  const auto p = static_cast<Eigen::Index>(layout.labels.size());
  DesignMatrix dm;
  dm.layout = layout;
  dm.x = Eigen::MatrixXd::Zero(n, p);
  dm.y.resize(n);

  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& r = records[static_cast<std::size_t>(i)];
    dm.y(i) = apply(layout.response_transform,
                    r.numeric(formula.response.column),
                    formula.response.column,
                    r.id);
    dm.x(i, 0) = 1.0;
    Eigen::Index col = 1;
    for (std::size_t t = 0; t < formula.terms.size(); ++t) {
      const auto& term = formula.terms[t];
      if (term.kind == TermKind::Numeric) {
        dm.x(i, col++) = apply(layout.term_transforms[t], r.numeric(term.column), term.column, r.id);
        continue;
      }
      const auto& level = r.label(term.column);
      const auto& levels = layout.indicator_levels[t];
      auto it = std::find(levels.begin(), levels.end(), level);
      if (it != levels.end())
        dm.x(i, col + static_cast<Eigen::Index>(it - levels.begin())) = 1.0;
      else if (level != term.reference && unseen == UnseenLevel::Error) {
        throw ComputationError("level '" + level + "' of '" + term.column + "' in record '" + r.id +
                               "' was not seen in the training records");
      }
      col += static_cast<Eigen::Index>(levels.size());
    }
  }
  return dm;
}

FittedModel weighted_least_squares(const DesignMatrix& design, const WeightVector& weights)
{
  const auto n = design.rows();
  const auto p = design.cols();
  if (static_cast<std::size_t>(n) != weights.size() || design.y.size() != n)
    throw std::invalid_argument("design, response and weights differ in length");
  if (n < p)
    throw ComputationError("singular design: " + std::to_string(n) + " rows for " +
                           std::to_string(p) + " columns");

  // Structural rank is judged on the unweighted design; tiny kernel weights
  // must not masquerade as collinearity.
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> structural(design.x);
  if (structural.rank() < p)
    throw ComputationError("singular design: column rank " + std::to_string(structural.rank()) +
                           " < " + std::to_string(p));

  Eigen::VectorXd sw(n);
  for (Eigen::Index i = 0; i < n; ++i)
    sw(i) = std::sqrt(weights[static_cast<std::size_t>(i)]);
  const Eigen::MatrixXd xs = sw.asDiagonal() * design.x;
  const Eigen::VectorXd ys = sw.cwiseProduct(design.y);

  FittedModel m;
  m.coefficients = Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd>(xs).solve(ys);
  m.layout = design.layout;
  m.residuals = design.y - design.x * m.coefficients;
  return m;
}

std::vector<double> predict(const FittedModel& model, const DesignMatrix& design)
{
  if (model.labels() != design.labels())
    throw std::invalid_argument("design columns do not match the fitted model");
  Eigen::VectorXd fitted = design.x * model.coefficients;
  return {fitted.data(), fitted.data() + fitted.size()};
}

std::vector<double> back_transform(std::span<const double> log_predictions)
{
  std::vector<double> out;
  out.reserve(log_predictions.size());
  for (double v : log_predictions)
    out.push_back(std::exp(v));
  return out;
}

std::vector<double> inverse_transform(Transform t, std::span<const double> values)
{
  if (t == Transform::Log)
    return back_transform(values);
  return {values.begin(), values.end()};
}

double sample_variance(std::span<const double> values)
{
  if (values.size() < 2)
    throw ComputationError("variance needs at least two values");
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : values)
    ss += (v - mean) * (v - mean);
  return ss / (n - 1.0);
}

double relative_error(std::span<const double> predictions, std::span<const double> actuals)
{
  if (predictions.size() != actuals.size())
    throw std::invalid_argument("predictions and actuals differ in length");
  if (actuals.size() < 2)
    throw ComputationError("relative error needs at least two data points");
  const double denom = sample_variance(actuals);
  if (!(denom > 0.0))
    throw ComputationError("relative error undefined: actuals have zero variance");
  std::vector<double> residuals(actuals.size());
  for (std::size_t i = 0; i < actuals.size(); ++i)
    residuals[i] = actuals[i] - predictions[i];
  return sample_variance(residuals) / denom;
}

std::vector<VariableNormality> normality_diagnostics(std::span<const ProjectRecord> records,
                                                     const ModelFormula& formula,
                                                     const DesignLayout& layout,
                                                     double alpha)
{
  std::vector<VariableNormality> out;
  auto run = [&](const std::string& column, Transform t) {
    std::vector<double> v;
    v.reserve(records.size());
    for (const auto& r : records)
      v.push_back(apply(t, r.numeric(column), column, r.id));
    if (v.size() < 3)
      return;
    try {
      out.push_back({wrap(t, column), shapiro_wilk(v, alpha)});
    } catch (const ValidationError&) {
      // constant column
    }
  };
  run(formula.response.column, layout.response_transform);
  for (std::size_t t = 0; t < formula.terms.size(); ++t) {
    if (formula.terms[t].kind == TermKind::Numeric)
      run(formula.terms[t].column, layout.term_transforms[t]);
  }
  return out;
}

} // namespace driftscope
