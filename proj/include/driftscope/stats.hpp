#pragma once

#include "driftscope/kernels.hpp"
#include "driftscope/record.hpp"

#include <Eigen/Dense>

#include <span>
#include <string>
#include <vector>

namespace driftscope {

enum class Transform
{
  Identity,
  Log,
  // Log only when the training values fail Shapiro-Wilk at the configured
  // alpha (and are all positive). Resolved per training set.
  Auto
};

enum class TermKind
{
  Numeric,
  Categorical
};

std::string to_string(Transform t);
Transform parse_transform(std::string_view text);
std::string to_string(TermKind k);
TermKind parse_term_kind(std::string_view text);

struct Term
{
  std::string column;
  TermKind kind = TermKind::Numeric;
  Transform transform = Transform::Identity;
  std::string reference;           // categorical only
  std::vector<std::string> levels; // categorical only; empty until resolved

  bool operator==(const Term&) const = default;
};

struct ResponseSpec
{
  std::string column;
  Transform transform = Transform::Log;

  bool operator==(const ResponseSpec&) const = default;
};

struct ModelFormula
{
  ResponseSpec response;
  std::vector<Term> terms;

  // Design columns excluding the intercept; each indicator counts once.
  // Categorical terms must have their levels resolved.
  std::size_t explanatory_columns() const;

  // e.g. "ln(effort) = ln(size) + language"
  std::string to_string() const;

  bool operator==(const ModelFormula&) const = default;
};

// How a training set was encoded, reused verbatim to encode test records.
struct DesignLayout
{
  Transform response_transform = Transform::Log;
  std::vector<Transform> term_transforms;
  // Non-reference levels per term, in column order (empty for numeric terms).
  std::vector<std::vector<std::string>> indicator_levels;
  std::vector<std::string> labels;

  bool operator==(const DesignLayout&) const = default;
};

struct DesignMatrix
{
  Eigen::MatrixXd x;
  Eigen::VectorXd y; // response on the transformed scale
  DesignLayout layout;

  Eigen::Index rows() const { return x.rows(); }
  Eigen::Index cols() const { return x.cols(); }
  const std::vector<std::string>& labels() const { return layout.labels; }
};

struct NormalityReport
{
  double w = 1.0;
  double p = 1.0;
  std::size_t n = 0;
  double alpha = 0.05;
  bool normal = true; // p >= alpha
};

struct FittedModel
{
  Eigen::VectorXd coefficients;
  DesignLayout layout;
  Eigen::VectorXd residuals; // transformed scale, training rows

  const std::vector<std::string>& labels() const { return layout.labels; }
};

// Royston's AS R94 approximation, 3 <= n <= 5000.
NormalityReport shapiro_wilk(std::span<const double> sample, double alpha = 0.05);

// Derives the layout (levels, resolved transforms) from these records.
DesignMatrix build_design_matrix(std::span<const ProjectRecord> records,
                                 const ModelFormula& formula,
                                 double normality_alpha = 0.05);

enum class UnseenLevel
{
  Error,
  // Encode like the reference level (all indicators 0).
  AsReference
};

// Encodes records with an existing layout, e.g. test records with the
// training layout.
DesignMatrix build_design_matrix(std::span<const ProjectRecord> records,
                                 const ModelFormula& formula,
                                 const DesignLayout& layout,
                                 UnseenLevel unseen = UnseenLevel::Error);

FittedModel weighted_least_squares(const DesignMatrix& design, const WeightVector& weights);

// Fitted values on the transformed scale.
std::vector<double> predict(const FittedModel& model, const DesignMatrix& design);

std::vector<double> back_transform(std::span<const double> log_predictions);

// Maps transformed-scale values back to the response's natural units.
std::vector<double> inverse_transform(Transform t, std::span<const double> values);

double sample_variance(std::span<const double> values);

// var(actual - predicted) / var(actual), both with n - 1 denominators.
double relative_error(std::span<const double> predictions, std::span<const double> actuals);

struct VariableNormality
{
  std::string variable;
  NormalityReport report;
};

// Shapiro-Wilk on the response and every numeric term, after the layout's
// transforms. Variables with fewer than 3 values or zero spread are skipped.
std::vector<VariableNormality> normality_diagnostics(std::span<const ProjectRecord> records,
                                                     const ModelFormula& formula,
                                                     const DesignLayout& layout,
                                                     double alpha = 0.05);

} // namespace driftscope
