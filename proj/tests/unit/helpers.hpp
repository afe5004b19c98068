#pragma once

#include "driftscope/dataset.hpp"
#include "driftscope/stats.hpp"

#include <random>
#include <string>
#include <vector>

namespace dstest {

using namespace driftscope;

inline ProjectRecord rec(std::string id, int year, double effort, double size,
                         std::string lang = {})
{
  ProjectRecord r;
  r.id = std::move(id);
  r.completion = Date{year, 0, 0};
  r.attributes["effort"] = effort;
  r.attributes["size"] = size;
  if (!lang.empty())
    r.attributes["language"] = lang;
  return r;
}

inline ModelFormula log_log()
{
  ModelFormula f;
  f.response = {"effort", Transform::Log};
  f.terms = {Term{"size", TermKind::Numeric, Transform::Log, {}, {}}};
  return f;
}

// Records per year, effort = 3 * size (exact in log space unless noise > 0).
inline Dataset yearly(const std::vector<std::pair<int, int>>& year_counts, double noise = 0.0,
                      unsigned seed = 7)
{
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_real_distribution<double> u(1.0, 6.0);
  std::vector<ProjectRecord> rs;
  int id = 0;
  for (auto [year, count] : year_counts) {
    for (int k = 0; k < count; ++k) {
      const double ln_size = u(rng);
      const double ln_effort = std::log(3.0) + ln_size + noise * n(rng);
      rs.push_back(rec("P" + std::to_string(++id), year, std::exp(ln_effort), std::exp(ln_size)));
    }
  }
  return Dataset("toy", Granularity::Yearly, std::move(rs));
}

// Random full-rank design with an intercept column.
inline DesignMatrix random_design(std::mt19937_64& rng, int rows, int cols)
{
  std::normal_distribution<double> n(0.0, 1.0);
  DesignMatrix d;
  d.x = Eigen::MatrixXd(rows, cols);
  d.y = Eigen::VectorXd(rows);
  for (int i = 0; i < rows; ++i) {
    d.x(i, 0) = 1.0;
    for (int j = 1; j < cols; ++j)
      d.x(i, j) = n(rng);
    d.y(i) = n(rng) * 3.0 + 1.0;
  }
  for (int j = 0; j < cols; ++j)
    d.layout.labels.push_back("c" + std::to_string(j));
  return d;
}

} // namespace dstest
