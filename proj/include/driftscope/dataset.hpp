#pragma once

#include "driftscope/kernels.hpp"
#include "driftscope/record.hpp"
#include "driftscope/stats.hpp"

#include <span>
#include <string>
#include <vector>

namespace driftscope {

// Validated, chronologically sorted collection of projects. Immutable.
class Dataset
{
public:
  Dataset(std::string name, Granularity granularity, std::vector<ProjectRecord> records);

  const std::string& name() const { return name_; }
  Granularity granularity() const { return granularity_; }
  const std::vector<ProjectRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  const ProjectRecord& operator[](std::size_t i) const { return records_[i]; }

  // Period index of each record, aligned with records().
  std::span<const PeriodIndex> period_indices() const { return indices_; }
  long period_key(std::size_t i) const { return keys_[i]; }

  // Distinct labels of a categorical attribute, sorted.
  std::vector<std::string> levels(const std::string& attribute) const;

  std::vector<ProjectRecord> subset(std::span<const std::size_t> positions) const;

  bool operator==(const Dataset& o) const
  {
    return name_ == o.name_ && granularity_ == o.granularity_ && records_ == o.records_;
  }

private:
  std::string name_;
  Granularity granularity_;
  std::vector<ProjectRecord> records_;
  std::vector<long> keys_;
  std::vector<PeriodIndex> indices_;
};

// Fills unresolved categorical levels from the data and checks every
// reference level occurs. Levels are the ones present in the data, in
// declared order first.
ModelFormula resolve_levels(const ModelFormula& formula, const Dataset& dataset);

} // namespace driftscope
