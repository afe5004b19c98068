#include "driftscope/dataset.hpp"

#include "driftscope/error.hpp"

#include <algorithm>
#include <set>

namespace driftscope {

Dataset::Dataset(std::string name, Granularity granularity, std::vector<ProjectRecord> records)
  : name_(std::move(name))
  , granularity_(granularity)
  , records_(std::move(records))
{
  if (records_.empty())
    throw ValidationError("dataset '" + name_ + "' has no records");
  std::set<std::string> ids;
  for (const auto& r : records_) {
    if (!ids.insert(r.id).second)
      throw ValidationError("duplicate record id '" + r.id + "'");
  }
  std::stable_sort(records_.begin(), records_.end(), [](const auto& a, const auto& b) {
    return a.completion < b.completion;
  });
  keys_.reserve(records_.size());
  std::vector<Date> dates;
  dates.reserve(records_.size());
  for (const auto& r : records_) {
    keys_.push_back(driftscope::period_key(r.completion, granularity_));
    dates.push_back(r.completion);
  }
  indices_ = assign_period_indices(dates, granularity_);
}

std::vector<std::string> Dataset::levels(const std::string& attribute) const
{
  std::set<std::string> s;
  for (const auto& r : records_)
    s.insert(r.label(attribute));
  return {s.begin(), s.end()};
}

std::vector<ProjectRecord> Dataset::subset(std::span<const std::size_t> positions) const
{
  std::vector<ProjectRecord> out;
  out.reserve(positions.size());
  for (auto p : positions)
    out.push_back(records_.at(p));
  return out;
}

ModelFormula resolve_levels(const ModelFormula& formula, const Dataset& dataset)
{
  ModelFormula out = formula;
  for (auto& term : out.terms) {
    if (term.kind != TermKind::Categorical)
      continue;
    const auto present = dataset.levels(term.column);
    if (std::find(present.begin(), present.end(), term.reference) == present.end()) {
      throw ValidationError("reference level '" + term.reference + "' of '" + term.column +
                            "' does not occur in dataset '" + dataset.name() + "'");
    }
    std::vector<std::string> levels;
    for (const auto& l : term.levels) {
      if (std::find(present.begin(), present.end(), l) != present.end())
        levels.push_back(l);
    }
    for (const auto& l : present) {
      if (std::find(levels.begin(), levels.end(), l) == levels.end())
        levels.push_back(l);
    }
    term.levels = std::move(levels);
  }
  return out;
}

} // namespace driftscope
