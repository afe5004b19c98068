#pragma once

#include "driftscope/dataset.hpp"

#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace driftscope {

enum class ChronologyMode
{
  // Train on whole completion periods, test on the next period with projects.
  YearAccumulate,
  // As YearAccumulate, but a test project must have started after the last
  // training project completed. Needs start dates.
  DateFilteredTest,
  // Train on whole periods, test on every remaining project.
  RemainderTest
};

std::string to_string(ChronologyMode m);
ChronologyMode parse_chronology(std::string_view text);

// Which period the all-data split's weights are anchored to.
enum class AllDataTarget
{
  LastPeriod,
  NextPeriod
};

struct Split
{
  int ordinal = 1;
  std::vector<std::size_t> train; // positions in Dataset::records()
  std::vector<std::size_t> test;  // empty for the all-data split
  PeriodIndex target;
  double train_span = 0.0; // target minus the oldest training index
  std::string train_through;
  std::string test_period;

  bool all_data() const { return test.empty(); }
};

struct SplitPlan
{
  std::vector<Split> splits;

  std::size_t test_bearing() const;
};

struct PlanOptions
{
  // Exact training sizes, e.g. {7, 10, 12, 13, 14}. Empty = data driven.
  std::vector<std::size_t> overrides;
  AllDataTarget all_data_target = AllDataTarget::LastPeriod;
};

// Two plus the number of non-intercept design columns.
std::size_t well_formed_min(const ModelFormula& formula);

PeriodIndex target_period(const Dataset& dataset,
                          std::span<const std::size_t> train,
                          std::span<const std::size_t> test,
                          AllDataTarget all_data = AllDataTarget::LastPeriod);

SplitPlan build_split_plan(const Dataset& dataset,
                           ChronologyMode mode,
                           const ModelFormula& formula,
                           const PlanOptions& options = {});

// Columns: split, target_period, train_span, train_size, test_size,
// train_through, test_period, train_ids, test_ids (ids joined with ';').
void write_split_plan(const SplitPlan& plan, const Dataset& dataset, std::ostream& out);

} // namespace driftscope
