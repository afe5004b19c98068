#include "driftscope/chronology.hpp"

#include "driftscope/csv.hpp"
#include "driftscope/error.hpp"

#include <algorithm>
#include <numeric>

namespace driftscope {

std::string to_string(ChronologyMode m)
{
  switch (m) {
    case ChronologyMode::YearAccumulate:
      return "year_accumulate";
    case ChronologyMode::DateFilteredTest:
      return "date_filtered_test";
    case ChronologyMode::RemainderTest:
      return "remainder_test";
  }
  return "year_accumulate";
}

ChronologyMode parse_chronology(std::string_view text)
{
  if (text == "year_accumulate")
    return ChronologyMode::YearAccumulate;
  if (text == "date_filtered_test")
    return ChronologyMode::DateFilteredTest;
  if (text == "remainder_test")
    return ChronologyMode::RemainderTest;
  throw ValidationError("unknown chronology mode '" + std::string(text) + "'");
}

std::size_t SplitPlan::test_bearing() const
{
  return static_cast<std::size_t>(
    std::count_if(splits.begin(), splits.end(), [](const Split& s) { return !s.all_data(); }));
}

std::size_t well_formed_min(const ModelFormula& formula)
{
  return 2 + formula.explanatory_columns();
}

PeriodIndex target_period(const Dataset& dataset,
                          std::span<const std::size_t> train,
                          std::span<const std::size_t> test,
                          AllDataTarget all_data)
{
  const auto idx = dataset.period_indices();
  if (!test.empty()) {
    double lo = idx[test.front()].value();
    for (auto p : test)
      lo = std::min(lo, idx[p].value());
    return PeriodIndex(lo);
  }
  if (train.empty())
    throw std::invalid_argument("split has no records");
  double hi = idx[train.front()].value();
  for (auto p : train)
    hi = std::max(hi, idx[p].value());
  if (all_data == AllDataTarget::NextPeriod)
    hi += period_increment(dataset.granularity());
  return PeriodIndex(hi);
}

namespace {

struct PeriodGroup
{
  std::size_t begin;
  std::size_t end;
};

std::vector<PeriodGroup> group_periods(const Dataset& ds)
{
  std::vector<PeriodGroup> groups;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (groups.empty() || ds.period_key(i) != ds.period_key(groups.back().begin))
      groups.push_back({i, i + 1});
    else
      groups.back().end = i + 1;
  }
  return groups;
}

std::string period_label(const Dataset& ds, std::size_t pos)
{
  const auto& d = ds[pos].completion;
  if (ds.granularity() == Granularity::Yearly)
    return std::to_string(d.year);
  return Date{d.year, d.month, 0}.to_string();
}

std::vector<std::size_t> range(std::size_t begin, std::size_t end)
{
  std::vector<std::size_t> v(end - begin);
  std::iota(v.begin(), v.end(), begin);
  return v;
}

class PlanBuilder
{
public:
  PlanBuilder(const Dataset& ds, AllDataTarget all_data)
    : ds_(ds)
    , all_data_(all_data)
  {
  }

  void add(std::size_t train_end, std::vector<std::size_t> test, std::string test_label)
  {
    Split s;
    s.ordinal = static_cast<int>(plan_.splits.size()) + 1;
    s.train = range(0, train_end);
    s.test = std::move(test);
    s.target = target_period(ds_, s.train, s.test, all_data_);
    s.train_span = std::max(0.0, s.target.value() - ds_.period_indices()[0].value());
    s.train_through = period_label(ds_, train_end - 1);
    s.test_period = std::move(test_label);
    plan_.splits.push_back(std::move(s));
  }

  SplitPlan finish()
  {
    add(ds_.size(), {}, "");
    return std::move(plan_);
  }

private:
  const Dataset& ds_;
  AllDataTarget all_data_;
  SplitPlan plan_;
};

// Projects of a period that qualify as test records for a training prefix.
std::vector<std::size_t> period_test_set(const Dataset& ds,
                                         ChronologyMode mode,
                                         std::size_t train_end,
                                         const PeriodGroup& g)
{
  if (mode != ChronologyMode::DateFilteredTest)
    return range(g.begin, g.end);
  Date last = ds[0].completion;
  for (std::size_t i = 0; i < train_end; ++i)
    last = std::max(last, ds[i].completion);
  std::vector<std::size_t> out;
  for (std::size_t i = g.begin; i < g.end; ++i) {
    const auto& r = ds[i];
    if (!r.start)
      throw ValidationError("date-filtered test sets need a start date for record '" + r.id + "'");
    if (*r.start > last)
      out.push_back(i);
  }
  return out;
}

} // namespace

SplitPlan build_split_plan(const Dataset& dataset,
                           ChronologyMode mode,
                           const ModelFormula& formula,
                           const PlanOptions& options)
{
  const auto min_train = well_formed_min(resolve_levels(formula, dataset));
  const auto groups = group_periods(dataset);
  const std::size_t n = dataset.size();
  if (n < min_train) {
    throw ValidationError("no well-formed split achievable: " + std::to_string(n) +
                          " records, need " + std::to_string(min_train));
  }

  PlanBuilder builder(dataset, options.all_data_target);

  if (!options.overrides.empty()) {
    std::size_t prev = 0;
    for (auto size : options.overrides) {
      if (size <= prev)
        throw ValidationError("override training sizes must be strictly increasing");
      if (size < min_train) {
        throw ValidationError("override training size " + std::to_string(size) +
                              " is below the well-formed minimum " + std::to_string(min_train));
      }
      if (size + 2 > n) {
        throw ValidationError("override training size " + std::to_string(size) +
                              " leaves fewer than two test records");
      }
      prev = size;
      if (mode == ChronologyMode::RemainderTest) {
        builder.add(size, range(size, n), "remainder");
        continue;
      }
      auto g = std::find_if(groups.begin(), groups.end(), [&](const auto& pg) {
        return pg.end == size;
      });
      if (g == groups.end() || g + 1 == groups.end()) {
        throw ValidationError("override training size " + std::to_string(size) +
                              " does not end on a completion-period boundary");
      }
      auto test = period_test_set(dataset, mode, size, *(g + 1));
      if (test.size() < 2) {
        throw ValidationError("override training size " + std::to_string(size) +
                              " yields fewer than two test records");
      }
      builder.add(size, std::move(test), period_label(dataset, (g + 1)->begin));
    }
    return builder.finish();
  }

  std::size_t g = 0;
  std::size_t train_end = 0;
  while (g < groups.size() && train_end < min_train)
    train_end = groups[g++].end;

  for (; g < groups.size(); ++g) {
    if (mode == ChronologyMode::RemainderTest) {
      if (n - train_end < 2)
        break;
      builder.add(train_end, range(train_end, n), "remainder");
    } else {
      auto test = period_test_set(dataset, mode, train_end, groups[g]);
      // Singleton test sets are merged forward into the next training set.
      if (test.size() >= 2)
        builder.add(train_end, std::move(test), period_label(dataset, groups[g].begin));
    }
    train_end = groups[g].end;
  }
  return builder.finish();
}

void write_split_plan(const SplitPlan& plan, const Dataset& dataset, std::ostream& out)
{
  csv::write_row(out,
                 {"split", "target_period", "train_span", "train_size", "test_size",
                  "train_through", "test_period", "train_ids", "test_ids"});
  auto ids = [&](const std::vector<std::size_t>& pos) {
    std::string s;
    for (std::size_t i = 0; i < pos.size(); ++i) {
      if (i)
        s += ';';
      s += dataset[pos[i]].id;
    }
    return s;
  };
  for (const auto& s : plan.splits) {
    csv::write_row(out,
                   {std::to_string(s.ordinal), csv::format_double(s.target.value()),
                    csv::format_double(s.train_span), std::to_string(s.train.size()),
                    std::to_string(s.test.size()), s.train_through, s.test_period, ids(s.train),
                    ids(s.test)});
  }
}

} // namespace driftscope
