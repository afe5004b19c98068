#pragma once

#include "driftscope/chronology.hpp"
#include "driftscope/dataset.hpp"

#include <nlohmann/json.hpp>

#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace driftscope {

enum class DurationUnit
{
  Days,
  Weeks,
  Months
};

std::string to_string(DurationUnit u);
DurationUnit parse_duration_unit(std::string_view text);

struct ColumnBindings
{
  std::string id; // empty: ids are generated from the row number
  std::string completion;
  std::string start;
  std::string duration;
  DurationUnit duration_unit = DurationUnit::Days;
  // attribute name -> CSV column
  std::map<std::string, std::string> attributes;

  bool operator==(const ColumnBindings&) const = default;
};

enum class FilterOp
{
  Equals,
  NotEquals,
  NotMissing
};

// Filters name an attribute (or one of id/completion/start/duration).
struct RowFilter
{
  std::string column;
  FilterOp op = FilterOp::NotMissing;
  std::string value;

  bool operator==(const RowFilter&) const = default;
};

// An attribute computed from bound attributes at load time. The only
// operation is "cocomo81_eaf": the product of effort multipliers, given as
// numbers or as COCOMO81 rating labels.
struct DerivedAttribute
{
  std::string name;
  std::string op = "cocomo81_eaf";
  std::vector<std::string> columns;

  bool operator==(const DerivedAttribute&) const = default;
};

struct DatasetDescriptor
{
  std::string name;
  Granularity granularity = Granularity::Yearly;
  ChronologyMode chronology = ChronologyMode::YearAccumulate;
  ColumnBindings columns;
  std::vector<RowFilter> filters;
  std::vector<DerivedAttribute> derived;
  ModelFormula formula;
  std::vector<std::size_t> overrides;
  std::optional<std::size_t> expected_rows;

  bool operator==(const DatasetDescriptor&) const = default;
};

inline constexpr const char* kBuiltinNames[] = {"nasa93", "desharnais", "kitchenham", "maxwell", "xbc"};

DatasetDescriptor builtin_descriptor(std::string_view name);

nlohmann::ordered_json to_json(const DatasetDescriptor& d);
DatasetDescriptor descriptor_from_json(const nlohmann::json& j);

// A builtin name or a path to a descriptor JSON file.
DatasetDescriptor resolve_descriptor(const std::string& name_or_path);

Dataset load_dataset(const DatasetDescriptor& descriptor, std::istream& csv);
Dataset load_dataset_file(const DatasetDescriptor& descriptor, const std::string& path);

// Inverse of load_dataset for the bound columns.
void write_dataset_csv(const Dataset& dataset, const DatasetDescriptor& descriptor, std::ostream& out);

bool is_missing(std::string_view raw);

} // namespace driftscope
