#include "driftscope/descriptor.hpp"

#include "driftscope/cocomo.hpp"
#include "driftscope/csv.hpp"
#include "driftscope/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

namespace driftscope {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::string trim(std::string_view s)
{
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return std::string(s);
}

std::optional<double> parse_number(std::string_view raw)
{
  const auto s = trim(raw);
  if (s.empty())
    return std::nullopt;
  double v = 0.0;
  const char* first = s.data();
  if (*first == '+')
    ++first;
  auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v))
    return std::nullopt;
  return v;
}

Term numeric(std::string column, Transform t)
{
  return Term{std::move(column), TermKind::Numeric, t, {}, {}};
}

Term categorical(std::string column, std::string reference, std::vector<std::string> levels = {})
{
  return Term{std::move(column), TermKind::Categorical, Transform::Identity, std::move(reference),
              std::move(levels)};
}

std::string to_string(FilterOp op)
{
  switch (op) {
    case FilterOp::Equals:
      return "equals";
    case FilterOp::NotEquals:
      return "not_equals";
    case FilterOp::NotMissing:
      return "not_missing";
  }
  return "not_missing";
}

FilterOp parse_filter_op(std::string_view s)
{
  if (s == "equals")
    return FilterOp::Equals;
  if (s == "not_equals")
    return FilterOp::NotEquals;
  if (s == "not_missing")
    return FilterOp::NotMissing;
  throw ValidationError("unknown filter op '" + std::string(s) + "'");
}

bool same_value(std::string_view a, std::string_view b)
{
  auto na = parse_number(a);
  auto nb = parse_number(b);
  if (na && nb)
    return *na == *nb;
  return trim(a) == trim(b);
}

} // namespace

bool is_missing(std::string_view raw)
{
  const auto s = trim(raw);
  return s.empty() || s == "?" || s == "NA" || s == "N/A" || s == "na" || s == "nan" ||
         s == "NaN";
}

std::string to_string(DurationUnit u)
{
  switch (u) {
    case DurationUnit::Days:
      return "days";
    case DurationUnit::Weeks:
      return "weeks";
    case DurationUnit::Months:
      return "months";
  }
  return "days";
}

DurationUnit parse_duration_unit(std::string_view text)
{
  if (text == "days")
    return DurationUnit::Days;
  if (text == "weeks")
    return DurationUnit::Weeks;
  if (text == "months")
    return DurationUnit::Months;
  throw ValidationError("unknown duration_unit '" + std::string(text) + "'");
}

DatasetDescriptor builtin_descriptor(std::string_view name)
{
  DatasetDescriptor d;
  d.name = std::string(name);
  if (name == "nasa93") {
    d.granularity = Granularity::Yearly;
    d.chronology = ChronologyMode::YearAccumulate;
    d.columns.id = "recordnumber";
    d.columns.completion = "year";
    d.columns.attributes = {{"effort", "act_effort"}, {"kloc", "equivphyskloc"}, {"mode", "mode"}};
    DerivedAttribute eaf{"eaf", "cocomo81_eaf", {}};
    for (auto em : cocomo::kMultiplierNames) {
      d.columns.attributes.emplace(std::string(em), std::string(em));
      eaf.columns.emplace_back(em);
    }
    d.derived.push_back(std::move(eaf));
    d.formula.response = {"effort", Transform::Log};
    d.formula.terms = {numeric("kloc", Transform::Log), numeric("eaf", Transform::Log),
                       categorical("mode", "organic", {"organic", "semidetached", "embedded"})};
    d.expected_rows = 93;
  } else if (name == "desharnais") {
    d.granularity = Granularity::Yearly;
    d.chronology = ChronologyMode::YearAccumulate;
    d.columns.id = "Project";
    d.columns.completion = "YearEnd";
    d.columns.attributes = {{"effort", "Effort"},
                            {"size", "PointsAjust"},
                            {"language", "Language"},
                            {"team_exp", "TeamExp"},
                            {"manager_exp", "ManagerExp"}};
    d.filters = {{"team_exp", FilterOp::NotMissing, ""},
                 {"manager_exp", FilterOp::NotMissing, ""},
                 {"effort", FilterOp::NotMissing, ""},
                 {"size", FilterOp::NotMissing, ""},
                 {"language", FilterOp::NotMissing, ""}};
    d.formula.response = {"effort", Transform::Log};
    d.formula.terms = {numeric("size", Transform::Log), categorical("language", "1", {"1", "2", "3"})};
    d.expected_rows = 77;
  } else if (name == "kitchenham") {
    d.granularity = Granularity::Yearly;
    d.chronology = ChronologyMode::DateFilteredTest;
    d.columns.id = "Project";
    d.columns.start = "Actual.start.date";
    d.columns.duration = "Actual.duration";
    d.columns.attributes = {{"effort", "Actual.effort"},
                            {"size", "Adjusted.function.points"},
                            {"type", "Project.type"},
                            {"client", "Client.code"}};
    d.filters = {{"client", FilterOp::Equals, "2"}};
    d.formula.response = {"effort", Transform::Log};
    d.formula.terms = {numeric("size", Transform::Log), categorical("type", "D", {"D", "P"})};
    d.expected_rows = 105;
  } else if (name == "maxwell") {
    d.granularity = Granularity::Yearly;
    d.chronology = ChronologyMode::DateFilteredTest;
    // Public layout: start year (Syear) and duration in months, no ids.
    d.columns.start = "Syear";
    d.columns.duration = "Duration";
    d.columns.duration_unit = DurationUnit::Months;
    d.columns.attributes = {{"effort", "Effort"}, {"size", "Size"}, {"T08", "T08"}, {"T09", "T09"}};
    d.formula.response = {"effort", Transform::Log};
    d.formula.terms = {numeric("size", Transform::Log), numeric("T08", Transform::Identity),
                       numeric("T09", Transform::Identity)};
    d.expected_rows = 62;
  } else if (name == "xbc") {
    d.granularity = Granularity::Monthly;
    d.chronology = ChronologyMode::RemainderTest;
    d.columns.id = "id";
    d.columns.completion = "completion";
    d.columns.attributes = {{"total_effort", "total_effort"}, {"org_effort", "org_effort"}};
    d.formula.response = {"total_effort", Transform::Log};
    d.formula.terms = {numeric("org_effort", Transform::Log)};
    d.overrides = {7, 10, 12, 13, 14};
    d.expected_rows = 16;
  } else {
    throw ValidationError("unknown descriptor '" + std::string(name) +
                          "' (builtins: nasa93, desharnais, kitchenham, maxwell, xbc)");
  }
  return d;
}

ordered_json to_json(const DatasetDescriptor& d)
{
  ordered_json j;
  j["name"] = d.name;
  j["granularity"] = to_string(d.granularity);
  j["chronology"] = to_string(d.chronology);

  ordered_json cols;
  cols["id"] = d.columns.id;
  cols["completion"] = d.columns.completion;
  cols["start"] = d.columns.start;
  cols["duration"] = d.columns.duration;
  cols["duration_unit"] = to_string(d.columns.duration_unit);
  ordered_json attrs = ordered_json::object();
  for (const auto& [k, v] : d.columns.attributes)
    attrs[k] = v;
  cols["attributes"] = attrs;
  j["columns"] = cols;

  j["filters"] = ordered_json::array();
  for (const auto& f : d.filters) {
    ordered_json fj{{"column", f.column}, {"op", to_string(f.op)}};
    if (f.op != FilterOp::NotMissing)
      fj["value"] = f.value;
    j["filters"].push_back(fj);
  }
  if (!d.derived.empty()) {
    j["derived"] = ordered_json::array();
    for (const auto& dv : d.derived)
      j["derived"].push_back({{"name", dv.name}, {"op", dv.op}, {"columns", dv.columns}});
  }

  ordered_json formula;
  formula["response"] = {{"column", d.formula.response.column},
                         {"transform", to_string(d.formula.response.transform)}};
  formula["terms"] = ordered_json::array();
  for (const auto& t : d.formula.terms) {
    ordered_json tj{{"column", t.column}, {"kind", to_string(t.kind)}};
    if (t.kind == TermKind::Numeric) {
      tj["transform"] = to_string(t.transform);
    } else {
      tj["reference"] = t.reference;
      if (!t.levels.empty())
        tj["levels"] = t.levels;
    }
    formula["terms"].push_back(tj);
  }
  j["formula"] = formula;
  j["overrides"] = d.overrides;
  if (d.expected_rows)
    j["expected_rows"] = *d.expected_rows;
  else
    j["expected_rows"] = nullptr;
  return j;
}

DatasetDescriptor descriptor_from_json(const json& j)
{
  try {
    DatasetDescriptor d;
    d.name = j.at("name").get<std::string>();
    d.granularity = parse_granularity(j.value("granularity", std::string("yearly")));
    d.chronology = parse_chronology(j.value("chronology", std::string("year_accumulate")));

    const auto& cols = j.at("columns");
    auto str = [](const json& o, const char* key) {
      if (!o.contains(key) || o.at(key).is_null())
        return std::string();
      return o.at(key).get<std::string>();
    };
    d.columns.id = str(cols, "id");
    d.columns.completion = str(cols, "completion");
    d.columns.start = str(cols, "start");
    d.columns.duration = str(cols, "duration");
    const auto unit = cols.value("duration_unit", std::string("days"));
    d.columns.duration_unit = parse_duration_unit(unit);
    if (cols.contains("attributes")) {
      for (const auto& [k, v] : cols.at("attributes").items())
        d.columns.attributes[k] = v.get<std::string>();
    }

    if (j.contains("filters")) {
      for (const auto& f : j.at("filters")) {
        RowFilter rf;
        rf.column = f.at("column").get<std::string>();
        rf.op = parse_filter_op(f.at("op").get<std::string>());
        if (f.contains("value")) {
          const auto& v = f.at("value");
          rf.value = v.is_string() ? v.get<std::string>() : v.dump();
        } else if (rf.op != FilterOp::NotMissing) {
          throw ValidationError("filter on '" + rf.column + "' needs a value");
        }
        d.filters.push_back(std::move(rf));
      }
    }
    if (j.contains("derived")) {
      for (const auto& dv : j.at("derived")) {
        DerivedAttribute a;
        a.name = dv.at("name").get<std::string>();
        a.op = dv.value("op", std::string("cocomo81_eaf"));
        if (a.op != "cocomo81_eaf")
          throw ValidationError("unknown derived attribute op '" + a.op + "'");
        a.columns = dv.at("columns").get<std::vector<std::string>>();
        d.derived.push_back(std::move(a));
      }
    }

    const auto& f = j.at("formula");
    d.formula.response.column = f.at("response").at("column").get<std::string>();
    d.formula.response.transform =
      parse_transform(f.at("response").value("transform", std::string("log")));
    for (const auto& t : f.at("terms")) {
      Term term;
      term.column = t.at("column").get<std::string>();
      term.kind = parse_term_kind(t.value("kind", std::string("numeric")));
      if (term.kind == TermKind::Numeric) {
        term.transform = parse_transform(t.value("transform", std::string("identity")));
      } else {
        term.reference = t.at("reference").get<std::string>();
        if (t.contains("levels"))
          term.levels = t.at("levels").get<std::vector<std::string>>();
      }
      d.formula.terms.push_back(std::move(term));
    }
    if (j.contains("overrides") && !j.at("overrides").is_null())
      d.overrides = j.at("overrides").get<std::vector<std::size_t>>();
    if (j.contains("expected_rows") && !j.at("expected_rows").is_null())
      d.expected_rows = j.at("expected_rows").get<std::size_t>();

    // Formula and filter columns must be bound (or derived) attributes.
    std::set<std::string> known;
    for (const auto& [k, _] : d.columns.attributes)
      known.insert(k);
    for (const auto& dv : d.derived) {
      for (const auto& c : dv.columns) {
        if (!known.contains(c))
          throw ValidationError("derived attribute '" + dv.name + "' uses unbound column '" + c + "'");
      }
      known.insert(dv.name);
    }
    auto check = [&](const std::string& c) {
      if (!known.contains(c))
        throw ValidationError("formula column '" + c + "' is not bound in 'columns.attributes'");
    };
    check(d.formula.response.column);
    for (const auto& t : d.formula.terms)
      check(t.column);
    for (const auto& rf : d.filters) {
      if (!known.contains(rf.column) && rf.column != "id" && rf.column != "completion" &&
          rf.column != "start" && rf.column != "duration")
        throw ValidationError("filter column '" + rf.column + "' is not bound");
    }
    if (d.columns.completion.empty() && (d.columns.start.empty() || d.columns.duration.empty()))
      throw ValidationError("descriptor needs a completion column or start + duration columns");
    return d;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed descriptor JSON: ") + e.what());
  }
}

DatasetDescriptor resolve_descriptor(const std::string& name_or_path)
{
  for (auto n : kBuiltinNames) {
    if (name_or_path == n)
      return builtin_descriptor(n);
  }
  if (!std::filesystem::exists(name_or_path))
    throw ValidationError("unknown descriptor '" + name_or_path + "' (not a builtin or a file)");
  std::ifstream in(name_or_path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ValidationError("cannot parse descriptor '" + name_or_path + "': " + e.what());
  }
  return descriptor_from_json(j);
}

Dataset load_dataset(const DatasetDescriptor& descriptor, std::istream& csv_in)
{
  const auto table = csv::read(csv_in);
  const auto& cols = descriptor.columns;

  auto require = [&](const std::string& column) -> std::optional<std::size_t> {
    if (column.empty())
      return std::nullopt;
    auto c = table.column(column);
    if (!c)
      throw ValidationError("CSV is missing bound column '" + column + "'");
    return c;
  };
  const auto id_col = require(cols.id);
  const auto completion_col = require(cols.completion);
  const auto start_col = require(cols.start);
  const auto duration_col = require(cols.duration);
  std::map<std::string, std::size_t> attr_cols;
  for (const auto& [name, column] : cols.attributes)
    attr_cols[name] = *require(column);

  std::map<std::string, TermKind> formula_kinds;
  formula_kinds[descriptor.formula.response.column] = TermKind::Numeric;
  for (const auto& t : descriptor.formula.terms)
    formula_kinds[t.column] = t.kind;
  std::set<std::string> derived_inputs;
  for (const auto& dv : descriptor.derived)
    derived_inputs.insert(dv.columns.begin(), dv.columns.end());

  auto raw_of = [&](const std::vector<std::string>& row, const std::string& name) -> std::string {
    if (auto it = attr_cols.find(name); it != attr_cols.end())
      return row[it->second];
    if (name == "id" && id_col)
      return row[*id_col];
    if (name == "completion" && completion_col)
      return row[*completion_col];
    if (name == "start" && start_col)
      return row[*start_col];
    if (name == "duration" && duration_col)
      return row[*duration_col];
    return {};
  };

  std::vector<ProjectRecord> records;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::string where = "CSV row " + std::to_string(r + 2);

    bool keep = true;
    for (const auto& f : descriptor.filters) {
      const auto raw = raw_of(row, f.column);
      switch (f.op) {
        case FilterOp::NotMissing:
          keep = !is_missing(raw);
          break;
        case FilterOp::Equals:
          keep = !is_missing(raw) && same_value(raw, f.value);
          break;
        case FilterOp::NotEquals:
          keep = is_missing(raw) || !same_value(raw, f.value);
          break;
      }
      if (!keep)
        break;
    }
    if (!keep)
      continue;

    ProjectRecord rec;
    rec.id = id_col ? trim(row[*id_col]) : "row-" + std::to_string(r + 1);
    if (rec.id.empty())
      throw ValidationError(where + ": empty id");

    std::optional<long> duration;
    try {
      if (start_col && !is_missing(row[*start_col]))
        rec.start = parse_date(row[*start_col]);
      if (duration_col && !is_missing(row[*duration_col])) {
        auto v = parse_number(row[*duration_col]);
        if (!v || *v < 0 || std::floor(*v) != *v)
          throw ValidationError("duration '" + row[*duration_col] + "' is not a whole number >= 0");
        duration = static_cast<long>(*v);
      }
      if (completion_col && !is_missing(row[*completion_col])) {
        rec.completion = parse_date(row[*completion_col]);
      } else if (rec.start && duration) {
        rec.completion = cols.duration_unit == DurationUnit::Months
                           ? add_months(*rec.start, *duration)
                           : completion_date(*rec.start, *duration * (cols.duration_unit == DurationUnit::Weeks ? 7 : 1));
      } else {
        throw ValidationError("no completion date (and no start + duration)");
      }
    } catch (const ValidationError& e) {
      throw ValidationError(where + " (" + rec.id + "): " + e.what());
    }
    rec.duration = duration;

    for (const auto& [name, c] : attr_cols) {
      const auto& raw = row[c];
      auto kind = formula_kinds.find(name);
      if (is_missing(raw)) {
        if (kind != formula_kinds.end() || derived_inputs.contains(name))
          throw ValidationError(where + " (" + rec.id + "): missing value for '" + name + "'");
        continue;
      }
      if (kind != formula_kinds.end() && kind->second == TermKind::Categorical) {
        rec.attributes[name] = trim(raw);
        continue;
      }
      auto v = parse_number(raw);
      if (kind != formula_kinds.end() && !v) {
        throw ValidationError(where + " (" + rec.id + "): type mismatch, '" + name +
                              "' = '" + raw + "' is not numeric");
      }
      if (v)
        rec.attributes[name] = *v;
      else
        rec.attributes[name] = trim(raw);
    }

    for (const auto& dv : descriptor.derived) {
      double product = 1.0;
      for (const auto& c : dv.columns) {
        const auto& value = rec.attributes.at(c);
        double m;
        if (const auto* num = std::get_if<double>(&value)) {
          m = *num;
        } else {
          auto rated = cocomo::rating_value(c, std::get<std::string>(value));
          if (!rated) {
            throw ValidationError(where + " (" + rec.id + "): '" + std::get<std::string>(value) +
                                  "' is not a COCOMO81 rating of '" + c + "'");
          }
          m = *rated;
        }
        if (!(m > 0.0))
          throw ValidationError(where + " (" + rec.id + "): nonpositive multiplier '" + c + "'");
        product *= m;
      }
      rec.attributes[dv.name] = product;
    }
    records.push_back(std::move(rec));
  }

  if (descriptor.expected_rows && records.size() != *descriptor.expected_rows) {
    throw ValidationError("dataset '" + descriptor.name + "' has " + std::to_string(records.size()) +
                          " records after filtering, expected " +
                          std::to_string(*descriptor.expected_rows));
  }
  return Dataset(descriptor.name, descriptor.granularity, std::move(records));
}

Dataset load_dataset_file(const DatasetDescriptor& descriptor, const std::string& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw ValidationError("cannot open '" + path + "'");
  return load_dataset(descriptor, in);
}

void write_dataset_csv(const Dataset& dataset, const DatasetDescriptor& descriptor, std::ostream& out)
{
  const auto& cols = descriptor.columns;
  std::vector<std::string> header;
  if (!cols.id.empty())
    header.push_back(cols.id);
  if (!cols.completion.empty())
    header.push_back(cols.completion);
  if (!cols.start.empty())
    header.push_back(cols.start);
  if (!cols.duration.empty())
    header.push_back(cols.duration);
  for (const auto& [_, column] : cols.attributes)
    header.push_back(column);
  csv::write_row(out, header);

  for (const auto& r : dataset.records()) {
    std::vector<std::string> row;
    if (!cols.id.empty())
      row.push_back(r.id);
    if (!cols.completion.empty())
      row.push_back(r.completion.to_string());
    if (!cols.start.empty())
      row.push_back(r.start ? r.start->to_string() : "");
    if (!cols.duration.empty()) {
      if (!r.duration)
        row.emplace_back();
      else
        row.push_back(std::to_string(*r.duration));
    }
    for (const auto& [name, _] : cols.attributes) {
      auto it = r.attributes.find(name);
      if (it == r.attributes.end())
        row.emplace_back();
      else if (const auto* v = std::get_if<double>(&it->second))
        row.push_back(csv::format_double(*v));
      else
        row.push_back(std::get<std::string>(it->second));
    }
    csv::write_row(out, row);
  }
}

} // namespace driftscope
