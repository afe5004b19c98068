#pragma once

#include <chrono>
#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace driftscope {

enum class Granularity
{
  Yearly,
  Monthly
};

// A calendar date whose month and day may be unknown. Datasets such as
// NASA93 and Desharnais only record the completion year.
struct Date
{
  int year = 0;
  unsigned month = 0; // 0 = unknown
  unsigned day = 0;   // 0 = unknown

  bool has_month() const { return month != 0; }
  bool has_day() const { return day != 0; }

  // Months since year 0; requires a month.
  long month_key() const;

  // Ordering used for chronological sorting. Unknown parts sort first.
  auto operator<=>(const Date&) const = default;
  bool operator==(const Date&) const = default;

  std::string to_string() const;
};

// Accepted forms: YYYY, YY, YYYY-MM, YYYY-MM-DD, YYYY/MM/DD, DD-Mon-YYYY,
// DD-Mon-YY (two-digit years >= 50 map to 19xx). Also "Oct 1999" / "Oct-1999".
// Throws ValidationError on anything else, or on impossible dates.
Date parse_date(std::string_view text);

// Start advanced by a number of calendar days. Start must carry a full date.
Date completion_date(const Date& start, long duration_days);

// Start advanced by whole calendar months. An unknown month or day is taken
// as January or the 1st; the day is clamped to the end of the target month.
Date add_months(const Date& start, long months);

// Period key used to group records: the year, or months since year 0.
long period_key(const Date& d, Granularity g);

std::string to_string(Granularity g);
Granularity parse_granularity(std::string_view text);

} // namespace driftscope
