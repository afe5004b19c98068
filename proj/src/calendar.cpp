#include "driftscope/calendar.hpp"

#include "driftscope/error.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <vector>

namespace driftscope {

namespace {

constexpr std::array<std::string_view, 12> kMonthNames = {
  "jan", "feb", "mar", "apr", "may", "jun", "jul", "aug", "sep", "oct", "nov", "dec"
};

std::optional<int> to_int(std::string_view s)
{
  if (s.empty())
    return std::nullopt;
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    return std::nullopt;
  return v;
}

std::optional<unsigned> month_from_name(std::string_view s)
{
  if (s.size() < 3)
    return std::nullopt;
  std::string lower;
  for (char c : s.substr(0, 3))
    lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  for (std::size_t i = 0; i < kMonthNames.size(); ++i) {
    if (kMonthNames[i] == lower)
      return static_cast<unsigned>(i + 1);
  }
  return std::nullopt;
}

std::vector<std::string_view> split_on(std::string_view s, std::string_view seps)
{
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || seps.find(s[i]) != std::string_view::npos) {
      parts.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return parts;
}

Date checked(std::string_view original, int y, unsigned m, unsigned d)
{
  using namespace std::chrono;
  if (m > 12 || (d != 0 && m == 0))
    throw ValidationError("unparseable date '" + std::string(original) + "'");
  if (d != 0 && !year_month_day{year{y}, month{m}, day{d}}.ok())
    throw ValidationError("invalid calendar date '" + std::string(original) + "'");
  return Date{y, m, d};
}

} // namespace

long Date::month_key() const
{
  return static_cast<long>(year) * 12 + static_cast<long>(month) - 1;
}

std::string Date::to_string() const
{
  char buf[32];
  if (has_day())
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", year, month, day);
  else if (has_month())
    std::snprintf(buf, sizeof buf, "%04d-%02u", year, month);
  else
    std::snprintf(buf, sizeof buf, "%04d", year);
  return buf;
}

Date parse_date(std::string_view text)
{
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front())))
    text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())))
    text.remove_suffix(1);
  if (text.empty())
    throw ValidationError("empty date");

  auto parts = split_on(text, "-/ ");
  auto fail = [&]() -> Date {
    throw ValidationError("unparseable date '" + std::string(text) + "'");
  };

  if (parts.size() == 1) {
    auto y = to_int(parts[0]);
    if (!y || (parts[0].size() != 4 && parts[0].size() != 2))
      return fail();
    if (parts[0].size() == 2)
      return Date{*y + (*y >= 50 ? 1900 : 2000), 0, 0};
    return Date{*y, 0, 0};
  }

  // Year-first numeric forms.
  if (parts[0].size() == 4) {
    auto y = to_int(parts[0]);
    auto m = to_int(parts[1]);
    if (!y || !m || *m < 1)
      return fail();
    if (parts.size() == 2)
      return checked(text, *y, static_cast<unsigned>(*m), 0);
    auto d = to_int(parts[2]);
    if (parts.size() != 3 || !d || *d < 1)
      return fail();
    return checked(text, *y, static_cast<unsigned>(*m), static_cast<unsigned>(*d));
  }

  // "Oct 1999" / "Oct-1999"
  if (parts.size() == 2) {
    auto m = month_from_name(parts[0]);
    auto y = to_int(parts[1]);
    if (!m || !y || parts[1].size() != 4)
      return fail();
    return checked(text, *y, *m, 0);
  }

  // DD-Mon-YYYY / DD-Mon-YY
  if (parts.size() == 3) {
    auto d = to_int(parts[0]);
    auto m = month_from_name(parts[1]);
    auto y = to_int(parts[2]);
    if (!d || !m || !y || *d < 1)
      return fail();
    int year = *y;
    if (parts[2].size() == 2)
      year += year >= 50 ? 1900 : 2000;
    else if (parts[2].size() != 4)
      return fail();
    return checked(text, year, *m, static_cast<unsigned>(*d));
  }
  return fail();
}

Date completion_date(const Date& start, long duration_days)
{
  using namespace std::chrono;
  if (!start.has_day())
    throw ValidationError("completion date needs a full start date, got '" +
                          start.to_string() + "'");
  if (duration_days < 0)
    throw ValidationError("negative project duration");
  year_month_day ymd{year{start.year}, month{start.month}, day{start.day}};
  year_month_day end{sys_days{ymd} + days{duration_days}};
  if (!end.ok())
    throw ValidationError("invalid date arithmetic from '" + start.to_string() + "'");
  return Date{static_cast<int>(end.year()),
              static_cast<unsigned>(end.month()),
              static_cast<unsigned>(end.day())};
}

Date add_months(const Date& start, long months)
{
  using namespace std::chrono;
  if (months < 0)
    throw ValidationError("negative project duration");
  const unsigned m0 = start.has_month() ? start.month : 1;
  const unsigned d0 = start.has_day() ? start.day : 1;
  const year_month ym = year{start.year} / month{m0} + std::chrono::months{months};
  const auto last = static_cast<unsigned>((ym / std::chrono::last).day());
  return Date{static_cast<int>(ym.year()), static_cast<unsigned>(ym.month()), std::min(d0, last)};
}

long period_key(const Date& d, Granularity g)
{
  if (g == Granularity::Yearly)
    return d.year;
  if (!d.has_month())
    throw ValidationError("monthly granularity needs a month in '" + d.to_string() + "'");
  return d.month_key();
}

std::string to_string(Granularity g)
{
  return g == Granularity::Yearly ? "yearly" : "monthly";
}

Granularity parse_granularity(std::string_view text)
{
  if (text == "yearly")
    return Granularity::Yearly;
  if (text == "monthly")
    return Granularity::Monthly;
  throw ValidationError("unknown granularity '" + std::string(text) + "'");
}

} // namespace driftscope
