#include "driftscope/cocomo.hpp"

#include "driftscope/error.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

namespace driftscope::cocomo {

ModeConstants constants(Mode mode)
{
  switch (mode) {
    case Mode::Organic:
      return {mode, 3.2, 1.05};
    case Mode::SemiDetached:
      return {mode, 3.0, 1.12};
    case Mode::Embedded:
      return {mode, 2.8, 1.20};
  }
  throw std::invalid_argument("unknown COCOMO mode");
}

Mode parse_mode(std::string_view text)
{
  std::string s;
  for (char c : text) {
    if (std::isalpha(static_cast<unsigned char>(c)))
      s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  if (s == "organic")
    return Mode::Organic;
  if (s == "semidetached")
    return Mode::SemiDetached;
  if (s == "embedded")
    return Mode::Embedded;
  throw ValidationError("unknown COCOMO81 mode '" + std::string(text) + "'");
}

std::string to_string(Mode mode)
{
  switch (mode) {
    case Mode::Organic:
      return "organic";
    case Mode::SemiDetached:
      return "semidetached";
    case Mode::Embedded:
      return "embedded";
  }
  return "organic";
}

namespace {

std::size_t slot(std::string_view name)
{
  auto it = std::find(kMultiplierNames.begin(), kMultiplierNames.end(), name);
  if (it == kMultiplierNames.end())
    throw std::invalid_argument("unknown effort multiplier '" + std::string(name) + "'");
  return static_cast<std::size_t>(it - kMultiplierNames.begin());
}

// Boehm (1981) effort multiplier table; 0 marks an undefined rating.
//                             vl    l     n     h     vh    xh
struct Row
{
  std::string_view name;
  double v[6];
};
constexpr Row kTable[] = {
  {"rely", {0.75, 0.88, 1.00, 1.15, 1.40, 0}},
  {"data", {0, 0.94, 1.00, 1.08, 1.16, 0}},
  {"cplx", {0.70, 0.85, 1.00, 1.15, 1.30, 1.65}},
  {"time", {0, 0, 1.00, 1.11, 1.30, 1.66}},
  {"stor", {0, 0, 1.00, 1.06, 1.21, 1.56}},
  {"virt", {0, 0.87, 1.00, 1.15, 1.30, 0}},
  {"turn", {0, 0.87, 1.00, 1.07, 1.15, 0}},
  {"acap", {1.46, 1.19, 1.00, 0.86, 0.71, 0}},
  {"aexp", {1.29, 1.13, 1.00, 0.91, 0.82, 0}},
  {"pcap", {1.42, 1.17, 1.00, 0.86, 0.70, 0}},
  {"vexp", {1.21, 1.10, 1.00, 0.90, 0, 0}},
  {"lexp", {1.14, 1.07, 1.00, 0.95, 0, 0}},
  {"modp", {1.24, 1.10, 1.00, 0.91, 0.82, 0}},
  {"tool", {1.24, 1.10, 1.00, 0.91, 0.83, 0}},
  {"sced", {1.23, 1.08, 1.00, 1.04, 1.10, 0}},
};

} // namespace

double& EffortMultipliers::operator[](std::string_view name)
{
  return values[slot(name)];
}

double EffortMultipliers::operator[](std::string_view name) const
{
  return values[slot(name)];
}

double effective_multiplier(const EffortMultipliers& em)
{
  double product = 1.0;
  for (std::size_t i = 0; i < em.values.size(); ++i) {
    if (!(em.values[i] > 0.0))
      throw std::domain_error("effort multiplier '" + std::string(kMultiplierNames[i]) +
                              "' must be positive");
    product *= em.values[i];
  }
  return product;
}

double effort(const ModeConstants& mode, double kloc, const EffortMultipliers& em)
{
  if (!(kloc > 0.0))
    throw std::domain_error("KLOC must be positive");
  return mode.a * std::pow(kloc, mode.b) * effective_multiplier(em);
}

std::optional<double> rating_value(std::string_view multiplier, std::string_view rating)
{
  std::string r;
  for (char c : rating)
    r.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  static constexpr std::string_view kRatings[] = {"vl", "l", "n", "h", "vh", "xh"};
  auto it = std::find(std::begin(kRatings), std::end(kRatings), r);
  if (it == std::end(kRatings))
    return std::nullopt;
  const auto col = static_cast<std::size_t>(it - std::begin(kRatings));
  for (const auto& row : kTable) {
    if (row.name == multiplier)
      return row.v[col] > 0 ? std::optional<double>(row.v[col]) : std::nullopt;
  }
  return std::nullopt;
}

} // namespace driftscope::cocomo
