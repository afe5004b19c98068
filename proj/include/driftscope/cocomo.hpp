#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace driftscope::cocomo {

enum class Mode
{
  Organic,
  SemiDetached,
  Embedded
};

struct ModeConstants
{
  Mode mode;
  double a;
  double b;
};

// Basic COCOMO81 development-mode constants.
ModeConstants constants(Mode mode);
Mode parse_mode(std::string_view text);
std::string to_string(Mode mode);

inline constexpr std::array<std::string_view, 15> kMultiplierNames = {
  "acap", "pcap", "aexp", "modp", "tool", "vexp", "lexp", "sced",
  "data", "turn", "virt", "stor", "time", "rely", "cplx"
};

// The fifteen effort multipliers, in kMultiplierNames order. Nominal is 1.
struct EffortMultipliers
{
  std::array<double, 15> values{1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1};

  double& operator[](std::string_view name);
  double operator[](std::string_view name) const;
};

// Product of the fifteen multipliers. Throws std::domain_error on a
// nonpositive multiplier.
double effective_multiplier(const EffortMultipliers& em);

// a * kloc^b * EAF, in person-months (152 person-hours each).
double effort(const ModeConstants& mode, double kloc, const EffortMultipliers& em);

inline constexpr double kHoursPerPersonMonth = 152.0;

// Value of a multiplier for a COCOMO81 rating label (vl, l, n, h, vh, xh,
// case-insensitive). nullopt when the rating is undefined for that driver.
std::optional<double> rating_value(std::string_view multiplier, std::string_view rating);

} // namespace driftscope::cocomo
