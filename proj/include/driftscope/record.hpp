#pragma once

#include "driftscope/calendar.hpp"

#include <map>
#include <optional>
#include <string>
#include <variant>

namespace driftscope {

using AttributeValue = std::variant<double, std::string>;

struct ProjectRecord
{
  std::string id;
  Date completion;
  std::optional<Date> start;
  std::optional<long> duration; // in the descriptor's duration unit
  std::map<std::string, AttributeValue> attributes;

  double numeric(const std::string& name) const;
  const std::string& label(const std::string& name) const;

  bool operator==(const ProjectRecord&) const = default;
};

} // namespace driftscope
