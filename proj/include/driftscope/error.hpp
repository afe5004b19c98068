#pragma once

#include <stdexcept>
#include <string>

namespace driftscope {

// Bad inputs: descriptors, CSV content, configuration. CLI exit code 2.
class ValidationError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

// Failures while fitting or sweeping (singular designs, degenerate
// variances, inadmissible bandwidths). CLI exit code 3.
class ComputationError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

} // namespace driftscope
