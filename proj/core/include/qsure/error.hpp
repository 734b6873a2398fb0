#pragma once

#include <stdexcept>
#include <string>

namespace qsure {

// Raised on violated preconditions and rejected input values. Parse-time
// problems in model files are reported as positioned diagnostics instead
// (see model.hpp); this type is for programmatic misuse.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace qsure
