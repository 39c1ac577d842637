#pragma once

#include <stdexcept>
#include <string>

namespace semistable {

/// A data file or record failed to parse or failed a cross-check.
/// The message always names the offending file, row or record.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A proof script references something the loaded data set does not provide.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace semistable
