#pragma once

#include <stdexcept>
#include <string>

namespace robustmean {

/// File-system and parse failures; everything else that throws uses the
/// standard exception types.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace robustmean
