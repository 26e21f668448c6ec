#pragma once

#include <stdexcept>
#include <string>

namespace lanedac {

// Single exception type for contract violations and invalid inputs.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace lanedac
