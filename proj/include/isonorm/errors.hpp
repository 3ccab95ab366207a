#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace isonorm {

// Malformed or unusable input. The CLI maps this to exit code 2.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// A mathematical property failed to hold. Carries the offending elements.
class CheckFailure : public std::runtime_error {
 public:
  CheckFailure(const std::string& what, std::vector<std::string> witness = {})
      : std::runtime_error(what), witness_(std::move(witness)) {}
  const std::vector<std::string>& witness() const { return witness_; }

 private:
  std::vector<std::string> witness_;
};

}  // namespace isonorm
