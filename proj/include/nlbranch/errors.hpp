// Error taxonomy shared by the library and the CLI exit-code mapping.
#pragma once

#include <stdexcept>
#include <string>

namespace nlbranch {

// Malformed or invalid configuration / input data. CLI exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A theorem hypothesis does not hold for the given data; the operation
// refuses rather than computing something the theory does not cover.
// Carries the name of the failed flag. CLI exit code 3.
class HypothesisError : public std::runtime_error {
 public:
  explicit HypothesisError(const std::string& flag, const std::string& detail = "")
      : std::runtime_error("hypothesis refusal: " + flag + (detail.empty() ? "" : " (" + detail + ")")),
        flag_(flag) {}
  const std::string& flag() const { return flag_; }

 private:
  std::string flag_;
};

// Solver breakdown, non-convergence, inconsistent brackets. CLI exit code 4.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace nlbranch
