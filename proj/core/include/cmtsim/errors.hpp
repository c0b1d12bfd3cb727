#pragma once

#include <stdexcept>
#include <string>

namespace cmtsim {

// Caller passed arguments outside an operation's contract.
struct usage_error : std::invalid_argument {
  explicit usage_error(const std::string& what) : std::invalid_argument(what) {}
};

// Arguments are well-formed but the requested computation is not defined for
// them (horizon too short, probability outside (0,1), ...).
struct domain_error : std::domain_error {
  explicit domain_error(const std::string& what) : std::domain_error(what) {}
};

// A sampler could not reach the required statistical quality
// (e.g. effective sample size collapsed under importance resampling).
struct quality_error : std::runtime_error {
  explicit quality_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cmtsim
