#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cmtsim/report.hpp"

namespace cmtsim {

struct SuiteOptions {
  uint64_t seed = 42;
  int64_t reps = -1;  // -1: suite default
  int threads = 0;    // 0: hardware concurrency
  int grid_exp = 14;  // unit-horizon paths use 2^grid_exp cells
};

// Registered suite names, in canonical order.
std::vector<std::string> suite_names();
bool is_suite(const std::string& name);
int64_t suite_default_reps(const std::string& name);

// Runs one statistical verification suite. Deterministic for fixed
// (name, seed, reps) regardless of thread count.
StatReport run_suite(const std::string& name, const SuiteOptions& opt);

}  // namespace cmtsim
