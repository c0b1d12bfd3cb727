#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace cmtsim {

struct Bound {
  double lo, hi;
};

// Result of one verification suite. Serialization is byte-stable for a fixed
// (suite, seed, reps): key order is insertion order and floats are printed
// with 17 significant digits. Runtime is kept out of the serialized form.
struct StatReport {
  std::string suite;
  uint64_t seed = 0;
  int64_t reps = 0;
  std::vector<std::pair<std::string, double>> stats;
  std::vector<std::pair<std::string, Bound>> thresholds;
  bool soft = false;
  bool pass = false;
  double runtime_sec = 0.0;

  void put(const std::string& name, double value) { stats.push_back({name, value}); }
  void bound(const std::string& name, double lo, double hi) {
    thresholds.push_back({name, Bound{lo, hi}});
  }
  double stat(const std::string& name) const;
  // pass = every stat with a named threshold lies inside it
  void evaluate();
  std::string to_json() const;
};

}  // namespace cmtsim
