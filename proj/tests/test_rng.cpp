#include <cmath>
#include <set>

#include "cmtsim/rng.hpp"
#include "doctest.h"

using namespace cmtsim;

TEST_CASE("streams are pure functions of their key") {
  const Stream a(42, "w", 7);
  const Stream b(42, "w", 7);
  for (uint64_t k = 0; k < 64; ++k) CHECK(a.word(k) == b.word(k));
  CHECK(a.word(3) == a.word(3));
}

TEST_CASE("distinct keys give distinct streams") {
  const Stream a(42, "w", 7);
  const Stream b(42, "w", 8);
  const Stream c(42, "assoc", 7);
  const Stream d(43, "w", 7);
  std::set<uint64_t> first{a.word(0), b.word(0), c.word(0), d.word(0)};
  CHECK(first.size() == 4);
}

TEST_CASE("uniform variants stay in range") {
  const Stream s(1, "u", 0);
  for (uint64_t k = 0; k < 2000; ++k) {
    const double u = s.uniform(k);
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    const double v = s.uniform_open(k);
    CHECK(v > 0.0);
    CHECK(v < 1.0);
    const int64_t i = s.uniform_int(k, -3, 5);
    CHECK(i >= -3);
    CHECK(i <= 5);
  }
}

TEST_CASE("gaussian moments") {
  const Stream s(9, "g", 0);
  const int64_t n = 100000;
  double sum = 0.0, sq = 0.0;
  for (int64_t k = 0; k < n; ++k) {
    const double g = s.gaussian(uint64_t(k));
    sum += g;
    sq += g * g;
  }
  const double mean = sum / double(n);
  const double var = sq / double(n) - mean * mean;
  CHECK(std::fabs(mean) < 0.02);
  CHECK(std::fabs(var - 1.0) < 0.03);
}

TEST_CASE("assignment is deterministic per index") {
  const UniformAssignment a(42, 3);
  const UniformAssignment b(42, 3);
  for (int64_t i : {0, 1, 17, 12345}) {
    CHECK(a.at(i) == b.at(i));
    CHECK(a.at(i) > 0.0);
    CHECK(a.at(i) < 1.0);
  }
  const UniformAssignment c(42, 4);
  CHECK(a.at(17) != c.at(17));
}
