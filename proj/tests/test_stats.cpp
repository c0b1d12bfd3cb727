#include <cmath>

#include "cmtsim/errors.hpp"
#include "cmtsim/rng.hpp"
#include "cmtsim/stats.hpp"
#include "doctest.h"

using namespace cmtsim;

namespace {

int64_t poisson_draw(const Stream& s, uint64_t k, double mean) {
  const double u = s.uniform(k);
  double pmf = std::exp(-mean), cum = pmf;
  int64_t x = 0;
  while (u > cum && x < 200) {
    ++x;
    pmf *= mean / double(x);
    cum += pmf;
  }
  return x;
}

}  // namespace

TEST_CASE("one-sample KS of uniforms against the identity CDF") {
  const Stream s(42, "ks", 0);
  std::vector<double> u;
  for (uint64_t k = 0; k < 10000; ++k) u.push_back(s.uniform(k));
  const double d = ks_one_sample(u, [](double x) { return std::clamp(x, 0.0, 1.0); });
  CHECK(d < 0.02);
  CHECK(d > 0.0);
}

TEST_CASE("two-sample KS of a sample against itself is zero") {
  const Stream s(42, "ks2", 0);
  std::vector<double> a;
  for (uint64_t k = 0; k < 500; ++k) a.push_back(s.uniform(k));
  CHECK(ks_two_sample(a, a) == 0.0);
}

TEST_CASE("two-sample KS separates shifted samples") {
  const Stream s(42, "ks3", 0);
  std::vector<double> a, b;
  for (uint64_t k = 0; k < 2000; ++k) {
    a.push_back(s.gaussian(k));
    b.push_back(s.gaussian(5000 + k) + 1.0);
  }
  CHECK(ks_two_sample(a, b) > 0.3);
}

TEST_CASE("poisson fit accepts exact Poisson counts") {
  const Stream s(42, "pois", 0);
  std::vector<int64_t> counts;
  for (uint64_t k = 0; k < 10000; ++k) counts.push_back(poisson_draw(s, k, 3.0));
  CHECK(poisson_fit(counts, 3.0) > 0.001);
}

TEST_CASE("poisson fit rejects a wrong mean") {
  const Stream s(42, "pois2", 0);
  std::vector<int64_t> counts;
  for (uint64_t k = 0; k < 10000; ++k) counts.push_back(poisson_draw(s, k, 3.0));
  CHECK(poisson_fit(counts, 5.0) < 1e-6);
}

TEST_CASE("regularized upper gamma against erfc") {
  for (double x : {0.1, 0.5, 1.0, 2.5, 7.0}) {
    CHECK(gamma_q(0.5, x) == doctest::Approx(std::erfc(std::sqrt(x))).epsilon(1e-10));
  }
  CHECK(gamma_q(2.0, 0.0) == 1.0);
}

TEST_CASE("mean with confidence half-width") {
  std::vector<double> v(100, 2.0);
  for (size_t i = 0; i < v.size(); i += 2) v[i] = 4.0;
  const auto [m, hw] = mean_ci(v, 3.0);
  CHECK(m == doctest::Approx(3.0));
  CHECK(hw == doctest::Approx(3.0 * sample_sd(v) / 10.0));
}

TEST_CASE("rayleigh helpers") {
  CHECK(rayleigh_cdf(0.0, 1.0) == 0.0);
  CHECK(rayleigh_cdf(1.0, 1.0) == doctest::Approx(1.0 - std::exp(-0.5)));
  const double sigma = rayleigh_sigma_from_mean(1.2533141373155003);
  CHECK(sigma == doctest::Approx(1.0));
}

TEST_CASE("sample-size guards") {
  std::vector<double> tiny(10, 1.0);
  CHECK_THROWS_AS(ks_one_sample(tiny, [](double) { return 0.5; }), usage_error);
  CHECK_THROWS_AS(ks_two_sample(tiny, tiny), usage_error);
  CHECK_THROWS_AS(mean_ci(tiny), usage_error);
  std::vector<int64_t> tinyc(10, 1);
  CHECK_THROWS_AS(poisson_fit(tinyc, 1.0), usage_error);
}
