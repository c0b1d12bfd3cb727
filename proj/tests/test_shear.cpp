#include <algorithm>
#include <cmath>
#include <limits>

#include "cmtsim/convex_minorant.hpp"
#include "cmtsim/errors.hpp"
#include "cmtsim/shear.hpp"
#include "doctest.h"
#include "test_helpers.hpp"

using namespace cmtsim;
using cmtsim::test::make_path;
using cmtsim::test::triangle;

namespace {

PathSample excursion_for(uint64_t seed, uint64_t k, int64_t cells) {
  const Stream s(seed, "test/exc", k);
  return sample_excursion(cells, s);
}

// Independent O(n^2) computation of the maximal left chord slope into s.
std::vector<double> brute_sigma(const PathSample& p) {
  std::vector<double> out(p.values.size(), -std::numeric_limits<double>::infinity());
  for (int64_t s = 1; s <= p.cells; ++s) {
    double best = -std::numeric_limits<double>::infinity();
    for (int64_t r = 0; r < s; ++r)
      best = std::max(best, (p.values[size_t(s)] - p.values[size_t(r)]) /
                                (p.time_at(s) - p.time_at(r)));
    out[size_t(s)] = best;
  }
  return out;
}

// Event-exact oracle for the genealogy integral of one marked point, built
// from brute_sigma and the raw endpoint definitions.
double brute_delta0(const PathSample& p, int64_t zeta, double tau_from) {
  const auto sig = brute_sigma(p);
  auto left_end = [&](double tau) {
    int64_t best = 0;
    for (int64_t s = 1; s <= zeta; ++s)
      if (sig[size_t(s)] <= tau) best = s;
    return best;
  };
  auto right_end = [&](double tau) {
    for (int64_t s = zeta + 1; s <= p.cells; ++s)
      if (sig[size_t(s)] <= tau) return s;
    return p.cells;
  };
  const double tau_star = std::max(sig[size_t(zeta)], sig[size_t(zeta + 1)]);
  std::vector<double> breaks{0.0, tau_star};
  for (int64_t s = 1; s <= p.cells; ++s)
    if (sig[size_t(s)] > 0.0 && sig[size_t(s)] < tau_star)
      breaks.push_back(sig[size_t(s)]);
  std::sort(breaks.begin(), breaks.end());
  double acc = 0.0;
  for (size_t k = 0; k + 1 < breaks.size(); ++k) {
    const double lo = std::max(breaks[k], tau_from);
    const double hi = std::max(breaks[k + 1], tau_from);
    if (hi <= lo) continue;
    const double mid = 0.5 * (breaks[k] + breaks[k + 1]);
    const double mass = p.time_at(right_end(mid)) - p.time_at(left_end(mid));
    acc += mass * (hi - lo);
  }
  return acc;
}

}  // namespace

TEST_CASE("shearing a rising line with its own negative slope gives zero") {
  std::vector<double> v(65);
  for (size_t i = 0; i < v.size(); ++i) v[i] = double(i) / 64.0;
  const PathSample p = make_path(std::move(v), 1.0);
  const PathSample sh = shear(p, -2.0);
  for (double x : sh.values) CHECK(x <= 0.0 + 1e-15);
  for (double x : sh.values) CHECK(x >= 0.0);
}

TEST_CASE("shearing an excursion at zero drift is the identity") {
  const PathSample e = excursion_for(42, 0, 512);
  const PathSample sh = shear(e, 0.0);
  for (size_t i = 0; i < e.values.size(); ++i) CHECK(sh.values[i] == e.values[i]);
}

TEST_CASE("triangle shear vanishes on the predicted set") {
  const int64_t n = 1024;
  const PathSample tri = triangle(n);
  const double tau = 0.75;
  const PathSample sh = shear(tri, -tau);
  const auto z = zero_set(tri, -tau);
  // {0} plus the grid points with time >= 1/(1+tau)
  std::vector<int64_t> want{0};
  for (int64_t i = 1; i <= n; ++i)
    if (tri.time_at(i) >= 1.0 / (1.0 + tau) - 1e-12) want.push_back(i);
  CHECK(z.indices == want);
  for (int64_t i : z.indices) CHECK(sh.values[size_t(i)] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("zero sets are monotone under the shear parameter") {
  const PathSample e = excursion_for(42, 1, 1024);
  const auto za = zero_set(e, -0.5).indices;
  const auto zb = zero_set(e, -1.5).indices;
  const auto zc = zero_set(e, -3.0).indices;
  CHECK(std::includes(zb.begin(), zb.end(), za.begin(), za.end()));
  CHECK(std::includes(zc.begin(), zc.end(), zb.begin(), zb.end()));
  CHECK(za.front() == 0);
}

TEST_CASE("fragments at tau zero carry the whole horizon") {
  const PathSample e = excursion_for(42, 2, 512);
  const auto fr = fragments_at_tau(e, 0.0);
  REQUIRE(fr.size() == 1);
  CHECK(fr[0].lo == 0);
  CHECK(fr[0].hi == 512);
  CHECK(fr[0].mass == doctest::Approx(1.0));
}

TEST_CASE("triangle fragments at tau one") {
  const PathSample tri = triangle(1024);
  const auto fr = fragments_at_tau(tri, 1.0);
  REQUIRE(!fr.empty());
  CHECK(fr[0].lo == 0);
  CHECK(fr[0].mass == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("fragment sweeps conserve mass and nest") {
  for (uint64_t k = 0; k < 20; ++k) {
    const PathSample e = excursion_for(7, k, 1024);
    std::vector<std::vector<Fragment>> sweep;
    for (double tau : {0.25, 1.0, 4.0}) sweep.push_back(fragments_at_tau(e, tau));
    for (const auto& fr : sweep) {
      double tot = 0.0;
      for (const auto& f : fr) tot += f.mass;
      CHECK(tot == doctest::Approx(1.0).epsilon(1e-14));
    }
    for (size_t t = 1; t < sweep.size(); ++t) {
      for (const auto& f : sweep[t]) {
        bool inside = false;
        for (const auto& g : sweep[t - 1])
          if (g.lo <= f.lo && f.hi <= g.hi) {
            inside = true;
            break;
          }
        CHECK(inside);
      }
    }
  }
}

TEST_CASE("cut data matches the first-face unroll") {
  const PathSample e = excursion_for(42, 3, 1024);
  const UniformAssignment assign(42, 3);
  const ConvexMinorant cm = gcm(e, 0, 900);
  const int64_t t1 = cm.faces[0].right_idx;
  // pick x below the first vertex so the cut happens at t1
  const int64_t x = std::max<int64_t>(1, t1 / 2);
  const CutData cd = cut_data(e, assign, x, 900);
  CHECK(cd.kappa_idx == t1);
  CHECK(cd.tau == doctest::Approx(cm.faces[0].slope));
  CHECK(cd.left_lo == 0);
  CHECK(cd.left_hi == t1);
  CHECK(cd.eta_idx < cd.kappa_idx);
  CHECK(cd.right_lo == t1);
  CHECK(cd.right_hi > t1);
}

TEST_CASE("cut data is verified by the shear sweep") {
  for (uint64_t k = 0; k < 25; ++k) {
    const PathSample e = excursion_for(11, k, 1024);
    const UniformAssignment assign(11, k);
    const Stream pick(11, "cut", k);
    for (uint64_t q = 0; q < 4; ++q) {
      const int64_t x = pick.uniform_int(2 * q, 1, 1023);
      int64_t y = pick.uniform_int(2 * q + 1, 1, 1023);
      if (y == x) y = (y % 1022) + 1;
      const CutData cd = cut_data(e, assign, x, y);
      const int64_t lo = std::min(x, y), hi = std::max(x, y);
      CHECK(cd.left_lo <= lo);
      CHECK(lo < cd.left_hi);
      CHECK(cd.right_lo <= hi);
      CHECK(hi < cd.right_hi);
      CHECK(cd.eta_idx < cd.kappa_idx);
      const double eps = 1e-9 * std::max(1.0, std::fabs(cd.tau));
      auto separated = [&](double tau) {
        const auto z = zero_set(e, -tau).indices;
        for (int64_t s : z)
          if (s > lo && s <= hi) return true;
        return false;
      };
      CHECK(separated(cd.tau + eps));
      CHECK(!separated(cd.tau - eps));
    }
  }
}

TEST_CASE("genealogy integrals match the brute-force event oracle") {
  for (uint64_t k = 0; k < 10; ++k) {
    const PathSample e = excursion_for(13, k, 256);
    const Stream pick(13, "zeta", k);
    const int64_t z1 = pick.uniform_int(0, 1, 255);
    const auto m1 = cut_tree_delta(e, std::vector<int64_t>{z1});
    CHECK(m1[0][1] == doctest::Approx(brute_delta0(e, z1, 0.0)).epsilon(1e-10));
    CHECK(m1[1][1] == 0.0);
    int64_t z2 = pick.uniform_int(1, 1, 255);
    if (z2 == z1) z2 = (z2 % 254) + 1;
    const auto m2 = cut_tree_delta(e, std::vector<int64_t>{z1, z2});
    const auto sig = brute_sigma(e);
    double tau_sep = 1e300;
    for (int64_t s = std::min(z1, z2) + 1; s <= std::max(z1, z2); ++s)
      tau_sep = std::min(tau_sep, sig[size_t(s)]);
    const double want = brute_delta0(e, z1, tau_sep) + brute_delta0(e, z2, tau_sep);
    CHECK(m2[1][2] == doctest::Approx(want).epsilon(1e-10));
  }
}

TEST_CASE("triangle genealogy distance has the grid closed form") {
  const int64_t n = 512;
  const PathSample tri = triangle(n);
  const int64_t zeta = (3 * n) / 4;  // on the descending edge
  const auto m = cut_tree_delta(tri, std::vector<int64_t>{zeta});
  // On the descent the entry slope of s is (1 - t_s) / t_s, so the fragment
  // of zeta is [0, r(tau)) with r(tau) the first grid point past 1/(1+tau).
  // Summing the event ladder gives the grid form of log(4/3).
  auto slope_at = [&](int64_t s) {
    const double t = tri.time_at(s);
    return (1.0 - t) / t;
  };
  std::vector<double> breaks{0.0};
  for (int64_t s = zeta; s <= n; ++s) breaks.push_back(slope_at(s));
  std::sort(breaks.begin(), breaks.end());
  const double tau_star = std::max(slope_at(zeta), slope_at(zeta + 1));
  double want = 0.0;
  for (size_t k = 0; k + 1 < breaks.size(); ++k) {
    if (breaks[k] >= tau_star) break;
    const double mid = 0.5 * (breaks[k] + breaks[k + 1]);
    int64_t r = n;
    for (int64_t s = zeta + 1; s <= n; ++s)
      if (slope_at(s) <= mid) {
        r = s;
        break;
      }
    const int64_t l = slope_at(zeta) <= mid ? zeta : 0;
    want += (tri.time_at(r) - tri.time_at(l)) *
            (std::min(breaks[k + 1], tau_star) - breaks[k]);
  }
  CHECK(m[0][1] == doctest::Approx(want).epsilon(1e-10));
  CHECK(m[0][1] == doctest::Approx(std::log(4.0 / 3.0)).epsilon(0.05));
}

TEST_CASE("sampled genealogy matrices satisfy the four-point condition") {
  for (uint64_t k = 0; k < 20; ++k) {
    const PathSample e = excursion_for(17, k, 512);
    const Stream pick(17, "zeta4", k);
    std::vector<int64_t> zeta;
    for (int64_t i = 0; i < 5; ++i) zeta.push_back(pick.uniform_int(uint64_t(i), 1, 511));
    const auto m = cut_tree_delta(e, zeta);
    double mx = 1e-300;
    for (const auto& row : m)
      for (double v : row) mx = std::max(mx, v);
    const size_t sz = m.size();
    for (size_t a = 0; a < sz; ++a)
      for (size_t b = a + 1; b < sz; ++b)
        for (size_t c = b + 1; c < sz; ++c)
          for (size_t d = c + 1; d < sz; ++d) {
            double arr[3] = {m[a][b] + m[c][d], m[a][c] + m[b][d], m[a][d] + m[b][c]};
            std::sort(arr, arr + 3);
            CHECK(arr[2] - arr[1] <= 1e-9 * mx);
          }
  }
}

TEST_CASE("single-valley path yields exactly one macroscopic merge") {
  // rise to t = 0.375, dip to a valley at t = 0.5, rise to t = 1
  const int64_t n = 16;
  std::vector<double> v(size_t(n) + 1);
  for (int64_t i = 0; i <= 6; ++i) v[size_t(i)] = 0.1 * double(i);
  v[7] = 0.35;
  v[8] = 0.1;
  for (int64_t i = 9; i <= 16; ++i) v[size_t(i)] = 0.1 + 0.2375 * double(i - 8);
  const PathSample p = make_path(std::move(v), 1.0);
  const auto ev = merges(p, -1.0, 1.0, 0.3);
  REQUIRE(ev.size() == 1);
  CHECK(ev[0].l_idx == 0);
  CHECK(ev[0].t_idx == 8);
  CHECK(ev[0].r_idx == 16);
  CHECK(ev[0].lambda == doctest::Approx(-0.2));
}

TEST_CASE("merge events nest and match the fragment sweep") {
  for (uint64_t k = 0; k < 10; ++k) {
    const Stream s(19, "mergepath", k);
    const PathSample x = sample_parabolic(0.0, 6.0, 4096, s);
    const auto ev = merges(x, -2.0, 1.0, 0.05);
    // nested projections: intervals (l, r) are laminar
    for (size_t i = 0; i < ev.size(); ++i)
      for (size_t j = 0; j < ev.size(); ++j) {
        if (i == j) continue;
        const auto& a = ev[i];
        const auto& b = ev[j];
        const bool disjoint = a.r_idx <= b.l_idx || b.r_idx <= a.l_idx;
        const bool a_in_left = b.l_idx <= a.l_idx && a.r_idx <= b.t_idx;
        const bool a_in_right = b.t_idx <= a.l_idx && a.r_idx <= b.r_idx;
        const bool b_in_left = a.l_idx <= b.l_idx && b.r_idx <= a.t_idx;
        const bool b_in_right = a.t_idx <= b.l_idx && b.r_idx <= a.r_idx;
        CHECK((disjoint || a_in_left || a_in_right || b_in_left || b_in_right));
      }
    // just below the parameter the event's intervals are distinct fragments;
    // just above, the boundary point has merged away
    for (const auto& e : ev) {
      const double eps = 1e-7 * std::max(1.0, std::fabs(e.lambda));
      const auto below = zero_set(x, e.lambda - eps).indices;
      const auto above = zero_set(x, e.lambda + eps).indices;
      CHECK(std::binary_search(below.begin(), below.end(), e.l_idx));
      CHECK(std::binary_search(below.begin(), below.end(), e.t_idx));
      for (int64_t s : below) {
        CHECK((s <= e.l_idx || s == e.t_idx || s >= e.r_idx));
      }
      CHECK(!std::binary_search(above.begin(), above.end(), e.t_idx));
    }
  }
}

TEST_CASE("usage guards") {
  const PathSample e = excursion_for(42, 20, 64);
  const UniformAssignment assign(42, 20);
  CHECK_THROWS_AS(cut_data(e, assign, 5, 5), usage_error);
  CHECK_THROWS_AS(cut_data(e, assign, 0, 5), usage_error);
  CHECK_THROWS_AS(cut_tree_delta(e, std::vector<int64_t>{}), usage_error);
  CHECK_THROWS_AS(merges(e, 1.0, -1.0, 0.1), usage_error);
  CHECK_THROWS_AS(merges(e, -1.0, 1.0, 0.001), usage_error);
}
