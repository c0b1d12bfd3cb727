#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cmtsim/convex_minorant.hpp"
#include "cmtsim/path.hpp"
#include "cmtsim/rng.hpp"

namespace cmtsim {

// Adds linear drift lambda*t and subtracts the running infimum; output is
// nonnegative with value 0 at t = 0.
PathSample shear(const PathSample& p, double lambda);

// Grid indices where the drifted path attains its running minimum. Membership
// is exact running-min bookkeeping, not an epsilon comparison; index 0 is
// always a member.
struct ZeroSet {
  double lambda;
  std::vector<int64_t> indices;
};
ZeroSet zero_set(const PathSample& p, double lambda);

// Complement interval [lo, hi) of the zero set, mass in time units.
struct Fragment {
  int64_t lo, hi;
  double mass;
};
// All complement intervals, sorted by decreasing mass (ties by position).
std::vector<Fragment> fragments_at(const PathSample& p, double lambda);
// Excursion-side parameterization: cut parameter tau >= 0 means drift -tau.
inline std::vector<Fragment> fragments_at_tau(const PathSample& p, double tau) {
  return fragments_at(p, -tau);
}

// Cut data of a pair: the separation parameter tau, the cut point kappa, the
// join point eta (uniform on the left fragment via the shared assignment),
// and the two fragments produced by the cut.
struct CutData {
  double tau;
  int64_t kappa_idx;
  int64_t eta_idx;
  int64_t left_lo, left_hi;    // fragment of min(x, y): [left_lo, left_hi)
  int64_t right_lo, right_hi;  // fragment of max(x, y): [right_lo, right_hi)
};
CutData cut_data(const PathSample& p, const UniformAssignment& assign, int64_t x_idx,
                 int64_t y_idx);

// Genealogy metric of the fragmentation for marked points zeta[0..k-1] plus
// the root: (k+1) x (k+1) matrix, entry (0, i+1) integrates the mass of the
// fragment containing zeta[i] over the cut parameter, entries (i+1, j+1)
// integrate both fragment masses from the separation parameter on. Integrals
// are event-driven and exact on the grid ladder.
std::vector<std::vector<double>> cut_tree_delta(const PathSample& excursion,
                                                std::span<const int64_t> zeta);

// Coalescent event read off a local minimum t: fragments [l, t) and [t, r)
// merge at parameter lambda = -slope(t). Only events with both gaps at least
// min_len are reported; sorted by lambda.
struct MergeEvent {
  double l_time, t_time, r_time, lambda;
  int64_t l_idx, t_idx, r_idx;
};
std::vector<MergeEvent> merges(const PathSample& p, double lambda_lo, double lambda_hi,
                               double min_len);

}  // namespace cmtsim
