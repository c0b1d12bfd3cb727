#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cmtsim/convex_minorant.hpp"
#include "cmtsim/path.hpp"
#include "cmtsim/rng.hpp"

namespace cmtsim {

// Truncation for recursion builds. min_len < 0 resolves to 4 * step at use;
// min_len == 0 means single-cell resolution (exact grid atoms).
struct Cutoff {
  int32_t max_depth = 18;
  double min_len = -1.0;
};

// No depth bound, single-cell atoms. Pairwise distances computed at this
// cutoff from one path + assignment enumerate a pair-independent atom
// decomposition, so the dual-route identity and the metric axioms hold to
// float round-off.
inline Cutoff exact_cutoff() { return Cutoff{1 << 30, 0.0}; }

struct RecNode {
  int64_t t_idx;   // interval start (grid index)
  int64_t xi_idx;  // join-truncated interval end (grid index)
  double slope;    // chord slope of the parent-hull face this node refines
  double mass;     // parent-hull face length, time units
  int32_t depth;
  int32_t parent;  // -1 for the root
  bool leaf;
};

struct RecursionTree {
  double step = 0.0;
  Cutoff cutoff;
  std::vector<RecNode> nodes;  // breadth-first; nodes[0] is the root
};

// Recursive minorant collection rooted at [a_idx, x_idx]: children of a node
// are the faces of the minorant of the path on [t_u, xi_u]; a child's join
// point xi is drawn uniformly on its face via the assignment keyed at the
// face's right endpoint, snapped to the nearest grid index strictly inside.
// One-cell faces become leaves.
RecursionTree build_recursion(const PathSample& p, const UniformAssignment& assign,
                              int64_t x_idx, Cutoff cutoff);
RecursionTree build_recursion_on(const PathSample& p, const UniformAssignment& assign,
                                 int64_t a_idx, int64_t x_idx, Cutoff cutoff);

// sqrt(pi/2) * sum of sqrt(mass) over generation `depth`; leaves shallower
// than `depth` keep contributing their own mass (mass persistence).
double dist0(const RecursionTree& tree, int32_t depth);

// Root-to-point distance: the fully-expanded leaf sum of the recursion on
// [a_idx, x_idx], without materializing the tree.
double dist_root(const PathSample& p, const UniformAssignment& assign, int64_t a_idx,
                 int64_t x_idx, Cutoff cutoff);

// Pairwise distance via the binary cut decomposition (primary route). Always
// expands to single-cell atoms; cutoff.max_depth is honored as a safety bound
// (capped fragments contribute sqrt of their length).
double dist_pair(const PathSample& p, const UniformAssignment& assign, int64_t x_idx,
                 int64_t y_idx, Cutoff cutoff = exact_cutoff());

// Cross-check route: d(0,x) + d(0,y) - 2 d(0, x^y) with the common ancestor
// located by the shared-prefix descent.
double dist_pair_ancestor(const PathSample& p, const UniformAssignment& assign,
                          int64_t x_idx, int64_t y_idx, Cutoff cutoff = exact_cutoff());

// Deepest common point of the recursion closures of x and y (grid index).
int64_t common_ancestor(const PathSample& p, const UniformAssignment& assign,
                        int64_t x_idx, int64_t y_idx);

// Symmetric zero-diagonal matrix of pairwise distances; duplicate points get
// zero mutual distance.
std::vector<std::vector<double>> distance_matrix(const PathSample& p,
                                                 const UniformAssignment& assign,
                                                 std::span<const int64_t> points,
                                                 Cutoff cutoff = exact_cutoff());

// First grid index i with time > 1 where the path touches its running
// minimum (the right end of the component containing time 1). Throws
// domain_error when the component runs into the grid end.
int64_t component_end_after_one(const PathSample& p);

// Root-to-point distances d(0, y) for `count` uniformly sampled grid points
// y in (0, hi_idx); used by ball-mass statistics.
std::vector<double> sample_root_distances(const PathSample& p,
                                          const UniformAssignment& assign,
                                          int64_t hi_idx, int64_t count,
                                          const Stream& sampler, Cutoff cutoff);

// Fraction of sampled points within distance r of the root; points are drawn
// uniformly below the component end R (time > 1 zero-set point).
double ball_mass(const PathSample& p, const UniformAssignment& assign, double r,
                 Cutoff cutoff, int64_t sample_size, const Stream& sampler);

constexpr double kHalfPiSqrt = 1.2533141373155002512;  // sqrt(pi/2)

}  // namespace cmtsim
