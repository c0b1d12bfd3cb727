#pragma once

#include <cstdint>
#include <vector>

#include "cmtsim/path.hpp"

namespace cmtsim {

// One linear piece of a greatest convex minorant. Slope is in value per unit
// time; length in time units.
struct Face {
  int64_t left_idx;
  int64_t right_idx;
  double slope;
  double length;
};

// Contact structure of the greatest convex minorant on a grid index range.
// `vertices` holds every contact point including both endpoints; the right
// endpoint b_idx is always listed last but flagged here as an endpoint rather
// than removed, so callers that need the open-ended convention drop it
// explicitly. Collinear contacts are retained in `vertices` and merged into a
// single face; faces are the unit of recursion.
struct ConvexMinorant {
  int64_t a_idx = 0;
  int64_t b_idx = 0;
  std::vector<int64_t> vertices;
  std::vector<Face> faces;
};

// Lower convex hull of the graph points on [a_idx, b_idx] via monotone chain.
// Orientation tests are exact floating comparisons (long double cross
// products); no epsilon.
ConvexMinorant gcm(const PathSample& p, int64_t a_idx, int64_t b_idx);

// O(n^3) oracle: a grid point is a contact iff no chord (i, j) with
// i < k < j passes strictly below it. Identical contact structure to gcm.
ConvexMinorant gcm_bruteforce(const PathSample& p, int64_t a_idx, int64_t b_idx);

constexpr int64_t kNoIntercept = -1;

// Smallest grid index s > t_idx with v[s] <= v[t_idx] + slope * (t_s - t_t),
// searched up to hi_idx (inclusive); kNoIntercept if the line is never
// re-crossed.
int64_t intercept(const PathSample& p, int64_t t_idx, double slope, int64_t hi_idx);
int64_t intercept(const PathSample& p, int64_t t_idx, double slope);

// One forward monotone-chain pass over the whole path. For every index s > 0,
// max_left_slope[s] is the supremum over r < s of the chord slope from r to s
// (equivalently the slope of the last face of the minorant on [0, s]) and
// hull_pred[s] is the contact point attaining it. max_left_slope[0] = -inf.
struct SlopeScan {
  std::vector<double> max_left_slope;
  std::vector<int64_t> hull_pred;
};
SlopeScan scan_left_slopes(const PathSample& p);

// Minorant value at grid index t (linear interpolation on the containing
// face).
double minorant_value(const PathSample& p, const ConvexMinorant& cm, int64_t t);

}  // namespace cmtsim
