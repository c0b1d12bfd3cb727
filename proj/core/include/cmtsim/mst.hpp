#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "cmtsim/rng.hpp"

namespace cmtsim {

// Uniform edge weights on the complete graph over labels 1..n, generated on
// demand from (seed, "w", pair_index) -- O(1) memory, identical weights for
// Prim, Kruskal and the threshold-graph builder. A forced dense matrix is the
// test hook.
class WeightModel {
 public:
  static WeightModel keyed(uint64_t seed, int64_t n);
  // weights for pairs (1,2),(1,3),...,(1,n),(2,3),... in lexicographic order
  static WeightModel forced(int64_t n, std::vector<double> weights);

  double weight(int64_t i, int64_t j) const;  // labels, 1-based, i != j
  int64_t n() const { return n_; }

 private:
  int64_t n_ = 0;
  uint64_t seed_ = 0;
  bool forced_ = false;
  std::vector<double> table_;
};

struct PrimResult {
  int64_t n = 0;
  std::vector<int64_t> order;    // rank (1-based) -> label
  std::vector<int64_t> rank_of;  // label (1-based) -> rank
  struct Edge {
    int64_t u_rank;  // attachment endpoint, rank < v_rank
    int64_t v_rank;  // the newly added vertex's rank (== i for edge i)
    double w;
  };
  std::vector<Edge> edges;  // edges[i-2] is the i-th selection, i = 2..n
  int64_t tie_count = 0;    // weight ties seen during selection (must be 0)
};

// O(n^2) array Prim from label 1. Ties break by smaller candidate label and
// are counted; any tie makes the result unusable for the interval machinery.
PrimResult prim_order(const WeightModel& w);

// Union-find Kruskal oracle; returns label pairs (i < j), sorted.
std::vector<std::pair<int64_t, int64_t>> kruskal_mst(const WeightModel& w);

// Critical-window edge probability 1/n + lambda * n^{-4/3}.
double p_threshold(int64_t n, double lambda);

// Frontier walk along the Prim order at parameter lambda and the ranks that
// start connected components of the threshold graph.
struct Exploration {
  std::vector<double> walk;        // rescaled frontier walk, entries k = 1..n
  std::vector<int64_t> zero_ranks; // component-start ranks, ascending, 1 first
};
Exploration exploration(const PrimResult& pr, const WeightModel& w, double lambda);

// Ranks that start a connected component of the threshold graph at parameter
// lambda (O(n) from the selection weights; agrees with exploration()).
std::vector<int64_t> component_starts(const PrimResult& pr, double lambda);

// Per added vertex i = 2..n: the ranks [l, i) and [i, r] of the two
// rank-intervals merging at that weight, and the rescaled slope
// s = (1 - n w) n^{1/3}.
struct DiscreteMergeRecord {
  struct Entry {
    int64_t l, i, r;
    double s;
  };
  int64_t n = 0;
  std::vector<Entry> entries;  // entries[i-2] for i = 2..n
};
DiscreteMergeRecord merge_record(const PrimResult& pr);

// Representation forest on ranks: edges {j(i), i} with
// j(i) = l(i) + floor(U_i (i - l(i))), kept when -s(i) <= lambda. U_i comes
// from (seed, "repr", i); the second overload takes the uniforms directly
// (test hook).
std::vector<std::pair<int64_t, int64_t>> representation_forest(
    const DiscreteMergeRecord& rec, uint64_t seed, double lambda);
std::vector<std::pair<int64_t, int64_t>> representation_forest(
    const DiscreteMergeRecord& rec, const std::function<double(int64_t)>& u_at,
    double lambda);

// Rescaled cyclic-edge candidates (i, j, lambda_ij) with Y from
// (seed, "cyc", pair_index): a triple is kept when the rank interval (i, j]
// contains no component start at its own parameter.
struct CyclicPoint {
  int64_t i_rank, j_rank;
  double lambda;
};
std::vector<CyclicPoint> cyclic_points(const PrimResult& pr, uint64_t seed,
                                       double lambda_max, int64_t rank_cap);

// Number of retained triples with both ranks in [lo, hi] and parameter at
// most lambda.
int64_t surplus(std::span<const CyclicPoint> pts, int64_t lo_rank, int64_t hi_rank,
                double lambda);

constexpr int64_t kUnreachable = -1;

// Breadth-first hop count between two ranks over an arbitrary rank-edge
// list; kUnreachable when disconnected.
int64_t graph_distance(int64_t n, std::span<const std::pair<int64_t, int64_t>> edges,
                       int64_t a_rank, int64_t b_rank);

}  // namespace cmtsim
