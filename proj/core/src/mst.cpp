#include "cmtsim/mst.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>

#include "cmtsim/errors.hpp"

namespace cmtsim {

namespace {

// Index of the unordered pair {i, j} (1-based labels, i < j) in lexicographic
// order (1,2),(1,3),...
uint64_t pair_index(int64_t i, int64_t j, int64_t n) {
  const uint64_t a = uint64_t(i - 1), b = uint64_t(j - 1), m = uint64_t(n);
  return a * m - a * (a + 1) / 2 + (b - a - 1);
}

struct UnionFind {
  std::vector<int64_t> parent;
  explicit UnionFind(int64_t n) : parent(size_t(n) + 1) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int64_t find(int64_t x) {
    while (parent[size_t(x)] != x) {
      parent[size_t(x)] = parent[size_t(parent[size_t(x)])];
      x = parent[size_t(x)];
    }
    return x;
  }
  bool unite(int64_t a, int64_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[size_t(a)] = b;
    return true;
  }
};

}  // namespace

WeightModel WeightModel::keyed(uint64_t seed, int64_t n) {
  if (n < 2) throw usage_error("WeightModel: need n >= 2");
  WeightModel w;
  w.n_ = n;
  w.seed_ = seed;
  w.forced_ = false;
  return w;
}

WeightModel WeightModel::forced(int64_t n, std::vector<double> weights) {
  if (n < 2) throw usage_error("WeightModel: need n >= 2");
  if (int64_t(weights.size()) != n * (n - 1) / 2)
    throw usage_error("WeightModel::forced: need n(n-1)/2 weights");
  WeightModel w;
  w.n_ = n;
  w.forced_ = true;
  w.table_ = std::move(weights);
  return w;
}

double WeightModel::weight(int64_t i, int64_t j) const {
  if (i == j || i < 1 || j < 1 || i > n_ || j > n_)
    throw usage_error("WeightModel::weight: bad labels");
  if (i > j) std::swap(i, j);
  const uint64_t idx = pair_index(i, j, n_);
  if (forced_) return table_[size_t(idx)];
  const Stream s(seed_, "w", idx);
  return s.uniform_open(0);
}

PrimResult prim_order(const WeightModel& w) {
  const int64_t n = w.n();
  PrimResult pr;
  pr.n = n;
  pr.order.assign(size_t(n) + 1, 0);
  pr.rank_of.assign(size_t(n) + 1, 0);
  std::vector<double> best(size_t(n) + 1, std::numeric_limits<double>::infinity());
  std::vector<int64_t> attach(size_t(n) + 1, 0);
  std::vector<bool> picked(size_t(n) + 1, false);

  pr.order[1] = 1;
  pr.rank_of[1] = 1;
  picked[1] = true;
  for (int64_t u = 2; u <= n; ++u) {
    best[size_t(u)] = w.weight(1, u);
    attach[size_t(u)] = 1;
  }
  for (int64_t rank = 2; rank <= n; ++rank) {
    int64_t pick = 0;
    double pw = std::numeric_limits<double>::infinity();
    for (int64_t u = 2; u <= n; ++u) {
      if (picked[size_t(u)]) continue;
      if (best[size_t(u)] < pw) {
        pw = best[size_t(u)];
        pick = u;
      } else if (best[size_t(u)] == pw) {
        ++pr.tie_count;
      }
    }
    picked[size_t(pick)] = true;
    pr.order[size_t(rank)] = pick;
    pr.rank_of[size_t(pick)] = rank;
    pr.edges.push_back(
        PrimResult::Edge{pr.rank_of[size_t(attach[size_t(pick)])], rank, pw});
    for (int64_t u = 2; u <= n; ++u) {
      if (picked[size_t(u)]) continue;
      const double cw = w.weight(pick, u);
      if (cw < best[size_t(u)]) {
        best[size_t(u)] = cw;
        attach[size_t(u)] = pick;
      } else if (cw == best[size_t(u)]) {
        ++pr.tie_count;
        if (pick < attach[size_t(u)]) attach[size_t(u)] = pick;
      }
    }
  }
  return pr;
}

std::vector<std::pair<int64_t, int64_t>> kruskal_mst(const WeightModel& w) {
  const int64_t n = w.n();
  // Threshold filter keeps the candidate list small; escalate until the
  // filtered graph spans.
  double cap = n <= 64 ? 1.0 : std::min(1.0, 8.0 * std::log(double(n)) / double(n));
  for (;;) {
    struct E {
      double w;
      int64_t i, j;
    };
    std::vector<E> edges;
    for (int64_t i = 1; i <= n; ++i)
      for (int64_t j = i + 1; j <= n; ++j) {
        const double wij = w.weight(i, j);
        if (wij <= cap) edges.push_back(E{wij, i, j});
      }
    std::sort(edges.begin(), edges.end(), [](const E& a, const E& b) {
      if (a.w != b.w) return a.w < b.w;
      return std::pair(a.i, a.j) < std::pair(b.i, b.j);
    });
    UnionFind uf(n);
    std::vector<std::pair<int64_t, int64_t>> mst;
    for (const E& e : edges) {
      if (uf.unite(e.i, e.j)) {
        mst.push_back({e.i, e.j});
        if (int64_t(mst.size()) == n - 1) break;
      }
    }
    if (int64_t(mst.size()) == n - 1) {
      std::sort(mst.begin(), mst.end());
      return mst;
    }
    if (cap >= 1.0) throw domain_error("kruskal_mst: graph failed to span");
    cap = std::min(1.0, cap * 2.0);
  }
}

double p_threshold(int64_t n, double lambda) {
  const double p = 1.0 / double(n) + lambda * std::pow(double(n), -4.0 / 3.0);
  if (!(p > 0.0 && p < 1.0))
    throw domain_error("p_threshold: probability outside (0,1)");
  return p;
}

Exploration exploration(const PrimResult& pr, const WeightModel& w, double lambda) {
  const int64_t n = pr.n;
  const double p = p_threshold(n, lambda);
  const double scale = std::pow(double(n), -1.0 / 3.0);
  Exploration ex;
  ex.walk.reserve(size_t(n));
  ex.zero_ranks.push_back(1);
  // has_neighbor[u]: label u (not yet ranked <= k) has a threshold-edge into
  // the first k ranked vertices.
  std::vector<bool> ranked(size_t(n) + 1, false);
  std::vector<bool> has_neighbor(size_t(n) + 1, false);
  int64_t frontier = 0;
  int64_t zeros = 0;
  for (int64_t k = 1; k <= n; ++k) {
    const int64_t vk = pr.order[size_t(k)];
    ranked[size_t(vk)] = true;
    if (has_neighbor[size_t(vk)]) --frontier;
    for (int64_t u = 1; u <= n; ++u) {
      if (ranked[size_t(u)] || has_neighbor[size_t(u)]) continue;
      if (w.weight(vk, u) <= p) {
        has_neighbor[size_t(u)] = true;
        ++frontier;
      }
    }
    if (frontier == 0) {
      ++zeros;
      if (k < n) ex.zero_ranks.push_back(k + 1);
    }
    ex.walk.push_back(scale * double(frontier - zeros));
  }
  return ex;
}

std::vector<int64_t> component_starts(const PrimResult& pr, double lambda) {
  const double p = p_threshold(pr.n, lambda);
  std::vector<int64_t> starts{1};
  for (const auto& e : pr.edges)
    if (e.w > p) starts.push_back(e.v_rank);
  std::sort(starts.begin(), starts.end());
  return starts;
}

DiscreteMergeRecord merge_record(const PrimResult& pr) {
  const int64_t n = pr.n;
  DiscreteMergeRecord rec;
  rec.n = n;
  rec.entries.reserve(size_t(n) - 1);
  // Boundary a in 2..n vanishes exactly at the weight of the i = a selection;
  // the merged intervals at step i are delimited by the surviving boundaries.
  std::vector<double> vanish(size_t(n) + 1, 0.0);
  for (const auto& e : pr.edges) vanish[size_t(e.v_rank)] = e.w;
  const double n13 = std::pow(double(n), 1.0 / 3.0);
  for (const auto& e : pr.edges) {
    const int64_t i = e.v_rank;
    const double wi = e.w;
    int64_t l = i - 1;
    while (l >= 2 && vanish[size_t(l)] < wi) --l;
    if (l < 2) l = 1;
    int64_t r = i;
    while (r + 1 <= n && vanish[size_t(r + 1)] < wi) ++r;
    rec.entries.push_back(
        DiscreteMergeRecord::Entry{l, i, r, (1.0 - double(n) * wi) * n13});
  }
  return rec;
}

std::vector<std::pair<int64_t, int64_t>> representation_forest(
    const DiscreteMergeRecord& rec, const std::function<double(int64_t)>& u_at,
    double lambda) {
  std::vector<std::pair<int64_t, int64_t>> edges;
  for (const auto& e : rec.entries) {
    if (-e.s > lambda) continue;
    int64_t j = e.l + int64_t(u_at(e.i) * double(e.i - e.l));
    j = std::clamp<int64_t>(j, e.l, e.i - 1);
    edges.push_back({j, e.i});
  }
  return edges;
}

std::vector<std::pair<int64_t, int64_t>> representation_forest(
    const DiscreteMergeRecord& rec, uint64_t seed, double lambda) {
  return representation_forest(
      rec,
      [seed](int64_t i) {
        const Stream s(seed, "repr", uint64_t(i));
        return s.uniform(0);
      },
      lambda);
}

std::vector<CyclicPoint> cyclic_points(const PrimResult& pr, uint64_t seed,
                                       double lambda_max, int64_t rank_cap) {
  const int64_t n = pr.n;
  const int64_t cap = std::min<int64_t>(n, rank_cap);
  const double n13 = std::pow(double(n), 1.0 / 3.0);
  const double p_max = 1.0 / double(n) + lambda_max * std::pow(double(n), -4.0 / 3.0);
  // vanish-weight prefix maxima: the rank interval (i, j] holds no component
  // start at parameter lambda iff every boundary in it vanished by then.
  std::vector<double> vanish(size_t(n) + 1, 0.0);
  for (const auto& e : pr.edges) vanish[size_t(e.v_rank)] = e.w;
  // sparse table for range maxima over [i+1, j]
  const int64_t m = cap;
  int levels = 1;
  while ((int64_t(1) << levels) <= m) ++levels;
  std::vector<std::vector<double>> table(static_cast<size_t>(levels));
  table[0].assign(size_t(m) + 1, 0.0);
  for (int64_t a = 1; a <= m; ++a) table[0][size_t(a)] = vanish[size_t(a)];
  for (int lv = 1; lv < levels; ++lv) {
    const int64_t len = int64_t(1) << lv;
    table[size_t(lv)].assign(size_t(m) + 1, 0.0);
    for (int64_t a = 1; a + len - 1 <= m; ++a)
      table[size_t(lv)][size_t(a)] =
          std::max(table[size_t(lv - 1)][size_t(a)],
                   table[size_t(lv - 1)][size_t(a + len / 2)]);
  }
  auto range_max = [&](int64_t a, int64_t b) {  // max vanish over [a, b]
    const int lv = 63 - __builtin_clzll(uint64_t(b - a + 1));
    return std::max(table[size_t(lv)][size_t(a)],
                    table[size_t(lv)][size_t(b - (int64_t(1) << lv) + 1)]);
  };

  std::vector<CyclicPoint> out;
  for (int64_t i = 1; i < cap; ++i)
    for (int64_t j = i + 1; j <= cap; ++j) {
      const Stream s(seed, "cyc", pair_index(i, j, n));
      const double y = s.uniform_open(0);
      if (y > p_max) continue;
      // same component at the triple's own parameter
      if (range_max(i + 1, j) <= y)
        out.push_back(CyclicPoint{i, j, (double(n) * y - 1.0) * n13});
    }
  std::sort(out.begin(), out.end(), [](const CyclicPoint& a, const CyclicPoint& b) {
    if (a.lambda != b.lambda) return a.lambda < b.lambda;
    return std::pair(a.i_rank, a.j_rank) < std::pair(b.i_rank, b.j_rank);
  });
  return out;
}

int64_t surplus(std::span<const CyclicPoint> pts, int64_t lo_rank, int64_t hi_rank,
                double lambda) {
  int64_t c = 0;
  for (const auto& p : pts)
    if (p.lambda <= lambda && p.i_rank >= lo_rank && p.j_rank <= hi_rank) ++c;
  return c;
}

int64_t graph_distance(int64_t n, std::span<const std::pair<int64_t, int64_t>> edges,
                       int64_t a_rank, int64_t b_rank) {
  if (a_rank < 1 || a_rank > n || b_rank < 1 || b_rank > n)
    throw usage_error("graph_distance: rank out of range");
  if (a_rank == b_rank) return 0;
  std::vector<std::vector<int64_t>> adj(size_t(n) + 1);
  for (const auto& [u, v] : edges) {
    adj[size_t(u)].push_back(v);
    adj[size_t(v)].push_back(u);
  }
  std::vector<int64_t> dist(size_t(n) + 1, kUnreachable);
  std::deque<int64_t> q{a_rank};
  dist[size_t(a_rank)] = 0;
  while (!q.empty()) {
    const int64_t u = q.front();
    q.pop_front();
    for (int64_t v : adj[size_t(u)]) {
      if (dist[size_t(v)] != kUnreachable) continue;
      dist[size_t(v)] = dist[size_t(u)] + 1;
      if (v == b_rank) return dist[size_t(v)];
      q.push_back(v);
    }
  }
  return kUnreachable;
}

}  // namespace cmtsim
