#include "cmtsim/recursion.hpp"

#include <algorithm>
#include <cmath>

#include "cmtsim/errors.hpp"

namespace cmtsim {

namespace {

// Join point of the face [l, r]: uniform via the assignment keyed at the
// face's right endpoint, snapped to the nearest grid index strictly inside.
// Requires r - l >= 2.
int64_t snap_join(const UniformAssignment& assign, int64_t l, int64_t r) {
  const double u = assign.at(r);
  int64_t idx = l + int64_t(std::llround(u * double(r - l)));
  return std::clamp<int64_t>(idx, l + 1, r - 1);
}

double resolve_min_len(const Cutoff& c, double h) {
  return c.min_len < 0 ? 4.0 * h : c.min_len;
}

// Face of cm containing grid index a (left <= a < right).
const Face& face_containing(const ConvexMinorant& cm, int64_t a) {
  size_t lo = 0, hi = cm.faces.size();
  while (hi - lo > 1) {
    const size_t mid = (lo + hi) / 2;
    if (cm.faces[mid].left_idx <= a)
      lo = mid;
    else
      hi = mid;
  }
  return cm.faces[lo];
}

}  // namespace

RecursionTree build_recursion(const PathSample& p, const UniformAssignment& assign,
                              int64_t x_idx, Cutoff cutoff) {
  return build_recursion_on(p, assign, 0, x_idx, cutoff);
}

RecursionTree build_recursion_on(const PathSample& p, const UniformAssignment& assign,
                                 int64_t a_idx, int64_t x_idx, Cutoff cutoff) {
  if (!(0 <= a_idx && a_idx < x_idx && x_idx <= p.cells))
    throw usage_error("build_recursion: need 0 <= a_idx < x_idx <= cells");
  const double h = p.step();
  const double min_len = resolve_min_len(cutoff, h);
  RecursionTree tree;
  tree.step = h;
  tree.cutoff = cutoff;
  tree.nodes.push_back(RecNode{a_idx, x_idx, 0.0, double(x_idx - a_idx) * h, 0, -1, false});
  for (size_t cur = 0; cur < tree.nodes.size(); ++cur) {
    RecNode node = tree.nodes[cur];  // copy: the vector reallocates below
    if (node.xi_idx == node.t_idx || node.depth >= cutoff.max_depth ||
        node.mass <= min_len) {
      tree.nodes[cur].leaf = true;
      continue;
    }
    const ConvexMinorant cm = gcm(p, node.t_idx, node.xi_idx);
    for (const Face& f : cm.faces) {
      const int64_t width = f.right_idx - f.left_idx;
      // a one-cell face cannot hold an interior join point: its child is a
      // degenerate leaf of one grid cell
      const int64_t xi = width >= 2 ? snap_join(assign, f.left_idx, f.right_idx)
                                    : f.left_idx;
      tree.nodes.push_back(RecNode{f.left_idx, xi, f.slope, f.length,
                                   node.depth + 1, int32_t(cur), false});
    }
  }
  return tree;
}

double dist0(const RecursionTree& tree, int32_t depth) {
  long double acc = 0.0;
  for (const RecNode& n : tree.nodes) {
    if (n.depth == depth || (n.leaf && n.depth < depth))
      acc += std::sqrt((long double)n.mass);
  }
  return double(acc * kHalfPiSqrt);
}

double dist_root(const PathSample& p, const UniformAssignment& assign, int64_t a_idx,
                 int64_t x_idx, Cutoff cutoff) {
  if (a_idx == x_idx) return 0.0;
  if (!(0 <= a_idx && a_idx < x_idx && x_idx <= p.cells))
    throw usage_error("dist_root: need 0 <= a_idx <= x_idx <= cells");
  const double h = p.step();
  const double min_len = resolve_min_len(cutoff, h);
  struct Frame {
    int64_t t, xi;
    double mass;
    int32_t depth;
  };
  std::vector<Frame> stack;
  stack.push_back(Frame{a_idx, x_idx, double(x_idx - a_idx) * h, 0});
  long double acc = 0.0;
  while (!stack.empty()) {
    const Frame f = stack.back();
    stack.pop_back();
    if (f.depth >= cutoff.max_depth || f.mass <= min_len) {
      acc += std::sqrt((long double)f.mass);
      continue;
    }
    const ConvexMinorant cm = gcm(p, f.t, f.xi);
    for (const Face& face : cm.faces) {
      const int64_t width = face.right_idx - face.left_idx;
      if (width >= 2) {
        stack.push_back(Frame{face.left_idx,
                              snap_join(assign, face.left_idx, face.right_idx),
                              face.length, f.depth + 1});
      } else {
        acc += std::sqrt((long double)face.length);
      }
    }
  }
  return double(acc * kHalfPiSqrt);
}

double dist_pair(const PathSample& p, const UniformAssignment& assign, int64_t x_idx,
                 int64_t y_idx, Cutoff cutoff) {
  if (x_idx == y_idx) return 0.0;
  if (!(0 <= std::min(x_idx, y_idx) && std::max(x_idx, y_idx) <= p.cells))
    throw usage_error("dist_pair: points must be grid indices");
  const double h = p.step();
  const bool depth_capped = cutoff.max_depth < (1 << 29);
  struct Frame {
    int64_t a, b;  // fragment [a, b)
    int64_t A, B;  // marked pair, a <= A <= B <= b
    int32_t depth;
  };
  std::vector<Frame> stack;
  stack.push_back(Frame{0, p.cells, std::min(x_idx, y_idx), std::max(x_idx, y_idx), 0});
  long double acc = 0.0;
  while (!stack.empty()) {
    const Frame f = stack.back();
    stack.pop_back();
    if (f.A == f.B) continue;
    if (f.depth >= cutoff.max_depth) {
      acc += std::sqrt((long double)(f.b - f.a) * h);
      continue;
    }
    const ConvexMinorant cm = gcm(p, f.a, f.B);
    const Face& cut = face_containing(cm, f.A);
    const int64_t kappa = cut.right_idx;
    const int64_t l = cut.left_idx;
    if (kappa < f.B) {
      // Right fragment [kappa, z); z only matters under a finite depth cap.
      int64_t z = f.b;
      if (depth_capped) {
        const int64_t zi = intercept(p, kappa, cut.slope, f.b);
        if (zi != kNoIntercept) z = zi;
      }
      stack.push_back(Frame{kappa, z, kappa, f.B, f.depth + 1});
    }
    if (kappa - l == 1) {
      acc += std::sqrt((long double)h);  // unresolved pair inside one cell
      continue;
    }
    const int64_t eta = snap_join(assign, l, kappa);
    const int64_t A2 = std::min(f.A, eta);
    const int64_t B2 = std::max(f.A, eta);
    if (A2 != B2) stack.push_back(Frame{l, kappa, A2, B2, f.depth + 1});
  }
  return double(acc * kHalfPiSqrt);
}

int64_t common_ancestor(const PathSample& p, const UniformAssignment& assign,
                        int64_t x_idx, int64_t y_idx) {
  if (x_idx == y_idx) return x_idx;
  if (!(0 <= std::min(x_idx, y_idx) && std::max(x_idx, y_idx) <= p.cells))
    throw usage_error("common_ancestor: points must be grid indices");
  int64_t a = 0;
  int64_t A = std::min(x_idx, y_idx);
  int64_t B = std::max(x_idx, y_idx);
  while (A != B) {
    const ConvexMinorant cm = gcm(p, a, B);
    const Face& cut = face_containing(cm, A);
    if (cut.right_idx - cut.left_idx == 1) return cut.left_idx;  // == A
    const int64_t eta = snap_join(assign, cut.left_idx, cut.right_idx);
    if (eta == A) return A;
    a = cut.left_idx;
    B = std::max(A, eta);
    A = std::min(A, eta);
  }
  return A;
}

double dist_pair_ancestor(const PathSample& p, const UniformAssignment& assign,
                          int64_t x_idx, int64_t y_idx, Cutoff cutoff) {
  if (x_idx == y_idx) return 0.0;
  const int64_t w = common_ancestor(p, assign, x_idx, y_idx);
  const double dx = dist_root(p, assign, 0, x_idx, cutoff);
  const double dy = dist_root(p, assign, 0, y_idx, cutoff);
  const double dw = w == 0 ? 0.0 : dist_root(p, assign, 0, w, cutoff);
  return dx + dy - 2.0 * dw;
}

std::vector<std::vector<double>> distance_matrix(const PathSample& p,
                                                 const UniformAssignment& assign,
                                                 std::span<const int64_t> points,
                                                 Cutoff cutoff) {
  if (points.size() < 2) throw usage_error("distance_matrix: need at least 2 points");
  const size_t k = points.size();
  std::vector<std::vector<double>> m(k, std::vector<double>(k, 0.0));
  for (size_t i = 0; i < k; ++i)
    for (size_t j = i + 1; j < k; ++j) {
      const double d = points[i] == points[j]
                           ? 0.0
                           : dist_pair(p, assign, points[i], points[j], cutoff);
      m[i][j] = d;
      m[j][i] = d;
    }
  return m;
}

int64_t component_end_after_one(const PathSample& p) {
  const int64_t n = p.cells;
  double runmin = p.values[0];
  int64_t one = -1;
  for (int64_t i = 0; i <= n; ++i) {
    if (p.time_at(i) > 1.0) {
      one = i;
      break;
    }
  }
  if (one < 0) throw domain_error("component_end_after_one: horizon does not reach past 1");
  for (int64_t i = 1; i <= n; ++i) {
    const double v = p.values[size_t(i)];
    if (i >= one && v <= runmin) return i;
    runmin = std::min(runmin, v);
  }
  throw domain_error(
      "component_end_after_one: component containing 1 touches the grid end; "
      "increase the horizon");
}

std::vector<double> sample_root_distances(const PathSample& p,
                                          const UniformAssignment& assign,
                                          int64_t hi_idx, int64_t count,
                                          const Stream& sampler, Cutoff cutoff) {
  if (hi_idx < 2) throw usage_error("sample_root_distances: window too small");
  std::vector<double> out;
  out.reserve(size_t(count));
  for (int64_t s = 0; s < count; ++s) {
    const int64_t y = sampler.uniform_int(uint64_t(s), 1, hi_idx - 1);
    out.push_back(dist_root(p, assign, 0, y, cutoff));
  }
  return out;
}

double ball_mass(const PathSample& p, const UniformAssignment& assign, double r,
                 Cutoff cutoff, int64_t sample_size, const Stream& sampler) {
  if (!(r >= 0)) throw usage_error("ball_mass: radius must be nonnegative");
  const int64_t R = component_end_after_one(p);
  const auto d = sample_root_distances(p, assign, R, sample_size, sampler, cutoff);
  int64_t hit = 0;
  for (double v : d)
    if (v <= r && v > 0.0) ++hit;
  if (r == 0.0) return 0.0;
  return double(hit) / double(sample_size);
}

}  // namespace cmtsim
