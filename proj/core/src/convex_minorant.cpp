#include "cmtsim/convex_minorant.hpp"

#include <cmath>

#include "cmtsim/errors.hpp"

namespace cmtsim {

namespace {

// > 0 iff the middle point (b, vb) lies strictly above the segment from
// (a, va) to (c, vc); == 0 iff collinear. Indices are exact integers.
inline long double above_chord(int64_t a, long double va, int64_t b, long double vb,
                               int64_t c, long double vc) {
  return (long double)(c - a) * (vb - va) - (long double)(b - a) * (vc - va);
}

}  // namespace

ConvexMinorant gcm(const PathSample& p, int64_t a_idx, int64_t b_idx) {
  if (!(0 <= a_idx && a_idx < b_idx && b_idx <= p.cells))
    throw usage_error("gcm: need 0 <= a_idx < b_idx <= cells");
  const auto& v = p.values;
  ConvexMinorant cm;
  cm.a_idx = a_idx;
  cm.b_idx = b_idx;
  auto& st = cm.vertices;
  st.reserve(16);
  for (int64_t i = a_idx; i <= b_idx; ++i) {
    while (st.size() >= 2) {
      const int64_t q = st[st.size() - 2];
      const int64_t r = st[st.size() - 1];
      if (above_chord(q, v[size_t(q)], r, v[size_t(r)], i, v[size_t(i)]) > 0)
        st.pop_back();
      else
        break;
    }
    st.push_back(i);
  }
  // Merge collinear runs into faces.
  const double h = p.step();
  size_t lo = 0;
  while (lo + 1 < st.size()) {
    size_t hi = lo + 1;
    while (hi + 1 < st.size() &&
           above_chord(st[lo], v[size_t(st[lo])], st[hi], v[size_t(st[hi])],
                       st[hi + 1], v[size_t(st[hi + 1])]) == 0)
      ++hi;
    const int64_t l = st[lo], r = st[hi];
    cm.faces.push_back(Face{l, r, (v[size_t(r)] - v[size_t(l)]) / (double(r - l) * h),
                            double(r - l) * h});
    lo = hi;
  }
  return cm;
}

ConvexMinorant gcm_bruteforce(const PathSample& p, int64_t a_idx, int64_t b_idx) {
  if (!(0 <= a_idx && a_idx < b_idx && b_idx <= p.cells))
    throw usage_error("gcm_bruteforce: need 0 <= a_idx < b_idx <= cells");
  if (b_idx - a_idx > 64) throw usage_error("gcm_bruteforce: range larger than 64 cells");
  const auto& v = p.values;
  std::vector<int64_t> contacts;
  for (int64_t k = a_idx; k <= b_idx; ++k) {
    bool contact = true;
    for (int64_t i = a_idx; contact && i < k; ++i)
      for (int64_t j = k + 1; j <= b_idx; ++j)
        if (above_chord(i, v[size_t(i)], k, v[size_t(k)], j, v[size_t(j)]) > 0) {
          contact = false;
          break;
        }
    if (contact) contacts.push_back(k);
  }
  ConvexMinorant cm;
  cm.a_idx = a_idx;
  cm.b_idx = b_idx;
  cm.vertices = std::move(contacts);
  const double h = p.step();
  const auto& st = cm.vertices;
  size_t lo = 0;
  while (lo + 1 < st.size()) {
    size_t hi = lo + 1;
    while (hi + 1 < st.size() &&
           above_chord(st[lo], v[size_t(st[lo])], st[hi], v[size_t(st[hi])],
                       st[hi + 1], v[size_t(st[hi + 1])]) == 0)
      ++hi;
    const int64_t l = st[lo], r = st[hi];
    cm.faces.push_back(Face{l, r, (v[size_t(r)] - v[size_t(l)]) / (double(r - l) * h),
                            double(r - l) * h});
    lo = hi;
  }
  return cm;
}

int64_t intercept(const PathSample& p, int64_t t_idx, double slope, int64_t hi_idx) {
  const auto& v = p.values;
  const long double vt = v[size_t(t_idx)];
  const long double h = p.step();
  for (int64_t s = t_idx + 1; s <= hi_idx; ++s) {
    const long double line = vt + (long double)slope * h * (long double)(s - t_idx);
    if ((long double)v[size_t(s)] <= line) return s;
  }
  return kNoIntercept;
}

int64_t intercept(const PathSample& p, int64_t t_idx, double slope) {
  return intercept(p, t_idx, slope, p.cells);
}

SlopeScan scan_left_slopes(const PathSample& p) {
  const auto& v = p.values;
  const int64_t n = p.cells;
  SlopeScan out;
  out.max_left_slope.assign(size_t(n) + 1, 0.0);
  out.hull_pred.assign(size_t(n) + 1, -1);
  out.max_left_slope[0] = -std::numeric_limits<double>::infinity();
  const double h = p.step();
  std::vector<int64_t> st;
  st.reserve(64);
  st.push_back(0);
  for (int64_t i = 1; i <= n; ++i) {
    while (st.size() >= 2) {
      const int64_t q = st[st.size() - 2];
      const int64_t r = st[st.size() - 1];
      if (above_chord(q, v[size_t(q)], r, v[size_t(r)], i, v[size_t(i)]) > 0)
        st.pop_back();
      else
        break;
    }
    const int64_t pred = st.back();
    out.hull_pred[size_t(i)] = pred;
    out.max_left_slope[size_t(i)] =
        (v[size_t(i)] - v[size_t(pred)]) / (double(i - pred) * h);
    st.push_back(i);
  }
  return out;
}

double minorant_value(const PathSample& p, const ConvexMinorant& cm, int64_t t) {
  for (const Face& f : cm.faces) {
    if (t >= f.left_idx && t <= f.right_idx) {
      const double h = p.step();
      return p.values[size_t(f.left_idx)] + f.slope * h * double(t - f.left_idx);
    }
  }
  throw usage_error("minorant_value: index outside domain");
}

}  // namespace cmtsim
