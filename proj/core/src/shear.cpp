#include "cmtsim/shear.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cmtsim/errors.hpp"

namespace cmtsim {

PathSample shear(const PathSample& p, double lambda) {
  PathSample out;
  out.kind = PathKind::sheared;
  out.horizon = p.horizon;
  out.cells = p.cells;
  out.drift = lambda;
  out.values.resize(p.values.size());
  double runmin = std::numeric_limits<double>::infinity();
  for (int64_t i = 0; i <= p.cells; ++i) {
    const double drifted = p.values[size_t(i)] + lambda * p.time_at(i);
    runmin = std::min(runmin, drifted);
    out.values[size_t(i)] = drifted - runmin;
  }
  return out;
}

ZeroSet zero_set(const PathSample& p, double lambda) {
  ZeroSet z;
  z.lambda = lambda;
  // Exact-zero ties break by the index-perturbed comparison key; stored
  // values are never perturbed.
  const double eps0 =
      std::ldexp(p.scale() + std::fabs(lambda) * p.horizon, -60);
  double runmin = std::numeric_limits<double>::infinity();
  for (int64_t i = 0; i <= p.cells; ++i) {
    const double key =
        p.values[size_t(i)] + lambda * p.time_at(i) + double(i) * eps0;
    if (key <= runmin) {
      z.indices.push_back(i);
      runmin = key;
    }
  }
  return z;
}

std::vector<Fragment> fragments_at(const PathSample& p, double lambda) {
  const ZeroSet z = zero_set(p, lambda);
  const double h = p.step();
  std::vector<Fragment> out;
  for (size_t k = 0; k + 1 < z.indices.size(); ++k) {
    const int64_t lo = z.indices[k], hi = z.indices[k + 1];
    out.push_back(Fragment{lo, hi, double(hi - lo) * h});
  }
  if (!z.indices.empty() && z.indices.back() < p.cells) {
    const int64_t lo = z.indices.back();
    out.push_back(Fragment{lo, p.cells, double(p.cells - lo) * h});
  }
  std::sort(out.begin(), out.end(), [](const Fragment& a, const Fragment& b) {
    if (a.mass != b.mass) return a.mass > b.mass;
    return a.lo < b.lo;
  });
  return out;
}

CutData cut_data(const PathSample& p, const UniformAssignment& assign, int64_t x_idx,
                 int64_t y_idx) {
  if (x_idx == y_idx) throw usage_error("cut_data: points must be distinct");
  if (!(0 < std::min(x_idx, y_idx) && std::max(x_idx, y_idx) < p.cells))
    throw usage_error("cut_data: points must be interior grid indices");
  const int64_t lo = std::min(x_idx, y_idx);
  const int64_t hi = std::max(x_idx, y_idx);
  const ConvexMinorant cm = gcm(p, 0, hi);
  // Face whose right boundary is the first minorant vertex past the lower
  // point: that boundary is the cut point.
  const Face* cut = nullptr;
  for (const Face& f : cm.faces) {
    if (f.left_idx <= lo && lo < f.right_idx) {
      cut = &f;
      break;
    }
  }
  if (cut == nullptr) throw usage_error("cut_data: no containing face");
  CutData out;
  out.kappa_idx = cut->right_idx;
  out.tau = cut->slope;
  const int64_t l = cut->left_idx, r = cut->right_idx;
  if (r - l >= 2) {
    const double u = assign.at(r);
    out.eta_idx = std::clamp<int64_t>(l + int64_t(std::llround(u * double(r - l))),
                                      l + 1, r - 1);
  } else {
    out.eta_idx = l;
  }
  out.left_lo = l;
  out.left_hi = r;
  out.right_lo = r;
  const int64_t z = intercept(p, r, cut->slope, p.cells);
  out.right_hi = z == kNoIntercept ? p.cells : z;
  return out;
}

namespace {

// Piecewise-constant fragment mass of one marked point as the cut parameter
// sweeps upward. Pieces k covers [tau[k], tau[k+1]) (last piece ends at
// tau_end); suffix[k] is the integral from tau[k] to tau_end.
struct Ladder {
  std::vector<double> tau;
  std::vector<double> mass;
  double tau_end = 0.0;
  std::vector<double> suffix;

  double tail(double from) const {
    const double lo = std::max(from, tau.empty() ? 0.0 : tau.front());
    if (lo >= tau_end) return 0.0;
    size_t k = 0;
    while (k + 1 < tau.size() && tau[k + 1] <= lo) ++k;
    const double piece_end = k + 1 < tau.size() ? tau[k + 1] : tau_end;
    return mass[k] * (piece_end - lo) + (k + 1 < suffix.size() ? suffix[k + 1] : 0.0);
  }
};

Ladder build_ladder(const PathSample& p, const SlopeScan& scan, int64_t zeta) {
  const double h = p.step();
  // Minorant vertices of [0, zeta], innermost first, with their entry slopes.
  std::vector<int64_t> chain;
  for (int64_t c = zeta; c > 0; c = scan.hull_pred[size_t(c)]) chain.push_back(c);
  chain.push_back(0);
  std::reverse(chain.begin(), chain.end());  // 0 .. zeta, slopes ascending
  // Running-minimum records of the entry slope to the right of zeta.
  std::vector<std::pair<int64_t, double>> records;
  double cur = std::numeric_limits<double>::infinity();
  for (int64_t s = zeta + 1; s <= p.cells; ++s) {
    const double sl = scan.max_left_slope[size_t(s)];
    if (sl < cur) {
      records.push_back({s, sl});
      cur = sl;
      if (cur <= 0.0) break;
    }
  }
  // Initial state at tau = 0.
  size_t li = 0;
  while (li + 1 < chain.size() &&
         scan.max_left_slope[size_t(chain[li + 1])] <= 0.0)
    ++li;
  // Events with positive parameter, ascending; each moves one endpoint.
  struct Event {
    double tau;
    int64_t endpoint;
    bool left;
  };
  std::vector<Event> events;
  for (size_t i = li + 1; i < chain.size(); ++i)
    events.push_back(Event{scan.max_left_slope[size_t(chain[i])], chain[i], true});
  for (const auto& [s, sl] : records)
    if (sl > 0.0) events.push_back(Event{sl, s, false});
  std::sort(events.begin(), events.end(),
            [](const Event& a, const Event& b) { return a.tau < b.tau; });

  Ladder lad;
  int64_t left = chain[li];
  int64_t right = records.empty() ? p.cells : records.back().first;
  double tau_cur = 0.0;
  lad.tau.push_back(tau_cur);
  lad.mass.push_back(double(right - left) * h);
  for (const Event& ev : events) {
    if (ev.tau > tau_cur) {
      lad.tau.push_back(ev.tau);
      tau_cur = ev.tau;
      lad.mass.push_back(lad.mass.back());
    }
    if (ev.left)
      left = ev.endpoint;
    else
      right = ev.endpoint;
    lad.mass.back() = double(right - left) * h;
  }
  lad.tau_end = tau_cur;
  // Drop the trailing zero-length piece and build suffix integrals.
  if (!lad.tau.empty() && lad.tau.back() == lad.tau_end && lad.tau.size() > 1) {
    lad.tau.pop_back();
    lad.mass.pop_back();
  }
  lad.suffix.assign(lad.tau.size() + 1, 0.0);
  for (size_t k = lad.tau.size(); k-- > 0;) {
    const double piece_end = k + 1 < lad.tau.size() ? lad.tau[k + 1] : lad.tau_end;
    lad.suffix[k] = lad.suffix[k + 1] + lad.mass[k] * (piece_end - lad.tau[k]);
  }
  return lad;
}

}  // namespace

std::vector<std::vector<double>> cut_tree_delta(const PathSample& excursion,
                                                std::span<const int64_t> zeta) {
  if (zeta.empty()) throw usage_error("cut_tree_delta: need at least one point");
  for (int64_t z : zeta)
    if (!(0 < z && z < excursion.cells))
      throw usage_error("cut_tree_delta: points must be interior grid indices");
  const SlopeScan scan = scan_left_slopes(excursion);
  const size_t k = zeta.size();
  std::vector<Ladder> lad;
  lad.reserve(k);
  for (int64_t z : zeta) lad.push_back(build_ladder(excursion, scan, z));

  std::vector<std::vector<double>> m(k + 1, std::vector<double>(k + 1, 0.0));
  for (size_t i = 0; i < k; ++i) {
    const double d0 = lad[i].tail(0.0);
    m[0][i + 1] = d0;
    m[i + 1][0] = d0;
  }
  for (size_t i = 0; i < k; ++i)
    for (size_t j = i + 1; j < k; ++j) {
      double d = 0.0;
      if (zeta[i] != zeta[j]) {
        const int64_t lo = std::min(zeta[i], zeta[j]);
        const int64_t hi = std::max(zeta[i], zeta[j]);
        double tau_sep = std::numeric_limits<double>::infinity();
        for (int64_t s = lo + 1; s <= hi; ++s)
          tau_sep = std::min(tau_sep, scan.max_left_slope[size_t(s)]);
        d = lad[i].tail(tau_sep) + lad[j].tail(tau_sep);
      }
      m[i + 1][j + 1] = d;
      m[j + 1][i + 1] = d;
    }
  return m;
}

std::vector<MergeEvent> merges(const PathSample& p, double lambda_lo, double lambda_hi,
                               double min_len) {
  if (!(lambda_lo <= lambda_hi)) throw usage_error("merges: empty lambda window");
  const double h = p.step();
  if (min_len < 4.0 * h) throw usage_error("merges: min_len must be at least 4 grid steps");
  const SlopeScan scan = scan_left_slopes(p);
  std::vector<MergeEvent> out;
  for (int64_t t = 1; t < p.cells; ++t) {
    const double slope = scan.max_left_slope[size_t(t)];
    const double lambda = -slope;
    if (lambda < lambda_lo || lambda > lambda_hi) continue;
    const int64_t l = scan.hull_pred[size_t(t)];
    if (double(t - l) * h < min_len) continue;
    int64_t r = intercept(p, t, slope, p.cells);
    if (r == kNoIntercept) r = p.cells;
    if (double(r - t) * h < min_len) continue;
    out.push_back(MergeEvent{p.time_at(l), p.time_at(t), p.time_at(r), lambda, l, t, r});
  }
  std::sort(out.begin(), out.end(), [](const MergeEvent& a, const MergeEvent& b) {
    if (a.lambda != b.lambda) return a.lambda < b.lambda;
    return a.t_idx < b.t_idx;
  });
  return out;
}

}  // namespace cmtsim
