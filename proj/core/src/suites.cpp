#include "cmtsim/suites.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include "cmtsim/convex_minorant.hpp"
#include "cmtsim/errors.hpp"
#include "cmtsim/mst.hpp"
#include "cmtsim/parallel.hpp"
#include "cmtsim/path.hpp"
#include "cmtsim/recursion.hpp"
#include "cmtsim/shear.hpp"
#include "cmtsim/stats.hpp"

namespace cmtsim {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<double> drop_nan(const std::vector<double>& v) {
  std::vector<double> out;
  out.reserve(v.size());
  for (double x : v)
    if (!std::isnan(x)) out.push_back(x);
  return out;
}

PathSample triangle_path(int64_t cells) {
  PathSample p;
  p.kind = PathKind::excursion;
  p.horizon = 1.0;
  p.cells = cells;
  p.values.resize(size_t(cells) + 1);
  for (int64_t i = 0; i <= cells; ++i) {
    const double t = p.time_at(i);
    p.values[size_t(i)] = std::min(t, 1.0 - t);
  }
  return p;
}

// Column x of a Dirichlet(1/2,1/2,1/2) draw from three squared normals.
struct Dir3 {
  double x, y, z;
};
Dir3 dirichlet_half(const Stream& s, uint64_t base) {
  const double a = s.gaussian(base), b = s.gaussian(base + 1), c = s.gaussian(base + 2);
  const double sa = a * a, sb = b * b, sc = c * c;
  const double sum = sa + sb + sc;
  return Dir3{sa / sum, sb / sum, sc / sum};
}

double max_fourpoint_violation(const std::vector<std::vector<double>>& m) {
  const size_t k = m.size();
  double worst = 0.0;
  for (size_t a = 0; a < k; ++a)
    for (size_t b = a + 1; b < k; ++b)
      for (size_t c = b + 1; c < k; ++c)
        for (size_t d = c + 1; d < k; ++d) {
          // the two largest of the three pairings must coincide
          double arr[3] = {m[a][b] + m[c][d], m[a][c] + m[b][d], m[a][d] + m[b][c]};
          std::sort(arr, arr + 3);
          worst = std::max(worst, arr[2] - arr[1]);
        }
  return worst;
}

double max_triangle_violation(const std::vector<std::vector<double>>& m) {
  const size_t k = m.size();
  double worst = 0.0;
  for (size_t a = 0; a < k; ++a)
    for (size_t b = 0; b < k; ++b)
      for (size_t c = 0; c < k; ++c) {
        if (a == b || b == c || a == c) continue;
        worst = std::max(worst, m[a][b] - (m[a][c] + m[c][b]));
      }
  return worst;
}

double matrix_max(const std::vector<std::vector<double>>& m) {
  double mx = 0.0;
  for (const auto& row : m)
    for (double v : row) mx = std::max(mx, v);
  return mx;
}

// ---------------------------------------------------------------- dirichlet

StatReport suite_dirichlet(const SuiteOptions& opt, int64_t reps) {
  const int64_t cells = int64_t(1) << opt.grid_exp;
  std::vector<double> t1(size_t(reps), kNaN);
  parallel_for(reps, opt.threads, [&](int64_t k) {
    const Stream sp(opt.seed, "dirichlet/path", uint64_t(k));
    const Stream sv(opt.seed, "dirichlet/v", uint64_t(k));
    const PathSample e = sample_excursion(cells, sp);
    const int64_t v = sv.uniform_int(0, 1, cells - 1);
    const ConvexMinorant cm = gcm(e, 0, v);
    if (cm.vertices.size() >= 2 && cm.vertices[1] < v)
      t1[size_t(k)] = e.time_at(cm.vertices[1]);
  });
  const auto kept = drop_nan(t1);
  StatReport r;
  r.put("ks_t1_beta", ks_one_sample(kept, [](double x) {
          return std::sqrt(std::clamp(x, 0.0, 1.0));
        }));
  r.put("mean_t1", sample_mean(kept));
  r.put("dropped_fraction", 1.0 - double(kept.size()) / double(reps));
  r.bound("ks_t1_beta", 0.0, 0.02);
  r.bound("mean_t1", 1.0 / 3.0 - 0.005, 1.0 / 3.0 + 0.005);
  return r;
}

// ---------------------------------------------------------------- stickbreak

StatReport suite_stickbreak(const SuiteOptions& opt, int64_t reps) {
  const int64_t cells = int64_t(1) << opt.grid_exp;
  std::vector<double> t1(size_t(reps), kNaN), gap(size_t(reps), kNaN);
  std::vector<double> rt1(size_t(reps), 0.0), rgap(size_t(reps), 0.0);
  parallel_for(reps, opt.threads, [&](int64_t k) {
    const Stream sp(opt.seed, "stickbreak/path", uint64_t(k));
    const Stream sv(opt.seed, "stickbreak/v", uint64_t(k));
    const Stream sr(opt.seed, "stickbreak/ref", uint64_t(k));
    const PathSample e = sample_excursion(cells, sp);
    const int64_t v = sv.uniform_int(0, 1, cells - 1);
    const ConvexMinorant cm = gcm(e, 0, v);
    if (cm.vertices.size() >= 3 && cm.vertices[2] < v) {
      t1[size_t(k)] = e.time_at(cm.vertices[1]);
      gap[size_t(k)] = e.time_at(cm.vertices[2]) - e.time_at(cm.vertices[1]);
    }
    const Dir3 d1 = dirichlet_half(sr, 0);
    const Dir3 d2 = dirichlet_half(sr, 3);
    rt1[size_t(k)] = d1.x;
    rgap[size_t(k)] = d2.x * d1.y;
  });
  const auto kt1 = drop_nan(t1), kgap = drop_nan(gap);
  std::vector<double> ksum(kt1.size()), rsum(rt1.size());
  // sums pair the kept simulated entries and the full reference entries
  {
    const auto kt2 = kt1;
    for (size_t i = 0; i < kt1.size(); ++i) ksum[i] = kt1[i] + kgap[i];
    for (size_t i = 0; i < rt1.size(); ++i) rsum[i] = rt1[i] + rgap[i];
    (void)kt2;
  }
  StatReport r;
  r.put("ks_t1", ks_two_sample(kt1, rt1));
  r.put("ks_gap", ks_two_sample(kgap, rgap));
  r.put("ks_t2", ks_two_sample(ksum, rsum));
  r.put("dropped_fraction", 1.0 - double(kt1.size()) / double(reps));
  r.bound("ks_t1", 0.0, 0.02);
  r.bound("ks_gap", 0.0, 0.02);
  r.bound("ks_t2", 0.0, 0.02);
  return r;
}

// ---------------------------------------------------------------- martingale

StatReport suite_martingale(const SuiteOptions& opt, int64_t reps) {
  const int64_t cells = int64_t(1) << opt.grid_exp;
  constexpr int kDepth = 6;
  std::vector<std::array<double, kDepth>> d(static_cast<size_t>(reps));
  parallel_for(reps, opt.threads, [&](int64_t k) {
    const Stream sp(opt.seed, "martingale/path", uint64_t(k));
    const Stream sv(opt.seed, "martingale/v", uint64_t(k));
    const PathSample e = sample_excursion(cells, sp);
    const UniformAssignment assign(opt.seed, uint64_t(k));
    const int64_t v = sv.uniform_int(0, 1, cells - 1);
    const RecursionTree tree = build_recursion(e, assign, v, Cutoff{kDepth, -1.0});
    for (int n = 1; n <= kDepth; ++n) d[size_t(k)][size_t(n - 1)] = dist0(tree, n);
  });
  std::vector<double> d1(static_cast<size_t>(reps));
  for (int64_t k = 0; k < reps; ++k) d1[size_t(k)] = d[size_t(k)][0];
  double worst_ratio = 0.0;
  for (int n = 2; n <= kDepth; ++n) {
    std::vector<double> diff(static_cast<size_t>(reps));
    for (int64_t k = 0; k < reps; ++k)
      diff[size_t(k)] = d[size_t(k)][size_t(n - 1)] - d[size_t(k)][0];
    const auto [m, hw] = mean_ci(diff, 3.0);
    worst_ratio = std::max(worst_ratio, std::fabs(m) / hw);
  }
  StatReport r;
  r.put("max_flatness_ratio", worst_ratio);  // |mean d_n - mean d_1| / (3 SE)
  r.put("mean_d1", sample_mean(d1));
  r.bound("max_flatness_ratio", 0.0, 1.0);
  r.bound("mean_d1", 0.8355 - 0.03, 0.8355 + 0.03);
  return r;
}

// ---------------------------------------------------------------- rayleigh

StatReport suite_rayleigh(const SuiteOptions& opt, int64_t reps) {
  const int64_t cells = int64_t(1) << opt.grid_exp;
  std::vector<double> d(static_cast<size_t>(reps));
  parallel_for(reps, opt.threads, [&](int64_t k) {
    const Stream sp(opt.seed, "rayleigh/path", uint64_t(k));
    const Stream sv(opt.seed, "rayleigh/v", uint64_t(k));
    const PathSample e = sample_excursion(cells, sp);
    const UniformAssignment assign(opt.seed, uint64_t(k));
    const int64_t v = sv.uniform_int(0, 1, cells - 1);
    d[size_t(k)] = dist_root(e, assign, 0, v, Cutoff{18, -1.0});
  });
  const double sigma = rayleigh_sigma_from_mean(sample_mean(d));
  StatReport r;
  r.put("ks_rayleigh", ks_one_sample(d, [sigma](double x) {
          return rayleigh_cdf(x, sigma);
        }));
  r.put("mean_d", sample_mean(d));
  r.bound("ks_rayleigh", 0.0, 0.03);
  return r;
}

// ---------------------------------------------------------------- fragment

StatReport suite_fragment(const SuiteOptions& opt, int64_t reps) {
  const int64_t cells = 1 << 12;
  const double h = 1.0 / double(cells);
  const std::vector<double> taus{0.25, 0.5, 1.0, 2.0, 4.0};
  std::vector<double> mass_err(size_t(reps), 0.0);
  std::vector<double> nest_bad(size_t(reps), 0.0);
  std::vector<double> zmono_bad(size_t(reps), 0.0);
  parallel_for(reps, opt.threads, [&](int64_t k) {
    const Stream sp(opt.seed, "fragment/path", uint64_t(k));
    const PathSample e = sample_excursion(cells, sp);
    std::vector<std::vector<Fragment>> frs;
    std::vector<std::vector<int64_t>> zs;
    for (double tau : taus) {
      frs.push_back(fragments_at_tau(e, tau));
      zs.push_back(zero_set(e, -tau).indices);
    }
    double werr = 0.0, nb = 0.0, zb = 0.0;
    for (size_t ti = 0; ti < taus.size(); ++ti) {
      double tot = 0.0;
      for (const Fragment& f : frs[ti]) tot += f.mass;
      werr = std::max(werr, std::fabs(tot - 1.0));
      if (ti > 0) {
        // finer fragments sit inside one coarser fragment
        for (const Fragment& f : frs[ti]) {
          bool inside = false;
          for (const Fragment& g : frs[ti - 1])
            if (g.lo <= f.lo && f.hi <= g.hi) {
              inside = true;
              break;
            }
          if (!inside) nb += 1.0;
        }
        // zero sets grow with tau
        if (!std::includes(zs[ti].begin(), zs[ti].end(), zs[ti - 1].begin(),
                           zs[ti - 1].end()))
          zb += 1.0;
      }
    }
    mass_err[size_t(k)] = werr;
    nest_bad[size_t(k)] = nb;
    zmono_bad[size_t(k)] = zb;
  });
  const PathSample tri = triangle_path(cells);
  const auto tfr = fragments_at_tau(tri, 1.0);
  const double lead = tfr.empty() ? 0.0 : tfr.front().mass;
  StatReport r;
  r.put("max_mass_error", *std::max_element(mass_err.begin(), mass_err.end()));
  r.put("nesting_violations",
        std::accumulate(nest_bad.begin(), nest_bad.end(), 0.0));
  r.put("zero_set_monotonicity_violations",
        std::accumulate(zmono_bad.begin(), zmono_bad.end(), 0.0));
  r.put("triangle_leading_mass_error", std::fabs(lead - 0.5));
  r.bound("max_mass_error", 0.0, 1e-12);
  r.bound("nesting_violations", 0.0, 0.0);
  r.bound("zero_set_monotonicity_violations", 0.0, 0.0);
  r.bound("triangle_leading_mass_error", 0.0, h);
  return r;
}

// ---------------------------------------------------------------- cuttree

StatReport suite_cuttree(const SuiteOptions& opt, int64_t reps) {
  const int64_t cells = 1 << 12;
  std::vector<double> tri_rel(size_t(reps), 0.0), fp_rel(size_t(reps), 0.0);
  parallel_for(reps, opt.threads, [&](int64_t k) {
    const Stream sp(opt.seed, "cuttree/path", uint64_t(k));
    const Stream sz(opt.seed, "cuttree/zeta", uint64_t(k));
    const PathSample e = sample_excursion(cells, sp);
    const int64_t npts = 1 + (k % 8);
    std::vector<int64_t> zeta;
    for (int64_t i = 0; i < npts; ++i)
      zeta.push_back(sz.uniform_int(uint64_t(i), 1, cells - 1));
    const auto m = cut_tree_delta(e, zeta);
    const double mx = std::max(matrix_max(m), 1e-300);
    tri_rel[size_t(k)] = max_triangle_violation(m) / mx;
    fp_rel[size_t(k)] = max_fourpoint_violation(m) / mx;
  });
  StatReport r;
  r.put("max_triangle_violation_rel",
        *std::max_element(tri_rel.begin(), tri_rel.end()));
  r.put("max_fourpoint_violation_rel",
        *std::max_element(fp_rel.begin(), fp_rel.end()));
  r.bound("max_triangle_violation_rel", 0.0, 1e-9);
  r.bound("max_fourpoint_violation_rel", 0.0, 1e-9);
  return r;
}

// ---------------------------------------------------------------- surplus

StatReport suite_surplus(const SuiteOptions& opt, int64_t reps) {
  const int64_t n = 2000;
  const double lambda = 0.0;
  const double window = 2.0;  // time units; ranks below window * n^{2/3}
  const int64_t cap = int64_t(window * std::pow(double(n), 2.0 / 3.0));
  std::vector<double> disc(size_t(reps), 0.0), cont(size_t(reps), 0.0);
  parallel_for(reps, opt.threads, [&](int64_t k) {
    // discrete side
    const Stream sk(opt.seed, "surplus/disc", uint64_t(k));
    const uint64_t wseed = sk.word(0);
    const auto pr = prim_order(WeightModel::keyed(wseed, n));
    const auto starts = component_starts(pr, lambda);
    const auto cyc = cyclic_points(pr, wseed, lambda, cap);
    double total = 0.0;
    for (size_t s = 0; s < starts.size(); ++s) {
      const int64_t lo = starts[s];
      const int64_t hi = (s + 1 < starts.size() ? starts[s + 1] : n + 1) - 1;
      if (hi > cap) continue;
      total += double(surplus(cyc, lo, hi, lambda));
    }
    disc[size_t(k)] = total;
    // continuum side
    const Stream sc(opt.seed, "surplus/cont", uint64_t(k));
    const double horizon = 4.0;
    const PathSample x = sample_parabolic(lambda, horizon, parabolic_cells(horizon), sc);
    const auto z = zero_set(x, 0.0);
    const double h = x.step();
    double area_total = 0.0;
    for (size_t s = 0; s + 1 <= z.indices.size(); ++s) {
      const int64_t lo = z.indices[s];
      const int64_t hi = s + 1 < z.indices.size() ? z.indices[s + 1] : x.cells;
      if (x.time_at(hi) > window) continue;
      const double base = x.values[size_t(lo)];
      double area = 0.0;
      for (int64_t i = lo; i < hi; ++i) area += x.values[size_t(i)] - base;
      area_total += area * h;
    }
    cont[size_t(k)] = area_total;
  });
  const auto [md, hd] = mean_ci(disc, 3.0);
  const auto [mc, hc] = mean_ci(cont, 3.0);
  StatReport r;
  r.put("mean_surplus_discrete", md);
  r.put("mean_area_continuum", mc);
  const double gap = std::fabs(md - mc);
  const double combined = std::sqrt(hd * hd + hc * hc);
  r.put("gap_over_3se", gap / combined);
  r.bound("gap_over_3se", 0.0, 1.0);
  return r;
}

// ---------------------------------------------------------------- position

StatReport suite_position(const SuiteOptions& opt, int64_t reps) {
  const std::vector<double> lambdas{5.0, 8.0};
  std::vector<double> r5(static_cast<size_t>(reps)), r8(static_cast<size_t>(reps));
  std::vector<double> l5(static_cast<size_t>(reps)), l8(static_cast<size_t>(reps));
  parallel_for(reps, opt.threads, [&](int64_t k) {
    for (size_t li = 0; li < lambdas.size(); ++li) {
      const double lambda = lambdas[li];
      const double horizon = 2.0 * lambda + 4.0;
      const Stream sp(opt.seed, li == 0 ? "position/path5" : "position/path8",
                      uint64_t(k));
      const PathSample x =
          sample_parabolic(lambda, horizon, parabolic_cells(horizon), sp);
      const auto z = zero_set(x, 0.0);
      double rl = horizon, ll = 0.0;
      for (int64_t idx : z.indices) {
        const double t = x.time_at(idx);
        if (t < 1.0) ll = t;
        if (t > 1.0) {
          rl = t;
          break;
        }
      }
      (li == 0 ? r5 : r8)[size_t(k)] = rl;
      (li == 0 ? l5 : l8)[size_t(k)] = ll;
    }
  });
  auto survival = [&](const std::vector<double>& l, double lim) {
    int64_t c = 0;
    for (double v : l)
      if (v > lim) ++c;
    return double(c) / double(l.size());
  };
  StatReport r;
  r.put("mean_R_lambda5", sample_mean(r5));
  r.put("mean_R_lambda8", sample_mean(r8));
  r.put("surv_L5_x4", survival(l5, 4.0 / 25.0));
  r.put("surv_L5_x16", survival(l5, 16.0 / 25.0));
  r.put("surv_L8_x4", survival(l8, 4.0 / 64.0));
  r.put("surv_L8_x16", survival(l8, 16.0 / 64.0));
  r.put("decay_L5", survival(l5, 4.0 / 25.0) - survival(l5, 16.0 / 25.0));
  r.put("decay_L8", survival(l8, 4.0 / 64.0) - survival(l8, 16.0 / 64.0));
  r.bound("mean_R_lambda5", 9.0, 11.0);
  r.bound("mean_R_lambda8", 15.0, 17.0);
  r.bound("surv_L5_x16", 0.0, 0.10);
  r.bound("surv_L8_x16", 0.0, 0.10);
  r.bound("decay_L5", 0.0, 1.0);
  r.bound("decay_L8", 0.0, 1.0);
  return r;
}

// ---------------------------------------------------------------- dimension

StatReport suite_dimension(const SuiteOptions& opt, int64_t reps) {
  const double lambda = 2.0;
  const double horizon = 2.0 * lambda + 4.0;
  const int64_t cells = parabolic_cells(horizon);
  const std::vector<double> radii{0.4, 0.3, 0.2, 0.1, 0.05};
  const int64_t per_path = 256;
  std::vector<std::array<double, 5>> frac(static_cast<size_t>(reps));
  std::vector<double> ok(size_t(reps), 0.0);
  parallel_for(reps, opt.threads, [&](int64_t k) {
    const Stream sp(opt.seed, "dimension/path", uint64_t(k));
    const Stream sy(opt.seed, "dimension/y", uint64_t(k));
    const PathSample x = sample_parabolic(lambda, horizon, cells, sp);
    const UniformAssignment assign(opt.seed, uint64_t(k));
    int64_t r_idx = 0;
    try {
      r_idx = component_end_after_one(x);
    } catch (const domain_error&) {
      frac[size_t(k)].fill(kNaN);
      return;
    }
    const auto dists =
        sample_root_distances(x, assign, r_idx, per_path, sy, Cutoff{18, -1.0});
    for (size_t ri = 0; ri < radii.size(); ++ri) {
      int64_t c = 0;
      for (double dv : dists)
        if (dv <= radii[ri]) ++c;
      frac[size_t(k)][ri] = double(c) / double(per_path);
    }
    ok[size_t(k)] = 1.0;
  });
  // pooled mass at each radius, then the log-log OLS slope
  double slope = 0.0;
  {
    std::vector<double> lx, ly;
    for (size_t ri = 0; ri < radii.size(); ++ri) {
      double acc = 0.0;
      int64_t cnt = 0;
      for (int64_t k = 0; k < reps; ++k)
        if (!std::isnan(frac[size_t(k)][ri])) {
          acc += frac[size_t(k)][ri];
          ++cnt;
        }
      const double mass = acc / double(std::max<int64_t>(cnt, 1));
      if (mass > 0.0) {
        lx.push_back(std::log(radii[ri]));
        ly.push_back(std::log(mass));
      }
    }
    const double mx = sample_mean(lx), my = sample_mean(ly);
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < lx.size(); ++i) {
      num += (lx[i] - mx) * (ly[i] - my);
      den += (lx[i] - mx) * (lx[i] - mx);
    }
    slope = num / den;
  }
  StatReport r;
  r.soft = true;
  r.put("loglog_slope", slope);
  r.put("usable_replicas", std::accumulate(ok.begin(), ok.end(), 0.0));
  r.bound("loglog_slope", 2.2, 3.5);
  return r;
}

// ---------------------------------------------------------------- mst_limit

StatReport suite_mst_limit(const SuiteOptions& opt, int64_t reps) {
  const double lambda = 4.0;
  const int64_t n = 2000;
  const double n13 = std::pow(double(n), 1.0 / 3.0);
  const double n23 = std::pow(double(n), 2.0 / 3.0);
  std::vector<double> disc(size_t(reps), kNaN), cont(size_t(reps), kNaN);
  parallel_for(reps, opt.threads, [&](int64_t k) {
    // discrete side: rescaled MST distance from rank 1 to a uniform rank in
    // the component window of rank n^{2/3}
    const Stream sk(opt.seed, "mstlimit/disc", uint64_t(k));
    const auto pr = prim_order(WeightModel::keyed(sk.word(0), n));
    const auto starts = component_starts(pr, lambda);
    int64_t rwin = -1;
    for (int64_t s : starts)
      if (double(s) > n23) {
        rwin = s;
        break;
      }
    if (rwin > 2) {
      std::vector<std::pair<int64_t, int64_t>> edges;
      edges.reserve(pr.edges.size());
      for (const auto& e : pr.edges) edges.push_back({e.u_rank, e.v_rank});
      const int64_t j = sk.uniform_int(1, 1, rwin - 1);
      disc[size_t(k)] = double(graph_distance(n, edges, 1, j)) / n13;
    }
    // continuum side
    const Stream sc(opt.seed, "mstlimit/cont", uint64_t(k));
    const Stream sy(opt.seed, "mstlimit/y", uint64_t(k));
    const double horizon = 2.0 * lambda + 4.0;
    const PathSample x =
        sample_parabolic(lambda, horizon, parabolic_cells(horizon), sc);
    const UniformAssignment assign(opt.seed, uint64_t(k));
    try {
      const int64_t r_idx = component_end_after_one(x);
      const int64_t y = sy.uniform_int(0, 1, r_idx - 1);
      cont[size_t(k)] = dist_root(x, assign, 0, y, Cutoff{18, -1.0});
    } catch (const domain_error&) {
    }
  });
  StatReport r;
  r.soft = true;
  const auto d = drop_nan(disc), c = drop_nan(cont);
  r.put("ks_two_sample", ks_two_sample(d, c));
  r.put("mean_discrete", sample_mean(d));
  r.put("mean_continuum", sample_mean(c));
  r.bound("ks_two_sample", 0.0, 0.1);
  return r;
}

// ------------------------------------------------------------ representation

StatReport suite_representation(const SuiteOptions& opt, int64_t reps) {
  const int64_t n = 50;
  std::vector<double> bad(size_t(reps), 0.0);
  std::vector<double> drep(static_cast<size_t>(reps)), dtrue(static_cast<size_t>(reps));
  parallel_for(reps, opt.threads, [&](int64_t k) {
    const Stream sk(opt.seed, "representation/disc", uint64_t(k));
    const uint64_t wseed = sk.word(0);
    const auto pr = prim_order(WeightModel::keyed(wseed, n));
    const auto rec = merge_record(pr);
    const auto forest = representation_forest(rec, wseed, 1e18);
    double violations = 0.0;
    if (int64_t(forest.size()) != n - 1) violations += 1.0;
    {
      std::vector<int64_t> parent(size_t(n) + 1);
      std::iota(parent.begin(), parent.end(), 0);
      auto find = [&](int64_t v) {
        while (parent[size_t(v)] != v) {
          parent[size_t(v)] = parent[size_t(parent[size_t(v)])];
          v = parent[size_t(v)];
        }
        return v;
      };
      for (const auto& [a, b] : forest) {
        const int64_t ra = find(a), rb = find(b);
        if (ra == rb) violations += 1.0;  // cycle
        parent[size_t(ra)] = rb;
      }
      int64_t roots = 0;
      for (int64_t v = 1; v <= n; ++v)
        if (find(v) == v) ++roots;
      if (roots != 1) violations += 1.0;  // not spanning
    }
    // filtration: edge sets grow with lambda
    const auto f_lo = representation_forest(rec, wseed, -1.0);
    const auto f_mid = representation_forest(rec, wseed, 0.5);
    if (f_lo.size() > f_mid.size() || f_mid.size() > forest.size()) violations += 1.0;
    for (const auto& e : f_lo)
      if (std::find(f_mid.begin(), f_mid.end(), e) == f_mid.end()) violations += 1.0;
    // components of the lambda-filtered forest are the component rank intervals
    {
      const double lam = 0.0;
      const auto f0 = representation_forest(rec, wseed, lam);
      const auto starts = component_starts(pr, lam);
      std::vector<int64_t> parent(size_t(n) + 1);
      std::iota(parent.begin(), parent.end(), 0);
      auto find = [&](int64_t v) {
        while (parent[size_t(v)] != v) {
          parent[size_t(v)] = parent[size_t(parent[size_t(v)])];
          v = parent[size_t(v)];
        }
        return v;
      };
      for (const auto& [a, b] : f0) parent[size_t(find(a))] = find(b);
      for (int64_t v = 2; v <= n; ++v) {
        const bool is_start = std::binary_search(starts.begin(), starts.end(), v);
        const bool joined = find(v) == find(v - 1);
        if (is_start == joined) violations += 1.0;
      }
    }
    bad[size_t(k)] = violations;
    std::vector<std::pair<int64_t, int64_t>> true_edges;
    for (const auto& e : pr.edges) true_edges.push_back({e.u_rank, e.v_rank});
    drep[size_t(k)] = double(graph_distance(n, forest, 1, 25));
    dtrue[size_t(k)] = double(graph_distance(n, true_edges, 1, 25));
  });
  StatReport r;
  r.put("structural_violations", std::accumulate(bad.begin(), bad.end(), 0.0));
  r.put("ks_distance", ks_two_sample(drep, dtrue));
  r.bound("structural_violations", 0.0, 0.0);
  r.bound("ks_distance", 0.0, 0.02);
  return r;
}

// ---------------------------------------------------------------- dynamics

StatReport suite_dynamics(const SuiteOptions& opt, int64_t reps) {
  const double l1 = -1.0, l2 = 0.5;
  const int64_t n = 2000;
  const double n23 = std::pow(double(n), 2.0 / 3.0);
  const double min_gap = 0.1;   // time units
  const double window = 3.0;    // events with r below this
  std::vector<double> refine_bad(size_t(reps), 0.0);
  std::vector<double> cnt_disc(size_t(reps), 0.0), cnt_cont(size_t(reps), 0.0);
  std::vector<double> match_d(size_t(reps), kNaN);
  parallel_for(reps, opt.threads, [&](int64_t k) {
    // discrete
    const Stream sk(opt.seed, "dynamics/disc", uint64_t(k));
    const auto pr = prim_order(WeightModel::keyed(sk.word(0), n));
    const auto s1 = component_starts(pr, l1);
    const auto s2 = component_starts(pr, l2);
    if (!std::includes(s1.begin(), s1.end(), s2.begin(), s2.end()))
      refine_bad[size_t(k)] += 1.0;
    const auto rec = merge_record(pr);
    struct Ev {
      double l, t, r, lam;
    };
    std::vector<Ev> dev;
    for (const auto& e : rec.entries) {
      const double lam = -e.s;
      if (lam <= l1 || lam > l2) continue;
      const double lt = double(e.l) / n23, tt = double(e.i) / n23,
                   rt = double(e.r + 1) / n23;
      if (tt - lt < min_gap || rt - tt < min_gap) continue;
      if (rt > window) continue;
      dev.push_back(Ev{lt, tt, rt, lam});
    }
    cnt_disc[size_t(k)] = double(dev.size());
    // continuum
    const Stream sc(opt.seed, "dynamics/cont", uint64_t(k));
    const double horizon = 6.0;
    const PathSample x = sample_parabolic(0.0, horizon, parabolic_cells(horizon), sc);
    const auto za = zero_set(x, l2);  // smaller zero set
    const auto zb = zero_set(x, l1);
    if (!std::includes(zb.indices.begin(), zb.indices.end(), za.indices.begin(),
                       za.indices.end()))
      refine_bad[size_t(k)] += 1.0;
    const auto cev_all = merges(x, l1, l2, min_gap);
    std::vector<MergeEvent> cev;
    for (const auto& e : cev_all) {
      if (e.lambda <= l1 || e.lambda > l2) continue;
      if (e.r_time > window) continue;
      cev.push_back(e);
    }
    cnt_cont[size_t(k)] = double(cev.size());
    // nearest-triple match distance, continuum events against discrete ones
    double worst = 0.0;
    bool any = false;
    for (const auto& c : cev) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& e : dev) {
        const double dd = std::max({std::fabs(c.l_time - e.l), std::fabs(c.t_time - e.t),
                                    std::fabs(c.r_time - e.r), std::fabs(c.lambda - e.lam)});
        best = std::min(best, dd);
      }
      if (!dev.empty()) {
        worst = std::max(worst, best);
        any = true;
      }
    }
    if (any) match_d[size_t(k)] = worst;
  });
  StatReport r;
  const auto [md, hd] = mean_ci(cnt_disc, 3.0);
  const auto [mc, hc] = mean_ci(cnt_cont, 3.0);
  r.put("refinement_violations",
        std::accumulate(refine_bad.begin(), refine_bad.end(), 0.0));
  r.put("mean_events_discrete", md);
  r.put("mean_events_continuum", mc);
  r.put("count_gap_over_3se",
        std::fabs(md - mc) / std::sqrt(hd * hd + hc * hc));
  auto matches = drop_nan(match_d);
  std::sort(matches.begin(), matches.end());
  const double q90 =
      matches.empty() ? 0.0 : matches[size_t(0.9 * double(matches.size() - 1))];
  r.put("match_q90", q90);
  r.bound("refinement_violations", 0.0, 0.0);
  r.bound("count_gap_over_3se", 0.0, 1.0);
  r.bound("match_q90", 0.0, 3.0);
  return r;
}

struct SuiteDef {
  const char* name;
  int64_t default_reps;
  int64_t min_reps;
  StatReport (*fn)(const SuiteOptions&, int64_t);
};

constexpr SuiteDef kSuites[] = {
    {"dirichlet", 50000, 1000, suite_dirichlet},
    {"stickbreak", 50000, 1000, suite_stickbreak},
    {"martingale", 50000, 1000, suite_martingale},
    {"rayleigh", 50000, 1000, suite_rayleigh},
    {"fragment", 1000, 50, suite_fragment},
    {"cuttree", 1000, 50, suite_cuttree},
    {"surplus", 1000, 100, suite_surplus},
    {"position", 1000, 100, suite_position},
    {"dimension", 200, 50, suite_dimension},
    {"mst_limit", 2000, 200, suite_mst_limit},
    {"representation", 10000, 1000, suite_representation},
    {"dynamics", 300, 50, suite_dynamics},
};

}  // namespace

std::vector<std::string> suite_names() {
  std::vector<std::string> out;
  for (const auto& s : kSuites) out.push_back(s.name);
  return out;
}

bool is_suite(const std::string& name) {
  for (const auto& s : kSuites)
    if (name == s.name) return true;
  return false;
}

int64_t suite_default_reps(const std::string& name) {
  for (const auto& s : kSuites)
    if (name == s.name) return s.default_reps;
  throw usage_error("unknown suite: " + name);
}

StatReport run_suite(const std::string& name, const SuiteOptions& opt) {
  for (const auto& s : kSuites) {
    if (name != s.name) continue;
    const int64_t reps = opt.reps < 0 ? s.default_reps : opt.reps;
    if (reps < s.min_reps)
      throw usage_error("suite " + name + ": reps below minimum " +
                        std::to_string(s.min_reps));
    StatReport r = s.fn(opt, reps);
    r.suite = name;
    r.seed = opt.seed;
    r.reps = reps;
    r.evaluate();
    return r;
  }
  throw usage_error("unknown suite: " + name);
}

}  // namespace cmtsim
