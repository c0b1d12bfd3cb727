#include "cmtsim/path.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "cmtsim/errors.hpp"
#include "cmtsim/io.hpp"

namespace cmtsim {

bool is_power_of_two(int64_t n) { return n > 0 && (n & (n - 1)) == 0; }

int64_t parabolic_cells(double horizon) {
  if (horizon <= 0) throw usage_error("parabolic_cells: horizon must be positive");
  int64_t n = 1;
  const double want = horizon * 4096.0;
  while (double(n) < want) n <<= 1;
  return n;
}

double PathSample::scale() const {
  double m = 1.0;
  for (double v : values) m = std::max(m, std::fabs(v));
  return m;
}

int64_t argmin_index(const std::vector<double>& v, double scale) {
  const double eps0 = std::ldexp(scale, -60);
  int64_t best = 0;
  double best_key = v.empty() ? 0.0 : v[0];
  for (int64_t i = 1; i < int64_t(v.size()); ++i) {
    const double key = v[i] + double(i) * eps0;
    if (key < best_key) {
      best = i;
      best_key = key;
    }
  }
  return best;
}

PathSample sample_motion(int64_t cells, double horizon, const Stream& s,
                         SampleOptions opt) {
  if (!is_power_of_two(cells)) throw usage_error("sample_motion: cells must be a power of two");
  if (!(horizon > 0)) throw usage_error("sample_motion: horizon must be positive");
  PathSample p;
  p.kind = PathKind::motion;
  p.horizon = horizon;
  p.cells = cells;
  p.values.resize(size_t(cells) + 1);
  p.values[0] = 0.0;
  const double sqh = std::sqrt(p.step());
  for (int64_t i = 0; i < cells; ++i) {
    const double g = opt.zero_noise ? 0.0 : s.gaussian(uint64_t(i));
    p.values[size_t(i) + 1] = p.values[size_t(i)] + sqh * g;
  }
  return p;
}

PathSample sample_excursion(int64_t cells, const Stream& s, SampleOptions opt) {
  if (cells < 2) throw usage_error("sample_excursion: need at least 2 cells");
  if (!is_power_of_two(cells)) throw usage_error("sample_excursion: cells must be a power of two");
  PathSample w = sample_motion(cells, 1.0, s, opt);
  // Bridge by pinning, then cyclic rotation at the argmin (Vervaat).
  const int64_t n = cells;
  std::vector<double> bridge(size_t(n) + 1);
  const double endv = w.values[size_t(n)];
  for (int64_t i = 0; i <= n; ++i)
    bridge[size_t(i)] = w.values[size_t(i)] - (double(i) / double(n)) * endv;
  double sc = 1.0;
  for (double v : bridge) sc = std::max(sc, std::fabs(v));
  const int64_t m = argmin_index(bridge, sc);
  PathSample e;
  e.kind = PathKind::excursion;
  e.horizon = 1.0;
  e.cells = n;
  e.values.resize(size_t(n) + 1);
  const double low = bridge[size_t(m)];
  for (int64_t i = 0; i < n; ++i)
    e.values[size_t(i)] = bridge[size_t((m + i) % n)] - low;
  e.values[0] = 0.0;
  e.values[size_t(n)] = 0.0;
  return e;
}

PathSample sample_parabolic(double lambda, double horizon, int64_t cells,
                            const Stream& s, SampleOptions opt) {
  if (lambda > 0 && horizon < 2 * lambda + 2)
    throw domain_error("sample_parabolic: horizon too small for this drift window");
  PathSample p = sample_motion(cells, horizon, s, opt);
  p.kind = PathKind::parabolic;
  p.drift = lambda;
  for (int64_t i = 0; i <= cells; ++i) {
    const double t = p.time_at(i);
    p.values[size_t(i)] += -0.5 * t * t + lambda * t;
  }
  return p;
}

double trapezoid_area(const PathSample& p) {
  const double h = p.step();
  double acc = 0.5 * (p.values.front() + p.values.back());
  for (size_t i = 1; i + 1 < p.values.size(); ++i) acc += p.values[i];
  return acc * h;
}

PathSample sample_tilted_excursion(int64_t area_power, int64_t cells, int64_t batch,
                                   const Stream& s, SampleOptions opt) {
  if (area_power < 0) throw usage_error("sample_tilted_excursion: area_power must be >= 0");
  if (batch < 1) throw usage_error("sample_tilted_excursion: batch must be >= 1");
  if (area_power >= 1 && batch < 100)
    throw usage_error("sample_tilted_excursion: batch must be >= 100 when area_power >= 1");

  std::vector<PathSample> pool;
  pool.reserve(size_t(batch));
  std::vector<double> weight(size_t(batch), 0.0);
  double wsum = 0.0, wsq = 0.0;
  for (int64_t b = 0; b < batch; ++b) {
    Stream sub(s.word(0), "tilt-batch", uint64_t(b));
    pool.push_back(sample_excursion(cells, sub, opt));
    const double a = trapezoid_area(pool.back());
    double w = 1.0;
    for (int64_t k = 0; k < area_power; ++k) w *= a;
    weight[size_t(b)] = w;
    wsum += w;
    wsq += w * w;
  }
  if (area_power >= 1) {
    const double ess = wsum * wsum / wsq;
    if (ess < 10.0)
      throw quality_error("sample_tilted_excursion: effective sample size below 10; increase batch");
  }
  const double u = s.uniform(1) * wsum;
  double acc = 0.0;
  size_t pick = size_t(batch) - 1;
  for (size_t b = 0; b < size_t(batch); ++b) {
    acc += weight[b];
    if (u < acc) {
      pick = b;
      break;
    }
  }
  return pool[pick];
}

void write_path_csv(const PathSample& p, std::ostream& os) {
  os << "t,v\n";
  for (int64_t i = 0; i <= p.cells; ++i)
    os << format17(p.time_at(i)) << ',' << format17(p.values[size_t(i)]) << '\n';
}

}  // namespace cmtsim
