#include "cmtsim/stats.hpp"

#include <algorithm>
#include <cmath>

#include "cmtsim/errors.hpp"
#include "cmtsim/recursion.hpp"

namespace cmtsim {

double ks_one_sample(std::vector<double> samples,
                     const std::function<double(double)>& cdf) {
  if (samples.size() < 30) throw usage_error("ks_one_sample: need at least 30 samples");
  std::sort(samples.begin(), samples.end());
  const double n = double(samples.size());
  double d = 0.0;
  for (size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max(d, std::max((double(i) + 1.0) / n - f, f - double(i) / n));
  }
  return d;
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.size() < 30 || b.size() < 30)
    throw usage_error("ks_two_sample: need at least 30 samples per side");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = double(a.size()), nb = double(b.size());
  size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::fabs(double(i) / na - double(j) / nb));
  }
  return d;
}

double gamma_q(double a, double x) {
  if (x < 0 || a <= 0) throw usage_error("gamma_q: need x >= 0 and a > 0");
  if (x == 0) return 1.0;
  if (x < a + 1.0) {
    // lower series
    double ap = a, sum = 1.0 / a, del = sum;
    for (int i = 0; i < 500; ++i) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::fabs(del) < std::fabs(sum) * 1e-15) break;
    }
    const double p = sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    return 1.0 - p;
  }
  // continued fraction for the upper tail
  double b = x + 1.0 - a, c = 1e300, d = 1.0 / b, h = d;
  for (int i = 1; i < 500; ++i) {
    const double an = -double(i) * (double(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < 1e-300) d = 1e-300;
    c = b + an / c;
    if (std::fabs(c) < 1e-300) c = 1e-300;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-15) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

double poisson_fit(std::span<const int64_t> counts, double mean) {
  if (counts.size() < 30) throw usage_error("poisson_fit: need at least 30 samples");
  if (!(mean > 0)) throw usage_error("poisson_fit: mean must be positive");
  int64_t maxc = 0;
  for (int64_t c : counts) {
    if (c < 0) throw usage_error("poisson_fit: counts must be nonnegative");
    maxc = std::max(maxc, c);
  }
  const double n = double(counts.size());
  std::vector<double> expected;
  std::vector<double> observed;
  double pmf = std::exp(-mean);
  double tail = 1.0;
  std::vector<int64_t> hist(size_t(maxc) + 1, 0);
  for (int64_t c : counts) ++hist[size_t(c)];
  for (int64_t k = 0; k <= maxc; ++k) {
    expected.push_back(n * pmf);
    observed.push_back(double(hist[size_t(k)]));
    tail -= pmf;
    pmf *= mean / double(k + 1);
  }
  expected.push_back(n * std::max(tail, 0.0));
  observed.push_back(0.0);
  // merge bins from the right until every expected count is at least 5
  std::vector<double> e2, o2;
  double ea = 0.0, oa = 0.0;
  for (size_t k = 0; k < expected.size(); ++k) {
    ea += expected[k];
    oa += observed[k];
    if (ea >= 5.0) {
      e2.push_back(ea);
      o2.push_back(oa);
      ea = oa = 0.0;
    }
  }
  if (ea > 0.0 && !e2.empty()) {
    e2.back() += ea;
    o2.back() += oa;
  }
  if (e2.size() < 2) return 1.0;  // too little structure to reject anything
  double chi2 = 0.0;
  for (size_t k = 0; k < e2.size(); ++k) {
    const double diff = o2[k] - e2[k];
    chi2 += diff * diff / e2[k];
  }
  const double dof = double(e2.size() - 1);
  return gamma_q(dof / 2.0, chi2 / 2.0);
}

double sample_mean(std::span<const double> samples) {
  long double acc = 0.0;
  for (double v : samples) acc += v;
  return double(acc / (long double)samples.size());
}

double sample_sd(std::span<const double> samples) {
  const double m = sample_mean(samples);
  long double acc = 0.0;
  for (double v : samples) acc += (long double)(v - m) * (v - m);
  return std::sqrt(double(acc / (long double)(samples.size() - 1)));
}

std::pair<double, double> mean_ci(std::span<const double> samples, double z) {
  if (samples.size() < 30) throw usage_error("mean_ci: need at least 30 samples");
  const double m = sample_mean(samples);
  const double se = sample_sd(samples) / std::sqrt(double(samples.size()));
  return {m, z * se};
}

double rayleigh_cdf(double x, double sigma) {
  if (x <= 0) return 0.0;
  const double r = x / sigma;
  return 1.0 - std::exp(-0.5 * r * r);
}

double rayleigh_sigma_from_mean(double mean) { return mean / kHalfPiSqrt; }

}  // namespace cmtsim
