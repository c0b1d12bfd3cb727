#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace cmtsim {

// Sup-distance between the empirical CDF of `samples` and `cdf`.
// Requires at least 30 samples.
double ks_one_sample(std::vector<double> samples,
                     const std::function<double(double)>& cdf);

// Sup-distance between two empirical CDFs. Requires >= 30 samples each.
double ks_two_sample(std::vector<double> a, std::vector<double> b);

// Chi-square goodness-of-fit p-value of integer counts against Poisson(mean);
// tail bins merged until every expected count is at least 5.
double poisson_fit(std::span<const int64_t> counts, double mean);

// (mean, z * standard error).
std::pair<double, double> mean_ci(std::span<const double> samples, double z = 3.0);

double sample_mean(std::span<const double> samples);
double sample_sd(std::span<const double> samples);

// Regularized upper incomplete gamma Q(a, x).
double gamma_q(double a, double x);

double rayleigh_cdf(double x, double sigma);
// Mean of the Rayleigh law with scale sigma is sigma * sqrt(pi/2).
double rayleigh_sigma_from_mean(double mean);

}  // namespace cmtsim
