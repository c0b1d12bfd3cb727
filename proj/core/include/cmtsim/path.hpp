#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "cmtsim/rng.hpp"

namespace cmtsim {

enum class PathKind { motion, excursion, parabolic, sheared };

// A path sampled on a uniform dyadic grid: values[0..cells] with
// values[0] == 0 and step = horizon / cells. cells is a power of two so that
// nested grid refinements stay aligned.
struct PathSample {
  PathKind kind = PathKind::motion;
  double horizon = 1.0;
  int64_t cells = 0;
  double drift = 0.0;  // lambda for parabolic / sheared kinds
  std::vector<double> values;

  double step() const { return horizon / double(cells); }
  double time_at(int64_t i) const { return step() * double(i); }
  // Magnitude used by index-perturbed comparison keys; never below 1.
  double scale() const;
};

struct SampleOptions {
  bool zero_noise = false;  // test hook: every gaussian draw forced to 0
};

bool is_power_of_two(int64_t n);
// Smallest power of two with at least 2^12 cells per unit of time.
int64_t parabolic_cells(double horizon);

PathSample sample_motion(int64_t cells, double horizon, const Stream& s,
                         SampleOptions opt = {});
PathSample sample_excursion(int64_t cells, const Stream& s, SampleOptions opt = {});
PathSample sample_parabolic(double lambda, double horizon, int64_t cells,
                            const Stream& s, SampleOptions opt = {});
// Area-tilted excursion: self-normalized importance resampling of `batch`
// plain excursions weighted by area^area_power.
PathSample sample_tilted_excursion(int64_t area_power, int64_t cells, int64_t batch,
                                   const Stream& s, SampleOptions opt = {});

// Grid trapezoid area of the path over its horizon.
double trapezoid_area(const PathSample& p);

// Argmin with ties broken by adding i * eps0 (eps0 = 2^-60 * scale) to the
// comparison key only; stored values are never perturbed.
int64_t argmin_index(const std::vector<double>& v, double scale);

// CSV export: header "t,v", one row per grid point, 17-significant-digit
// decimal floats, LF newlines.
void write_path_csv(const PathSample& p, std::ostream& os);

}  // namespace cmtsim
