// Command-line front end: path generation, minorant dumps, distance
// matrices, fragmentation sweeps, merge lists, MST runs and the statistical
// verification suites. All outputs are written atomically and are
// byte-identical across reruns and thread counts for fixed flags.

#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cmtsim/convex_minorant.hpp"
#include "cmtsim/errors.hpp"
#include "cmtsim/io.hpp"
#include "cmtsim/mst.hpp"
#include "cmtsim/path.hpp"
#include "cmtsim/recursion.hpp"
#include "cmtsim/shear.hpp"
#include "cmtsim/suites.hpp"

namespace {

using namespace cmtsim;

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty())
    std::cout << content;
  else
    atomic_write_file(out_path, content);
}

struct PathFlags {
  std::string kind = "excursion";
  int grid_exp = 14;
  double horizon = 1.0;
  double lambda = 0.0;
  int64_t area_power = 0;
  int64_t batch = 200;
  uint64_t seed = 42;
  uint64_t replica = 0;
  bool zero_noise = false;
  CLI::Option* grid_opt = nullptr;

  void attach(CLI::App* app, bool* test_hooks) {
    app->add_option("--kind", kind, "motion|excursion|parabolic|tilted")
        ->check(CLI::IsMember({"motion", "excursion", "parabolic", "tilted"}));
    grid_opt = app->add_option("--grid-exp", grid_exp,
                               "cells = 2^grid_exp (default: 2^12 per unit time "
                               "for non-unit horizons)");
    app->add_option("--horizon", horizon, "time horizon T");
    app->add_option("--lambda", lambda, "drift parameter for parabolic paths");
    app->add_option("--area-power", area_power, "tilt exponent for tilted excursions");
    app->add_option("--batch", batch, "resampling batch for tilted excursions");
    app->add_option("--seed", seed, "master seed");
    app->add_option("--replica", replica, "replica index within the seed");
    app->add_flag("--zero-noise", zero_noise,
                  "test hook: force all gaussian draws to zero (needs --test-hooks)");
    (void)test_hooks;
  }

  PathSample make(bool test_hooks) const {
    if (zero_noise && !test_hooks)
      throw usage_error("--zero-noise requires --test-hooks");
    SampleOptions opt;
    opt.zero_noise = zero_noise;
    if (kind == "motion") {
      const Stream s(seed, "cli/motion", replica);
      return sample_motion(int64_t(1) << grid_exp, horizon, s, opt);
    }
    if (kind == "excursion") {
      const Stream s(seed, "cli/excursion", replica);
      return sample_excursion(int64_t(1) << grid_exp, s, opt);
    }
    if (kind == "parabolic") {
      const Stream s(seed, "cli/parabolic", replica);
      const bool explicit_grid = grid_opt != nullptr && grid_opt->count() > 0;
      const int64_t cells = explicit_grid || horizon == 1.0
                                ? (int64_t(1) << grid_exp)
                                : parabolic_cells(horizon);
      return sample_parabolic(lambda, horizon, cells, s, opt);
    }
    const Stream s(seed, "cli/tilted", replica);
    return sample_tilted_excursion(area_power, int64_t(1) << grid_exp, batch, s, opt);
  }
};

int cmd_paths(const PathFlags& pf, bool hooks, const std::string& out) {
  const PathSample p = pf.make(hooks);
  std::ostringstream os;
  write_path_csv(p, os);
  emit(out, os.str());
  return 0;
}

int cmd_gcm(const PathFlags& pf, bool hooks, int64_t a, int64_t b,
            const std::string& out) {
  const PathSample p = pf.make(hooks);
  if (b < 0) b = p.cells;
  const ConvexMinorant cm = gcm(p, a, b);
  std::string csv = "left_t,right_t,slope,length\n";
  for (const Face& f : cm.faces) {
    csv += format17(p.time_at(f.left_idx)) + ',' + format17(p.time_at(f.right_idx)) +
           ',' + format17(f.slope) + ',' + format17(f.length) + '\n';
  }
  emit(out, csv);
  return 0;
}

int cmd_cmt_dist(const PathFlags& pf, bool hooks, const std::string& points_arg,
                 int depth, const std::string& out) {
  const PathSample p = pf.make(hooks);
  std::vector<int64_t> pts;
  std::vector<double> times;
  std::stringstream ss(points_arg);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    const double t = std::stod(tok);
    if (!(t > 0.0 && t < p.horizon))
      throw usage_error("cmt-dist: points must be strictly inside the horizon");
    int64_t idx = int64_t(std::llround(t / p.step()));
    idx = std::clamp<int64_t>(idx, 1, p.cells - 1);
    pts.push_back(idx);
    times.push_back(p.time_at(idx));
  }
  if (pts.size() < 2) throw usage_error("cmt-dist: need at least two --points");
  const UniformAssignment assign(pf.seed, pf.replica);
  Cutoff cutoff = exact_cutoff();
  cutoff.max_depth = depth > 0 ? depth : cutoff.max_depth;
  const auto m = distance_matrix(p, assign, pts, cutoff);
  std::string csv;
  for (size_t j = 0; j < times.size(); ++j)
    csv += (j ? "," : "") + format17(times[j]);
  csv += '\n';
  for (size_t i = 0; i < m.size(); ++i) {
    for (size_t j = 0; j < m[i].size(); ++j) csv += (j ? "," : "") + format17(m[i][j]);
    csv += '\n';
  }
  emit(out, csv);
  return 0;
}

int cmd_frag(const PathFlags& pf, bool hooks, const std::string& sweep,
             const std::string& out) {
  const PathSample p = pf.make(hooks);
  double lo = 0.0, hi = 4.0;
  int steps = 5;
  {
    std::stringstream ss(sweep);
    std::string tok;
    std::vector<std::string> parts;
    while (std::getline(ss, tok, ':')) parts.push_back(tok);
    if (parts.size() != 3) throw usage_error("frag: --tau-sweep wants lo:hi:steps");
    lo = std::stod(parts[0]);
    hi = std::stod(parts[1]);
    steps = std::stoi(parts[2]);
    if (steps < 1 || hi < lo) throw usage_error("frag: bad sweep range");
  }
  std::string csv = "tau,frag_rank,mass\n";
  for (int k = 0; k < steps; ++k) {
    const double tau = steps == 1 ? lo : lo + (hi - lo) * double(k) / double(steps - 1);
    const auto fr = fragments_at_tau(p, tau);
    for (size_t r = 0; r < fr.size(); ++r)
      csv += format17(tau) + ',' + std::to_string(r + 1) + ',' + format17(fr[r].mass) + '\n';
  }
  emit(out, csv);
  return 0;
}

int cmd_merges(const PathFlags& pf, bool hooks, double llo, double lhi, double min_len,
               const std::string& out) {
  const PathSample p = pf.make(hooks);
  const auto ev = merges(p, llo, lhi, min_len);
  std::string csv = "l,t,r,lambda\n";
  for (const auto& e : ev)
    csv += format17(e.l_time) + ',' + format17(e.t_time) + ',' + format17(e.r_time) +
           ',' + format17(e.lambda) + '\n';
  emit(out, csv);
  return 0;
}

int cmd_mst(int64_t n, uint64_t seed, double lambda, bool have_lambda,
            const std::string& forced, bool hooks, const std::string& out,
            const std::string& merges_out) {
  WeightModel wm = WeightModel::keyed(seed, n);
  if (!forced.empty()) {
    if (!hooks) throw usage_error("--force-weights requires --test-hooks");
    std::vector<double> w;
    std::stringstream ss(forced);
    std::string tok;
    while (std::getline(ss, tok, ',')) w.push_back(std::stod(tok));
    wm = WeightModel::forced(n, std::move(w));
  }
  const PrimResult pr = prim_order(wm);
  if (pr.tie_count != 0) throw domain_error("mst: weight ties encountered");
  const double pcap = have_lambda ? p_threshold(n, lambda) : 2.0;
  std::string csv = "rank_a,rank_b,weight\n";
  for (const auto& e : pr.edges) {
    if (e.w > pcap) continue;
    csv += std::to_string(e.u_rank) + ',' + std::to_string(e.v_rank) + ',' +
           format17(e.w) + '\n';
  }
  emit(out, csv);
  if (!merges_out.empty()) {
    const auto rec = merge_record(pr);
    std::string mcsv = "l,i,r,s\n";
    for (const auto& e : rec.entries)
      mcsv += std::to_string(e.l) + ',' + std::to_string(e.i) + ',' +
              std::to_string(e.r) + ',' + format17(e.s) + '\n';
    atomic_write_file(merges_out, mcsv);
  }
  return 0;
}

int cmd_verify(const std::string& suite, const SuiteOptions& opt, const std::string& out) {
  std::string payload;
  bool all_pass = true;
  if (suite == "all") {
    payload += "[";
    const auto names = suite_names();
    for (size_t i = 0; i < names.size(); ++i) {
      StatReport r = run_suite(names[i], opt);
      all_pass = all_pass && r.pass;
      payload += (i ? ",\n " : "") + r.to_json();
      std::cerr << names[i] << ": " << (r.pass ? "pass" : "FAIL") << " ("
                << r.runtime_sec << "s)\n";
    }
    payload += "]\n";
  } else {
    if (!is_suite(suite)) throw usage_error("unknown suite: " + suite);
    StatReport r = run_suite(suite, opt);
    all_pass = r.pass;
    payload = r.to_json() + "\n";
  }
  emit(out, payload);
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"convex-minorant-tree simulation and verification tool"};
  app.require_subcommand(1);
  app.fallthrough();
  bool test_hooks = false;
  app.add_flag("--test-hooks", test_hooks, "enable deterministic test hooks");

  PathFlags pf_paths, pf_gcm, pf_dist, pf_frag, pf_merges;
  std::string out_paths, out_gcm, out_dist, out_frag, out_merges, out_mst, out_verify;

  auto* c_paths = app.add_subcommand("paths", "sample a path and emit t,v CSV");
  pf_paths.attach(c_paths, &test_hooks);
  c_paths->add_option("--out", out_paths, "output file (default stdout)");

  auto* c_gcm = app.add_subcommand("gcm", "greatest convex minorant faces as CSV");
  pf_gcm.attach(c_gcm, &test_hooks);
  int64_t gcm_a = 0, gcm_b = -1;
  bool gcm_dump = false;
  c_gcm->add_option("--a", gcm_a, "left grid index");
  c_gcm->add_option("--b", gcm_b, "right grid index (default: grid end)");
  c_gcm->add_flag("--dump", gcm_dump, "emit faces CSV (default behavior)");
  c_gcm->add_option("--out", out_gcm, "output file (default stdout)");

  auto* c_dist = app.add_subcommand("cmt-dist", "pairwise distance matrix CSV");
  pf_dist.attach(c_dist, &test_hooks);
  std::string points;
  int depth = 0;
  c_dist->add_option("--points", points, "comma-separated times in (0, horizon)")
      ->required();
  c_dist->add_option("--depth", depth, "recursion depth bound (0: exact)");
  c_dist->add_option("--out", out_dist, "output file (default stdout)");

  auto* c_frag = app.add_subcommand("frag", "fragment masses over a tau sweep");
  pf_frag.attach(c_frag, &test_hooks);
  std::string sweep = "0:4:5";
  c_frag->add_option("--tau-sweep", sweep, "lo:hi:steps");
  c_frag->add_option("--out", out_frag, "output file (default stdout)");

  auto* c_merges = app.add_subcommand("merges", "macroscopic merge events as CSV");
  pf_merges.attach(c_merges, &test_hooks);
  pf_merges.kind = "parabolic";
  pf_merges.horizon = 6.0;
  double m_lo = -2.0, m_hi = 1.0, m_minlen = 0.05;
  c_merges->add_option("--lambda-lo", m_lo, "window start");
  c_merges->add_option("--lambda-hi", m_hi, "window end");
  c_merges->add_option("--min-len", m_minlen, "minimum gap on both sides");
  c_merges->add_option("--out", out_merges, "output file (default stdout)");

  auto* c_mst = app.add_subcommand("mst", "Prim-order MST edges as CSV");
  int64_t mst_n = 50;
  uint64_t mst_seed = 42;
  double mst_lambda = 0.0;
  std::string forced_weights, merges_out;
  c_mst->add_option("--n", mst_n, "vertex count");
  c_mst->add_option("--seed", mst_seed, "weight seed");
  auto* lam_opt = c_mst->add_option("--lambda", mst_lambda,
                                    "emit only forest edges below p_n(lambda)");
  c_mst->add_option("--force-weights", forced_weights,
                    "test hook: comma-separated dense weights (needs --test-hooks)");
  c_mst->add_option("--merges-out", merges_out, "also write the merge record CSV");
  c_mst->add_option("--out", out_mst, "output file (default stdout)");

  auto* c_verify = app.add_subcommand("verify", "run one statistical suite (or `all`)");
  std::string suite;
  SuiteOptions sopt;
  c_verify->add_option("suite", suite, "suite name or `all`")->required();
  c_verify->add_option("--seed", sopt.seed, "suite seed");
  int64_t reps = -1;
  c_verify->add_option("--reps", reps, "replication count (default per suite)");
  c_verify->add_option("--threads", sopt.threads, "worker threads (0: hardware)");
  c_verify->add_option("--grid-exp", sopt.grid_exp, "unit-horizon cells = 2^grid_exp");
  c_verify->add_option("--out", out_verify, "output file (default stdout)");

  auto* c_report = app.add_subcommand("report", "run every suite, combined JSON");
  SuiteOptions ropt;
  std::string out_report;
  c_report->add_option("--seed", ropt.seed, "suite seed");
  c_report->add_option("--threads", ropt.threads, "worker threads (0: hardware)");
  c_report->add_option("--grid-exp", ropt.grid_exp, "unit-horizon cells = 2^grid_exp");
  c_report->add_option("--out", out_report, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    if (c_paths->parsed()) return cmd_paths(pf_paths, test_hooks, out_paths);
    if (c_gcm->parsed()) return cmd_gcm(pf_gcm, test_hooks, gcm_a, gcm_b, out_gcm);
    if (c_dist->parsed())
      return cmd_cmt_dist(pf_dist, test_hooks, points, depth, out_dist);
    if (c_frag->parsed()) return cmd_frag(pf_frag, test_hooks, sweep, out_frag);
    if (c_merges->parsed())
      return cmd_merges(pf_merges, test_hooks, m_lo, m_hi, m_minlen, out_merges);
    if (c_mst->parsed())
      return cmd_mst(mst_n, mst_seed, mst_lambda, lam_opt->count() > 0, forced_weights,
                     test_hooks, out_mst, merges_out);
    if (c_verify->parsed()) {
      sopt.reps = reps;
      return cmd_verify(suite, sopt, out_verify);
    }
    if (c_report->parsed()) {
      std::string payload = "{\"suites\":[";
      bool all_pass = true;
      const auto names = cmtsim::suite_names();
      for (size_t i = 0; i < names.size(); ++i) {
        cmtsim::StatReport r = cmtsim::run_suite(names[i], ropt);
        all_pass = all_pass && r.pass;
        payload += (i ? ",\n " : "") + r.to_json();
        std::cerr << names[i] << ": " << (r.pass ? "pass" : "FAIL") << "\n";
      }
      payload += "],\"pass\":";
      payload += all_pass ? "true" : "false";
      payload += "}\n";
      emit(out_report, payload);
      return all_pass ? 0 : 1;
    }
  } catch (const cmtsim::usage_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const cmtsim::domain_error& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 2;
  } catch (const cmtsim::quality_error& e) {
    std::cerr << "statistical-quality error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
