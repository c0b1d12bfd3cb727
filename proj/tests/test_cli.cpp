#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

namespace {

#ifndef CMTSIM_CLI_PATH
#define CMTSIM_CLI_PATH "cmtsim"
#endif

struct RunResult {
  int code;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  const std::string out_file = std::string("cli_out_") + std::to_string(rand()) + ".txt";
  const std::string cmd =
      std::string(CMTSIM_CLI_PATH) + " " + args + " > " + out_file + " 2>/dev/null";
  const int raw = std::system(cmd.c_str());
  std::ifstream is(out_file);
  std::stringstream ss;
  ss << is.rdbuf();
  std::remove(out_file.c_str());
  return RunResult{WEXITSTATUS(raw), ss.str()};
}

}  // namespace

TEST_CASE("help exits cleanly and lists subcommands") {
  const auto r = run_cli("--help");
  CHECK(r.code == 0);
  for (const char* sub : {"paths", "gcm", "cmt-dist", "frag", "merges", "mst", "verify",
                          "report"})
    CHECK(r.out.find(sub) != std::string::npos);
}

TEST_CASE("unknown suite exits with the usage code") {
  CHECK(run_cli("verify no-such-suite").code == 2);
}

TEST_CASE("unknown flag exits with the usage code") {
  CHECK(run_cli("paths --definitely-not-a-flag").code == 2);
}

TEST_CASE("forced-weight mst emits the expected edges") {
  const auto r = run_cli("mst --n 3 --test-hooks --force-weights 0.1,0.5,0.2");
  CHECK(r.code == 0);
  CHECK(r.out.rfind("rank_a,rank_b,weight\n1,2,0.1", 0) == 0);
  CHECK(r.out.find("\n2,3,0.2") != std::string::npos);
}

TEST_CASE("force-weights without test hooks is rejected") {
  CHECK(run_cli("mst --n 3 --force-weights 0.1,0.5,0.2").code == 2);
}

TEST_CASE("zero-noise parabola matches the closed form") {
  const auto r = run_cli(
      "paths --kind parabolic --horizon 2 --grid-exp 2 --lambda 0 --test-hooks "
      "--zero-noise");
  CHECK(r.code == 0);
  CHECK(r.out == "t,v\n0,0\n0.5,-0.125\n1,-0.5\n1.5,-1.125\n2,-2\n");
}

TEST_CASE("outputs are byte-identical across runs and thread counts") {
  const auto a = run_cli("verify fragment --reps 100 --threads 1");
  const auto b = run_cli("verify fragment --reps 100 --threads 8");
  const auto c = run_cli("verify fragment --reps 100 --threads 1");
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out == c.out);
  const auto p1 = run_cli("paths --kind excursion --grid-exp 8 --seed 7");
  const auto p2 = run_cli("paths --kind excursion --grid-exp 8 --seed 7");
  CHECK(p1.out == p2.out);
  CHECK(!p1.out.empty());
}

TEST_CASE("verify emits a schema-complete report") {
  const auto r = run_cli("verify fragment --reps 100");
  CHECK(r.code == 0);
  CHECK(r.out.find("\"suite\":\"fragment\"") != std::string::npos);
  CHECK(r.out.find("\"pass\":true") != std::string::npos);
}
