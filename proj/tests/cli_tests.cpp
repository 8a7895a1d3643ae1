// End-to-end checks of the command-line tool: exit-code contract,
// machine-readable output, and bitwise determinism of simulation output.
// argv: <path-to-cli> <configs-dir>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace {

int g_failures = 0;

struct CliResult {
  int exit_code = -1;
  std::string output;
};

std::string g_cli;

CliResult run_cli(const std::string& args) {
  const std::string out_file = "cli_test_output.tmp";
  const std::string cmd = g_cli + " " + args + " > " + out_file + " 2>&1";
  const int status = std::system(cmd.c_str());
  CliResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(out_file);
  std::ostringstream ss;
  ss << in.rdbuf();
  r.output = ss.str();
  return r;
}

void expect(bool ok, const std::string& what) {
  std::printf("[%s] %s\n", ok ? "ok" : "FAIL", what.c_str());
  if (!ok) ++g_failures;
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path);
  f << content;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::fprintf(stderr, "usage: cli_tests <cli-path> <configs-dir>\n");
    return 2;
  }
  g_cli = argv[1];
  const std::string configs = argv[2];

  {
    const auto r = run_cli("check --config " + configs + "/check_power_pair.cfg");
    expect(r.exit_code == 0, "check on the power-pair config exits 0");
    expect(contains(r.output, "p_range = p > 1"), "power-pair range for p is exactly p > 1");
    expect(contains(r.output, "q_range = q > 13/9"), "power-pair range for q is exactly 13/9");
  }
  {
    const auto r = run_cli("check --config " + configs + "/check_power_log_pair.cfg");
    expect(r.exit_code == 0, "check on the log-pair config exits 0");
    expect(contains(r.output, "q_range = q > 7/3"), "log-pair range for q is exactly 7/3");
    expect(contains(r.output, "differ from fitted"),
           "log-pair verdict carries the interplay provenance warning");
  }
  {
    // q below the admissible range: violated, exit 1
    write_file("violated.cfg",
               "[scenario]\nn = 2\nm = 2\np = 6/5\nq = 7/5\ngamma1 = -1\ngamma2 = -1/3\n"
               "alpha = 3\nbeta = 1/3\n[checks]\ntheorem = energy\n");
    const auto r = run_cli("check --config violated.cfg");
    expect(r.exit_code == 1, "check on a violated scenario exits 1");
    expect(contains(r.output, "satisfied = false"), "violated verdict is reported");
  }
  {
    write_file("empty.cfg", "");
    const auto r = run_cli("check --config empty.cfg");
    expect(r.exit_code == 2, "check on an empty config exits 2");
  }
  {
    write_file("unknown_key.cfg", "[scenario]\nn = 2\nbogus = 1\n");
    const auto r = run_cli("check --config unknown_key.cfg");
    expect(r.exit_code == 2 && contains(r.output, "bogus"),
           "unknown keys are rejected with a pointer to the offender");
  }
  {
    const auto r = run_cli("table --beta 3 --gamma1 0 --n 2 --m 1 --csv");
    expect(r.exit_code == 0 && contains(r.output, "3,0,"), "table emits the requested row");
    expect(contains(r.output, ",2"), "table row carries the lower bound 2");
  }
  {
    write_file("small_run.cfg",
               "[dissipation.b1]\nfamily = constant\nmu = 1\n"
               "[dissipation.b2]\nfamily = constant\nmu = 1\n"
               "[scenario]\nn = 1\nm = 1\np = 7/2\nq = 7/2\nalpha = 1\nbeta = 1\n"
               "[grid]\ndim = 1\npoints = 128\nhalf_length = 20\n"
               "[run]\nt_end = 5\noutputs = 20\noutput_spacing = linear\nepsilon = 1e-3\n"
               "profile_width = 3\nnonlinear = false\n");
    const auto r1 = run_cli("simulate --config small_run.cfg --out run_a");
    const auto r2 = run_cli("simulate --config small_run.cfg --out run_b");
    expect(r1.exit_code == 0 && r2.exit_code == 0, "small simulate runs exit 0");
    const std::string a = slurp("run_a/trajectory.csv");
    const std::string b = slurp("run_b/trajectory.csv");
    expect(!a.empty() && a == b, "repeated runs produce bitwise-identical trajectories");
    expect(contains(slurp("run_a/summary.txt"), "status = completed"),
           "summary reports completion");
  }
  {
    write_file("beyond_horizon.cfg",
               "[dissipation.b1]\nfamily = constant\nmu = 1\n"
               "[dissipation.b2]\nfamily = constant\nmu = 1\n"
               "[scenario]\nn = 1\nm = 1\np = 7/2\nq = 7/2\nalpha = 1\nbeta = 1\n"
               "[grid]\ndim = 1\npoints = 128\nhalf_length = 20\n"
               "[run]\nt_end = 19\noutputs = 10\noutput_spacing = linear\nepsilon = 1e-3\n"
               "profile_width = 3\nnonlinear = false\n");
    const auto r = run_cli("simulate --config beyond_horizon.cfg --out run_c");
    expect(r.exit_code == 2 && contains(r.output, "safe horizon"),
           "t_end beyond the safe horizon exits 2 before stepping");
  }
  {
    write_file("blowup.cfg",
               "[dissipation.b1]\nfamily = constant\nmu = 1/10\n"
               "[dissipation.b2]\nfamily = constant\nmu = 1/10\n"
               "[scenario]\nn = 1\nm = 1\np = 3\nq = 3\nalpha = 1\nbeta = 1\n"
               "[grid]\ndim = 1\npoints = 64\nhalf_length = 10\n"
               "[run]\nt_end = 6\noutputs = 12\noutput_spacing = linear\nepsilon = 20\n"
               "profile_width = 2\nnonlinear = true\n");
    const auto r = run_cli("simulate --config blowup.cfg --out run_d");
    expect(r.exit_code == 3, "suspected blow-up exits 3");
    expect(contains(r.output, "blowup-suspected"), "blow-up status appears in the summary");
    expect(contains(r.output, "last_finite_time"), "last finite time is reported");
  }
  {
    const auto r = run_cli("verify");
    expect(r.exit_code == 0 && contains(r.output, "all items passed"),
           "verify suite passes at default tolerances");
    const auto bad = run_cli("verify --tolerance 1e-2");
    expect(bad.exit_code == 1 && contains(bad.output, "[FAIL] mode-oracle"),
           "perturbed solver tolerance fails the mode-oracle item");
  }
  {
    const auto r = run_cli("fit --config " + configs + "/check_power_pair.cfg");
    expect(r.exit_code == 0, "fit exits 0");
    expect(contains(r.output, "alpha_hat = 2.99") || contains(r.output, "alpha_hat = 3"),
           "fitted alpha is close to 3");
  }
  {
    // no alpha/beta in the scenario: the checker fits them from the pair
    write_file("fitted_source.cfg",
               "[dissipation.b1]\nfamily = pure-power\nmu = 1\nr = 1/2\n"
               "[dissipation.b2]\nfamily = pure-power\nmu = 1\nr = -1/2\n"
               "[scenario]\nn = 2\nm = 2\np = 6/5\nq = 3/2\ngamma1 = -1\ngamma2 = -1/3\n");
    const auto r = run_cli("check --config fitted_source.cfg");
    expect(r.exit_code == 0, "check with fitted interplay exits 0");
    expect(contains(r.output, "source = fitted"), "fitted interplay source is reported");
  }

  std::printf("%s\n", g_failures == 0 ? "cli_tests: all passed" : "cli_tests: failures");
  return g_failures == 0 ? 0 : 1;
}
