// Black-box checks of the installed command-line binary.  The binary path
// comes from INCOMPAT_CLI (set by ctest); when run by hand we fall back to
// the build-tree location next to this test executable.
#define DOCTEST_CONFIG_IMPLEMENT
#include "doctest.h"

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

#include "json.hpp"

#include "incompat/sampling.hpp"
#include "incompat/serialization.hpp"
#include "incompat/witness.hpp"
#include "test_support.hpp"

using namespace incompat;
using njson = nlohmann::json;

namespace {

std::string g_cli;
std::string g_dir; // scratch directory for fixture files

std::string run_shell(const std::string& command, int* exit_code) {
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  size_t got;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
  const int status = pclose(pipe);
  *exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return out;
}

// run the CLI with stderr separated from the JSON/CSV payload on stdout
std::string run_cli(const std::string& args, int* exit_code, bool merge_stderr = false,
                    const std::string& env_prefix = "") {
  std::string cmd = env_prefix + "'" + g_cli + "' " + args;
  cmd += merge_stderr ? " 2>&1" : " 2>/dev/null";
  return run_shell(cmd, exit_code);
}

std::string fixture(const std::string& name, const std::string& body) {
  const std::string path = g_dir + "/" + name;
  write_text_file(path, body);
  return path;
}

int count_lines(const std::string& text) {
  int n = 0;
  for (char c : text)
    if (c == '\n') ++n;
  return n;
}

} // namespace

TEST_CASE("witness certifies the sharp pauli pair steered through a singlet-class state") {
  const StateAssemblage s =
      embed_measurement(noisy_pauli_assemblage(0.0), DensityMatrix::maximally_mixed(2));
  const std::string path = fixture("sharp_state.json", assemblage_to_json(s));

  int code = 0;
  const std::string out = run_cli("witness '" + path + "' --functional l2", &code);
  CHECK(code == 2);
  const njson rep = njson::parse(out);
  CHECK(std::abs(rep["violation"].get<double>() - 0.5) <= 1e-9);
  CHECK(rep["x_star"] == 1);
  CHECK(rep["functional"] == "l2");

  // the trivial monotone never fires, so the exit code flips back to zero
  const std::string erg = run_cli("witness '" + path + "' --functional ergotropy", &code);
  CHECK(code == 0);
  CHECK(njson::parse(erg)["violation"].get<double>() <= 1e-12);
}

TEST_CASE("witness accepts hidden-object models without complaint") {
  std::mt19937_64 rng(90);
  const StateAssemblage s = testsup::random_ho_assemblage(2, 3, 2, rng);
  const std::string path = fixture("ho_state.json", assemblage_to_json(s));

  int code = 0;
  const std::string out = run_cli("witness '" + path + "' --functional l2", &code);
  CHECK(code == 0);
  CHECK(njson::parse(out)["violation"].get<double>() <= 1e-12);
}

TEST_CASE("witness searches over inputs for raw measurement documents") {
  const std::string path =
      fixture("pauli_meas.json", assemblage_to_json(noisy_pauli_assemblage(0.1)));

  int code = 0;
  const std::string out = run_cli("witness '" + path + "' --functional l2 --seed 7", &code);
  CHECK(code == 2);
  const double v = njson::parse(out)["violation"].get<double>();
  CHECK(v > 0.25);
  CHECK(v < 0.51);
}

TEST_CASE("witness recovers the ancilla measurement of an instrument document") {
  const MinimalDilation dil = minimal_dilation(amplitude_damping_kraus(0.5));
  const InstrumentAssemblage inst = instrument_from_dilation(dil, noisy_pauli_assemblage(0.1));
  const std::string path = fixture("damping_inst.json", assemblage_to_json(inst));

  int code = 0;
  const std::string out = run_cli("witness '" + path + "' --functional l2", &code);
  CHECK(code == 2);
  const double v = njson::parse(out)["violation"].get<double>();
  CHECK(v > 0.25);
  CHECK(v < 0.51);
}

TEST_CASE("witness failures name the offending element and missing context") {
  njson doc = njson::parse(assemblage_to_json(noisy_pauli_assemblage(0.3)));
  doc["elements"]["0:1"][0][1] = njson::array({0.9, 0.0});
  const std::string bad = fixture("bad_meas.json", doc.dump(2));

  int code = 0;
  std::string out = run_cli("witness '" + bad + "'", &code, true);
  CHECK(code == 1);
  CHECK(out.find("element \"0:1\"") != std::string::npos);

  // dimension-3 skew information needs an observable from somewhere
  std::mt19937_64 rng(91);
  const std::string qutrit =
      fixture("qutrit_state.json", assemblage_to_json(testsup::random_ho_assemblage(3, 2, 3, rng)));
  out = run_cli("witness '" + qutrit + "'", &code, true);
  CHECK(code == 1);
  CHECK(out.find("observable") != std::string::npos);

  // a side file fills the gap; the model is classical so nothing is certified
  const std::string obs = fixture("obs3.json",
                                  "[[[1.0,0.0],[0.0,0.0],[0.0,0.0]],"
                                  "[[0.0,0.0],[0.0,0.0],[0.0,0.0]],"
                                  "[[0.0,0.0],[0.0,0.0],[-1.0,0.0]]]");
  out = run_cli("witness '" + qutrit + "' --observable '" + obs + "'", &code);
  CHECK(code == 0);
  CHECK(njson::parse(out)["violation"].get<double>() <= 1e-12);

  const std::string basis = fixture("basis3.json",
                                    "[[[[1.0,0.0],[0.0,0.0],[0.0,0.0]],"
                                    "[[0.0,0.0],[0.0,0.0],[0.0,0.0]],"
                                    "[[0.0,0.0],[0.0,0.0],[0.0,0.0]]],"
                                    "[[[0.0,0.0],[0.0,0.0],[0.0,0.0]],"
                                    "[[0.0,0.0],[1.0,0.0],[0.0,0.0]],"
                                    "[[0.0,0.0],[0.0,0.0],[0.0,0.0]]],"
                                    "[[[0.0,0.0],[0.0,0.0],[0.0,0.0]],"
                                    "[[0.0,0.0],[0.0,0.0],[0.0,0.0]],"
                                    "[[0.0,0.0],[0.0,0.0],[1.0,0.0]]]]");
  out = run_cli("witness '" + qutrit + "' --functional l2 --basis '" + basis + "'", &code);
  CHECK(code == 0);
  CHECK(njson::parse(out)["violation"].get<double>() <= 1e-12);
}

TEST_CASE("scan output is byte-identical across worker counts") {
  int code1 = 0;
  int code3 = 0;
  const std::string args = "scan steering --theta 0.3:1.2:4 --w 0:0.6:5";
  const std::string one = run_cli(args, &code1, false, "INCOMPAT_THREADS=1 ");
  const std::string three = run_cli(args, &code3, false, "INCOMPAT_THREADS=3 ");
  CHECK(code1 == 0);
  CHECK(code3 == 0);
  CHECK(one == three);
  CHECK(one.substr(0, one.find('\n')) == "theta,w,violation_wysi,violation_l2");
  CHECK(count_lines(one) == 1 + 4 * 5);
}

TEST_CASE("instrument scans pin the undamped and fully damped rows to zero") {
  int code = 0;
  const std::string csv_path = g_dir + "/inst_scan.csv";
  run_cli("scan instrument --gamma 0:1:3 --w 0:1:3 --functional l2 --out '" + csv_path + "'",
          &code);
  CHECK(code == 0);

  const std::string csv = read_text_file(csv_path);
  CHECK(count_lines(csv) == 10);
  // rows 1..3 have gamma=0, rows 7..9 have gamma=1: the third field must be
  // the exact string "0"
  size_t pos = csv.find('\n') + 1;
  int row = 0;
  while (pos < csv.size()) {
    const size_t end = csv.find('\n', pos);
    const std::string line = csv.substr(pos, end - pos);
    if (row < 3 || row >= 6) {
      const size_t last_comma = line.rfind(',');
      CHECK(line.substr(last_comma + 1) == "0");
    }
    pos = end + 1;
    ++row;
  }
}

TEST_CASE("threshold reproduces both reference noise levels") {
  int code = 0;
  std::string out = run_cli("threshold mn --tol 1e-13", &code);
  CHECK(code == 0);
  CHECK(out == "0.292893218813\n");

  out = run_cli("threshold mi --tol 1e-12", &code);
  CHECK(code == 0);
  CHECK(out.rfind("0.2138486222", 0) == 0);
}

TEST_CASE("threshold custom interpolates a pinned-axis scan") {
  int code = 0;
  const std::string csv_path = g_dir + "/pinned.csv";
  run_cli("scan steering --theta 0.785398163397:0.785398163397:2 --w 0:0.5:64 "
          "--functional l2 --out '" + csv_path + "'", &code);
  CHECK(code == 0);

  const std::string out =
      run_cli("threshold custom --scan '" + csv_path + "' --column violation_l2", &code);
  CHECK(code == 0);
  CHECK(std::abs(std::stod(out) - 0.2928932188) <= 1e-3);

  // a column that never reaches zero cannot be bracketed
  const std::string flat_path = g_dir + "/flat.csv";
  run_cli("scan steering --theta 0.785398163397:0.785398163397:2 --w 0:0.1:8 "
          "--functional l2 --out '" + flat_path + "'", &code);
  std::string err =
      run_cli("threshold custom --scan '" + flat_path + "' --column violation_l2", &code, true);
  CHECK(code == 1);
  CHECK(err.find("never crosses") != std::string::npos);

  run_cli("threshold mn --tol 0", &code, true);
  CHECK(code == 1);
}

TEST_CASE("selftest and help are wired up") {
  int code = 0;
  const std::string out = run_cli("selftest --quick", &code, true);
  CHECK(code == 0);
  CHECK(out.find("suites passed") != std::string::npos);

  run_cli("", &code, true);
  CHECK(code == 1);

  const std::string help = run_cli("--help", &code, true);
  CHECK(code == 0);
  CHECK(help.find("witness") != std::string::npos);
  CHECK(help.find("scan") != std::string::npos);
  CHECK(help.find("threshold") != std::string::npos);
}

int main(int argc, char** argv) {
  if (const char* env = std::getenv("INCOMPAT_CLI")) {
    g_cli = env;
  } else {
    char buf[4096];
    const ssize_t n = readlink("/proc/self/exe", buf, sizeof buf - 1);
    if (n > 0) {
      buf[n] = '\0';
      std::string self(buf);
      self.erase(self.find_last_of('/'));
      g_cli = self + "/../tools/incompat";
    }
  }
  if (g_cli.empty() || access(g_cli.c_str(), X_OK) != 0) {
    std::fprintf(stderr, "cli binary not found (set INCOMPAT_CLI)\n");
    return 1;
  }

  char tmpl[] = "/tmp/incompat_cli_XXXXXX";
  if (!mkdtemp(tmpl)) {
    std::perror("mkdtemp");
    return 1;
  }
  g_dir = tmpl;

  doctest::Context ctx(argc, argv);
  const int rc = ctx.run();
  std::string cleanup = "rm -rf '" + g_dir + "'";
  if (std::system(cleanup.c_str()) != 0) std::fprintf(stderr, "cleanup failed\n");
  return rc;
}
