// incompat: build assemblages from files, evaluate incompatibility witnesses,
// sweep the named parameter panels and locate violation thresholds.
//
// Exit codes: 0 = ran fine, no violation certified; 2 = violation certified;
// 1 = any error (bad file, bad flags, unwritable output).

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "incompat/serialization.hpp"
#include "selftest.hpp"

namespace {

using namespace incompat;

// ------------------------------------------------------------ flag types --

struct WitnessOpts {
  std::string input;
  std::string functional = "wysi";
  std::string observable_path;
  std::string basis_path;
  uint64_t seed = 20260814;
};

struct ScanOpts {
  std::string panel;
  std::vector<std::string> functionals = {"wysi", "l2"};
  std::string theta, w, gamma; // "lo:hi:n"
  std::string out;
  uint64_t seed = 20260814; // scans are deterministic; accepted for interface stability
};

struct ThresholdOpts {
  std::string curve;
  double tol = 1e-10;
  std::string scan_path;
  std::string column;
  std::string bracket = "0:0.5";
};

ScanAxis parse_axis(const std::string& name, const std::string& spec, double lo, double hi,
                    int n) {
  ScanAxis axis{name, lo, hi, n};
  if (!spec.empty()) {
    char trail = 0;
    if (std::sscanf(spec.c_str(), "%lf:%lf:%d%c", &axis.lo, &axis.hi, &axis.resolution, &trail) !=
        3)
      throw ValidationError("--" + name + " expects lo:hi:n, got '" + spec + "'");
  }
  axis.validate();
  return axis;
}

void parse_bracket(const std::string& spec, double& lo, double& hi) {
  char trail = 0;
  if (std::sscanf(spec.c_str(), "%lf:%lf%c", &lo, &hi, &trail) != 2)
    throw ValidationError("--bracket expects lo:hi, got '" + spec + "'");
}

// ------------------------------------------------------------- commands ---

int run_witness(const WitnessOpts& o) {
  const AssemblageDocument doc = load_assemblage(o.input);
  FunctionalContext ctx = doc.context;
  if (!o.observable_path.empty()) ctx.observable = load_observable(o.observable_path);
  if (!o.basis_path.empty()) ctx.basis = load_basis(o.basis_path);

  OptimizerConfig cfg;
  cfg.seed = o.seed;

  WitnessReport report;
  if (doc.state) {
    report = violation(make_functional(o.functional, doc.state->dim(), ctx), *doc.state);
  } else if (doc.measurement) {
    const WitnessFunctional f = make_functional(o.functional, doc.measurement->dim(), ctx);
    report = measurement_incompatibility(f, *doc.measurement, cfg).report;
  } else {
    // an instrument is judged through the measurement it induces on the
    // ancilla of the minimal dilation of its own channel
    const MeasurementAssemblage anc = ancilla_measurement_from_instrument(*doc.instrument);
    const WitnessFunctional f = make_functional(o.functional, anc.dim(), ctx);
    report = measurement_incompatibility(f, anc, cfg).report;
  }
  std::fputs(report_to_json(report).c_str(), stdout);
  return report.violation > 0.0 ? 2 : 0;
}

int run_scan(const ScanOpts& o) {
  std::vector<WitnessFunctional> fs;
  for (const auto& name : o.functionals) fs.push_back(make_functional(name, 2));

  ScanTable table;
  if (o.panel == "steering") {
    const ScanAxis theta = parse_axis("theta", o.theta, 0.0, M_PI / 2.0, 101);
    const ScanAxis w = parse_axis("w", o.w, 0.0, 1.0, 101);
    table = scan_steering(fs, theta, w);
  } else {
    const ScanAxis gamma = parse_axis("gamma", o.gamma, 0.0, 1.0, 101);
    const ScanAxis w = parse_axis("w", o.w, 0.0, 1.0, 101);
    table = scan_instrument(fs, gamma, w);
  }

  const std::string csv = scan_to_csv(table);
  if (o.out.empty())
    std::fputs(csv.c_str(), stdout);
  else
    write_text_file(o.out, csv);
  std::fputs(scan_summary(table).c_str(), stderr);
  return 0;
}

// first sign boundary of a scanned violation column, linearly interpolated
double csv_crossing(const std::string& path, const std::string& column) {
  if (path.empty() || column.empty())
    throw ValidationError("threshold custom: --scan and --column are required");
  const std::string text = read_text_file(path);

  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string cell;
  for (char c : text) {
    if (c == ',' || c == '\n') {
      row.push_back(cell);
      cell.clear();
      if (c == '\n') {
        if (row.size() > 1 || !row[0].empty()) rows.push_back(row);
        row.clear();
      }
    } else {
      cell += c;
    }
  }
  if (rows.size() < 3) throw ValidationError(path + ": need a header and at least two rows");

  const std::vector<std::string>& header = rows[0];
  size_t col = header.size();
  for (size_t i = 0; i < header.size(); ++i)
    if (header[i] == column) col = i;
  if (col >= header.size())
    throw ValidationError(path + ": no column named \"" + column + "\"");
  if (header.size() < 3)
    throw ValidationError(path + ": expected two axis columns before the values");

  // the sweep has to be one-dimensional: the first axis must stay fixed
  for (size_t r = 2; r < rows.size(); ++r)
    if (rows[r][0] != rows[1][0])
      throw ValidationError(path + ": first axis varies; rerun the scan with a pinned axis");

  std::vector<double> xs, vs;
  for (size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != header.size())
      throw ValidationError(path + ": ragged row " + std::to_string(r + 1));
    xs.push_back(std::stod(rows[r][1]));
    vs.push_back(std::stod(rows[r][col]));
  }
  for (size_t k = 0; k + 1 < vs.size(); ++k)
    if (vs[k] > 0.0 && vs[k + 1] <= 0.0)
      return xs[k] + (xs[k + 1] - xs[k]) * vs[k] / (vs[k] - vs[k + 1]);
  throw BracketError(path + ": column \"" + column + "\" never crosses zero");
}

int run_threshold(const ThresholdOpts& o) {
  if (!(o.tol > 0.0)) throw ValidationError("--tol must be positive");
  double lo = 0.0, hi = 0.5;
  parse_bracket(o.bracket, lo, hi);

  double root = 0.0;
  if (o.curve == "mn") {
    root = find_threshold([](double w) { return analytic_mn_signed(w); }, lo, hi, o.tol);
  } else if (o.curve == "mi") {
    // the engine is the authority for this curve; bisect it directly
    const WitnessFunctional wy = make_functional("wysi", 2);
    root = find_threshold(
        [&wy](double w) { return steering_cell_signed(M_PI / 4.0, w, wy); }, lo, hi, o.tol);
  } else {
    root = csv_crossing(o.scan_path, o.column);
  }
  std::printf("%s\n", format_sig12(root).c_str());
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"incompatibility witness toolkit: certify that state, measurement or "
               "instrument assemblages admit no hidden-object model"};
  app.require_subcommand(1);

  WitnessOpts wo;
  CLI::App* wit = app.add_subcommand(
      "witness", "evaluate one assemblage file; exit code 2 certifies a violation");
  wit->add_option("input", wo.input, "assemblage JSON document")->required();
  wit->add_option("--functional", wo.functional, "functional name (wysi|l2|ergotropy)")
      ->capture_default_str();
  wit->add_option("--observable", wo.observable_path, "JSON matrix file (wysi/ergotropy)");
  wit->add_option("--basis", wo.basis_path, "JSON projector-array file (l2)");
  wit->add_option("--seed", wo.seed, "optimizer candidate seed")->capture_default_str();

  ScanOpts so;
  CLI::App* sc = app.add_subcommand("scan", "sweep a violation panel onto CSV");
  sc->add_option("panel", so.panel, "steering (theta x w) or instrument (gamma x w)")
      ->required()
      ->check(CLI::IsMember({"steering", "instrument"}));
  sc->add_option("--functional", so.functionals, "functionals to tabulate")
      ->capture_default_str();
  sc->add_option("--theta", so.theta, "axis as lo:hi:n (default 0:pi/2:101)");
  sc->add_option("--w", so.w, "axis as lo:hi:n (default 0:1:101)");
  sc->add_option("--gamma", so.gamma, "axis as lo:hi:n (default 0:1:101)");
  sc->add_option("--out", so.out, "write the CSV here instead of stdout");
  sc->add_option("--seed", so.seed, "accepted for interface stability (scans are deterministic)")
      ->capture_default_str();

  ThresholdOpts to;
  CLI::App* th = app.add_subcommand("threshold", "locate the zero of a violation curve");
  th->add_option("curve", to.curve, "mn | mi | custom")
      ->required()
      ->check(CLI::IsMember({"mn", "mi", "custom"}));
  th->add_option("--tol", to.tol, "bisection width")->capture_default_str();
  th->add_option("--scan", to.scan_path, "scan CSV to read (custom)");
  th->add_option("--column", to.column, "violation column name (custom)");
  th->add_option("--bracket", to.bracket, "search interval lo:hi")->capture_default_str();

  bool full = false, quick = false;
  std::string fixtures_dir;
  CLI::App* st = app.add_subcommand("selftest", "run the built-in verification suites");
  st->add_flag("--full", full, "include the long sweeps (<= 5 min)");
  st->add_flag("--quick", quick, "short suites only (default, <= 10 s)");
  st->add_option("--fixtures", fixtures_dir, "also parse every .json fixture in this directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e); // --help and friends
    app.exit(e);
    return 1;
  }

  try {
    if (wit->parsed()) return run_witness(wo);
    if (sc->parsed()) return run_scan(so);
    if (th->parsed()) return run_threshold(to);
    if (st->parsed()) return run_selftest(full, fixtures_dir);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
