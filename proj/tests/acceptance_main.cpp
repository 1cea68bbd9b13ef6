// Acceptance gate for the phonon optical-element simulator.  Each numbered
// criterion below runs end to end against the shipped configs and prints one
// [PASS]/[FAIL] line with its worst measured number; the process exits
// nonzero if any criterion fails.

#include "phonopt/analysis.hpp"
#include "phonopt/elements.hpp"
#include "phonopt/report.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

using namespace phonopt;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr Complex kI{0.0, 1.0};

// Every propagator built while running criteria 1-6 lands here; the hygiene
// criterion then audits the whole list.
std::vector<std::pair<std::string, double>> g_propagator_defects;

void record_propagator(const std::string& name, const Mat& u) {
  g_propagator_defects.emplace_back(name, unitarity_defect(u));
}

const cli::LoadedConfig& baseline() {
  static const cli::LoadedConfig lc =
      cli::load_config_file(std::string(PHONOPT_CONFIG_DIR) + "/baseline.cfg");
  return lc;
}

const cli::LoadedConfig& scan_config() {
  static const cli::LoadedConfig lc =
      cli::load_config_file(std::string(PHONOPT_CONFIG_DIR) + "/scan.cfg");
  return lc;
}

// Worst-deviation accumulator: criteria report their largest miss so a
// failure is immediately quantified.
struct Worst {
  double value = 0.0;
  void absorb(double v) { value = std::max(value, v); }
  void absorb(Complex got, Complex want) { absorb(std::abs(got - want)); }
};

int g_failures = 0;

void report(int index, const char* name, bool ok, const std::string& detail) {
  std::printf("[%s] %d. %s (%s)\n", ok ? "PASS" : "FAIL", index, name,
              detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// --------------------------- criterion 1: PBS --------------------------------

bool criterion_pbs_mode_transform() {
  const cli::RunConfig& run = baseline().run;
  const fock::ModeLayout l(run.n_max);
  const auto fit = analysis::element_mode_transform(ham::ElementKind::Pbs,
                                                    run.trap, l, {}, run.n_safe);
  const auto dec = elem::decompose(
      ham::build_effective_element(ham::ElementKind::Pbs, run.trap, l));
  const double t = ham::element_duration(ham::ElementKind::Pbs, run.trap);
  record_propagator("pbs_full_unitary", elem::full_unitary(dec, t));

  const Eigen::Matrix4cd& c = fit.coefficients;
  constexpr int ax = 0, ay = 1, bx = 2, by = 3;
  Worst w;
  // Coupled y pair: full swap.
  w.absorb(std::abs(std::abs(c(ay, by)) - 1.0));
  w.absorb(std::abs(std::abs(c(by, ay)) - 1.0));
  w.absorb(std::abs(c(ay, ay)));
  w.absorb(std::abs(c(by, by)));
  // Spectator x pair: identity.
  w.absorb(c(ax, ax), 1.0);
  w.absorb(c(bx, bx), 1.0);
  w.absorb(std::abs(c(ax, bx)));
  w.absorb(std::abs(c(bx, ax)));
  // No mixing between the families.
  for (int i : {ax, bx})
    for (int j : {ay, by}) {
      w.absorb(std::abs(c(i, j)));
      w.absorb(std::abs(c(j, i)));
    }
  const bool ok = w.value < 1e-8 && fit.residual < 1e-8;
  report(1, "beam-splitter mode transform", ok,
         "worst coefficient deviation " + fmt(w.value) + ", fit residual " +
             fmt(fit.residual));
  return ok;
}

// --------------------------- criterion 2: CNOT -------------------------------

bool criterion_cnot_truth_table() {
  const cli::RunConfig& run = baseline().run;
  const fock::ModeLayout l(run.n_max);
  bool ok = true;
  double worst_mag = 1.0, worst_phase = 0.0, worst_leak = 0.0;
  for (int s : {+1, -1}) {
    TrapBeamConfig c = run.trap;
    c.pol_sign = s;
    const elem::GateReport rep = elem::cnot_truth_table(c, l);
    g_propagator_defects.emplace_back(
        std::string("cnot_logical_block_s") + (s > 0 ? "+" : "-"),
        rep.unitarity_residual);
    const double p32 = rep.phases(3, 2), p23 = rep.phases(2, 3);
    worst_mag = std::min(worst_mag, rep.permutation_fidelity);
    worst_phase = std::max({worst_phase, std::abs(std::abs(p32) - kPi / 2),
                            std::abs(p32 - p23)});
    worst_leak = std::max(worst_leak, rep.max_leakage);
    ok = ok && rep.pattern_match && rep.permutation_fidelity >= 1.0 - 1e-10 &&
         std::abs(std::abs(p32) - kPi / 2) < 1e-8 && std::abs(p32 - p23) < 1e-8 &&
         rep.max_leakage < 1e-10 && 1.0 - rep.min_internal_purity < 1e-10;
  }
  report(2, "controlled-flip truth table, both handednesses", ok,
         "min on-pattern magnitude " + fmt(worst_mag) + ", worst phase miss " +
             fmt(worst_phase) + ", max leakage " + fmt(worst_leak));
  return ok;
}

// --------------------------- criterion 3: HWP --------------------------------

bool criterion_hwp_rotation_law() {
  const cli::RunConfig& run = baseline().run;
  const fock::ModeLayout l(run.n_max);
  constexpr int ax = 0, ay = 1, bx = 2, by = 3;
  Worst w;
  for (double theta : {kPi / 8, kPi / 6, kPi / 4}) {
    ham::ElementParams p;
    p.theta = theta;
    const double cth = std::cos(2.0 * theta);
    const Complex sth = -kI * std::sin(2.0 * theta);
    for (ham::ElementKind kind :
         {ham::ElementKind::HwpCm, ham::ElementKind::HwpBr}) {
      const auto fit =
          analysis::element_mode_transform(kind, run.trap, l, p, run.n_safe);
      const int r0 = kind == ham::ElementKind::HwpCm ? ax : bx;
      const int r1 = kind == ham::ElementKind::HwpCm ? ay : by;
      const int s0 = kind == ham::ElementKind::HwpCm ? bx : ax;
      const int s1 = kind == ham::ElementKind::HwpCm ? by : ay;
      const Eigen::Matrix4cd& c = fit.coefficients;
      w.absorb(c(r0, r0), cth);
      w.absorb(c(r1, r1), cth);
      w.absorb(c(r0, r1), sth);
      w.absorb(c(r1, r0), sth);
      w.absorb(c(s0, s0), 1.0);  // untouched family stays put
      w.absorb(c(s1, s1), 1.0);
      const auto dec =
          elem::decompose(ham::build_effective_element(kind, run.trap, l));
      record_propagator(std::string(ham::kind_name(kind)) + "_theta_" +
                            fmt(theta),
                        elem::full_unitary(
                            dec, ham::element_duration(kind, run.trap, p)));
    }
  }
  const auto x = elem::pauli_x_gate(run.trap, l);
  const bool x_ok = x.pattern_match && x.permutation_fidelity >= 1.0 - 1e-8 &&
                    x.max_off_pattern < 1e-8;
  const bool ok = w.value < 1e-8 && x_ok;
  report(3, "half-wave rotation law, both families", ok,
         "worst coefficient deviation " + fmt(w.value) +
             ", quarter-rotation flip fidelity " + fmt(x.permutation_fidelity));
  return ok;
}

// --------------------------- criterion 4: QWP --------------------------------

bool criterion_qwp_phase_law() {
  const cli::RunConfig& run = baseline().run;
  const fock::ModeLayout l(run.n_max);

  const auto s_gate = elem::phase_gate(run.trap, l);  // k = 1
  const auto z_gate = elem::pauli_z_gate(run.trap, l);  // k = 2
  Worst mags;
  for (const auto* rep : {&s_gate, &z_gate}) {
    mags.absorb(std::abs(rep->magnitudes(0, 0) - 1.0));
    mags.absorb(std::abs(rep->magnitudes(1, 1) - 1.0));
    mags.absorb(rep->magnitudes(0, 1));
    mags.absorb(rep->magnitudes(1, 0));
  }
  const double s_phase = std::abs(std::abs(s_gate.relative_phase) - kPi / 2);
  const double z_phase = std::abs(std::abs(z_gate.relative_phase) - kPi);

  // Constants of motion: every mode occupation commutes with the evolution.
  double worst_cons = 0.0;
  const auto dec = elem::decompose(
      ham::build_effective_element(ham::ElementKind::QwpCm, run.trap, l));
  ham::ElementParams p1;
  p1.k = 1;
  const double t1 = ham::element_duration(ham::ElementKind::QwpCm, run.trap, p1);
  for (int lambda : {-1, +1}) {
    const Mat u = elem::sector_unitary(dec, lambda, t1);
    record_propagator(std::string("qwp_sector_") + (lambda > 0 ? "+" : "-"), u);
    for (fock::Mode m : fock::kAllModes) {
      const Mat n = fock::number_phonon(l, m);
      const double scale = std::max(n.cwiseAbs().maxCoeff(), 1.0);
      worst_cons = std::max(
          worst_cons,
          (u.adjoint() * n * u - n).cwiseAbs().maxCoeff() / scale);
    }
  }

  const bool ok = mags.value < 1e-8 && s_phase < 1e-8 && z_phase < 1e-8 &&
                  worst_cons < 1e-10 && s_gate.pattern_match &&
                  z_gate.pattern_match;
  report(4, "quarter-wave phase law and constants of motion", ok,
         "phase misses " + fmt(s_phase) + "/" + fmt(z_phase) +
             ", worst occupation drift " + fmt(worst_cons));
  return ok;
}

// ------------------------- criterion 5: decoupling ---------------------------

bool criterion_decoupling() {
  const cli::RunConfig& run = baseline().run;
  const fock::ModeLayout l(run.n_max);
  const struct {
    ham::ElementKind kind;
    elem::InternalPrep prep;
  } cases[] = {{ham::ElementKind::Pbs, elem::InternalPrep::Plus},
               {ham::ElementKind::QwpCm, elem::InternalPrep::Plus},
               {ham::ElementKind::HwpCm, elem::InternalPrep::PlusI}};
  double worst_defect = 0.0;
  bool ok = true;
  for (const auto& cs : cases) {
    const auto trace = elem::decoupling_check(cs.kind, run.trap, l, cs.prep, 21);
    worst_defect = std::max(worst_defect, 1.0 - trace.min_purity);
    ok = ok && 1.0 - trace.min_purity < 1e-10;
  }
  const auto control = elem::decoupling_check(ham::ElementKind::Pbs, run.trap, l,
                                              elem::InternalPrep::Ground, 21);
  ok = ok && control.min_purity < 0.999;
  report(5, "internal-motional decoupling with negative control", ok,
         "worst matched-prep purity defect " + fmt(worst_defect) +
             ", ground-prep min purity " + fmt(control.min_purity));
  return ok;
}

// ----------------------- criterion 6: averaging scan -------------------------

bool criterion_rwa_scan() {
  const cli::RunConfig& run = scan_config().run;
  const fock::ModeLayout l(run.n_max);
  evo::IntegratorSpec spec;
  spec.steps = run.steps;

  const auto t0 = std::chrono::steady_clock::now();
  const analysis::RwaScan scan = analysis::rwa_scan(
      ham::ElementKind::Pbs, run.trap, l, {1.0e7, 1.0e6, 1.0e5, 1.0e4}, spec);
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();

  bool decreasing = true;
  double worst_doubling = 0.0;
  std::string infids;
  for (size_t i = 0; i < scan.points.size(); ++i) {
    worst_doubling = std::max(worst_doubling, scan.points[i].doubling_distance);
    if (i > 0 && !(scan.points[i].infidelity < scan.points[i - 1].infidelity))
      decreasing = false;
    infids += (i ? " > " : "") + fmt(scan.points[i].infidelity);
  }
  const bool ok = !scan.degenerate && scan.all_converged && decreasing &&
                  worst_doubling < 1e-8 && elapsed <= 120.0;
  report(6, "averaging-error ladder over four drive decades", ok,
         "infidelities " + infids + ", worst doubling " + fmt(worst_doubling) +
             ", elapsed " + fmt(elapsed) + " s");
  return ok;
}

// ------------------------ criterion 7: numerical hygiene ---------------------

bool criterion_hygiene() {
  bool ok = true;
  double worst_unitarity = 0.0;
  std::string offender;
  for (const auto& [name, defect] : g_propagator_defects) {
    if (defect > worst_unitarity) {
      worst_unitarity = defect;
      offender = name;
    }
    ok = ok && defect < 1e-10;
  }

  // One full time-dependent integration, audited as an isometry on its block.
  const cli::RunConfig& run = scan_config().run;
  const fock::ModeLayout l(run.n_max);
  TrapBeamConfig weak = run.trap;
  weak.rabi = 1.0e5;
  const double window = ham::element_duration(ham::ElementKind::Pbs, run.trap);
  const auto sel = ham::select_frequencies(ham::ElementKind::Pbs, weak);
  const ham::InteractionModel model(weak, l, sel.lasers);
  Mat initial(l.dim, 4);
  for (int j = 0; j < 4; ++j)
    initial.col(j) =
        elem::prepare(elem::InternalPrep::Plus, elem::logical_counts(j), l);
  evo::IntegratorSpec spec;
  spec.steps = run.steps;
  const evo::Integration integ =
      evo::propagate_columns(model, 0.0, window, initial, spec);
  const Mat gram = integ.result.adjoint() * integ.result;
  const double gram_defect =
      (gram - Mat::Identity(4, 4)).cwiseAbs().maxCoeff();
  ok = ok && integ.converged && gram_defect < 1e-10;

  // Truncated ladder algebra is exact on the safe subspace.
  const cli::RunConfig& base = baseline().run;
  const fock::ModeLayout lb(base.n_max);
  const Eigen::VectorXd mask = fock::safe_mask_phonon(lb, base.n_max - 1);
  double worst_comm = 0.0;
  for (fock::Mode m : fock::kAllModes) {
    const Mat a = Mat(fock::annihilation_phonon(lb, m));
    const Mat comm = a * a.adjoint() - a.adjoint() * a;
    const Mat masked = mask.asDiagonal() *
                       (comm - Mat::Identity(lb.phonon_dim, lb.phonon_dim)) *
                       mask.asDiagonal();
    worst_comm = std::max(worst_comm, masked.cwiseAbs().maxCoeff());
  }
  ok = ok && worst_comm < 1e-10;

  // Exhaustive index bijection at the scan cutoff.
  const fock::ModeLayout l3(3);
  std::vector<char> seen(static_cast<size_t>(l3.dim), 0);
  bool bijective = true;
  for (long idx = 0; idx < l3.dim; ++idx) {
    int level = -1;
    std::array<int, 4> counts{};
    l3.decode(idx, level, counts);
    bijective = bijective && level >= 0 && level <= 1;
    for (int n : counts) bijective = bijective && n >= 0 && n <= 3;
    bijective = bijective && l3.encode(level, counts) == idx &&
                !seen[static_cast<size_t>(idx)];
    seen[static_cast<size_t>(idx)] = 1;
  }
  ok = ok && bijective;

  report(7, "numerical hygiene: unitarity, ladder algebra, index bijection", ok,
         "worst propagator defect " + fmt(worst_unitarity) + " (" + offender +
             "), integration isometry defect " + fmt(gram_defect) +
             ", commutator defect " + fmt(worst_comm));
  return ok;
}

// ------------------------- criterion 8: regime report ------------------------

bool criterion_regime() {
  const cli::RunConfig& run = baseline().run;
  const auto rep = analysis::regime_report(run.trap, run.regime);
  bool ok = rep.all_pass && !rep.checks.empty();
  double min_ratio = std::numeric_limits<double>::infinity();
  for (const auto& chk : rep.checks) {
    ok = ok && chk.applicable && chk.pass && chk.ratio >= 1e2;
    min_ratio = std::min(min_ratio, chk.ratio);
  }
  report(8, "timescale separation report", ok,
         "slowest element " + fmt(rep.longest_duration) + " s, min ratio " +
             fmt(min_ratio));
  return ok;
}

// --------------------------- criterion 9: CLI --------------------------------

struct CliRun {
  int exit_code = -1;
  std::string out;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

CliRun run_cli(const std::string& args, const fs::path& dir) {
  static int seq = 0;
  const fs::path out = dir / ("acc_out" + std::to_string(seq++) + ".txt");
  const std::string cmd = std::string(PHONOPT_CLI_PATH) + " " + args + " > " +
                          out.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  CliRun r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  return r;
}

bool criterion_cli_contract() {
  const fs::path dir =
      fs::temp_directory_path() / ("phonopt_acc_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const std::string cfg = std::string(PHONOPT_CONFIG_DIR) + "/scan.cfg";

  const fs::path csv1 = dir / "ve1.csv", csv2 = dir / "ve2.csv";
  const CliRun ok1 = run_cli(
      "verify-element --kind pbs --config " + cfg + " --out " + csv1.string(),
      dir);
  const CliRun ok2 = run_cli(
      "verify-element --kind pbs --config " + cfg + " --out " + csv2.string(),
      dir);
  const std::string bytes1 = slurp(csv1);
  const bool reproducible =
      ok1.exit_code == 0 && ok2.exit_code == 0 && !bytes1.empty() &&
      bytes1 == slurp(csv2);

  const CliRun gate = run_cli("truth-table --gate cnot --config " + cfg, dir);
  const CliRun deliberate_failure = run_cli(
      "verify-element --kind pbs --prep ground --config " + cfg, dir);
  const CliRun usage_error = run_cli("rwa-scan --omegas 1.0e5 --config " + cfg, dir);
  const CliRun unknown = run_cli("no-such-command", dir);

  const bool ok = reproducible && gate.exit_code == 0 &&
                  deliberate_failure.exit_code == 1 &&
                  usage_error.exit_code == 2 && unknown.exit_code == 2;
  report(9, "command-line contract and reproducible output", ok,
         std::string("byte-identical ") + (reproducible ? "yes" : "NO") +
             ", exit codes " + std::to_string(gate.exit_code) + "/" +
             std::to_string(deliberate_failure.exit_code) + "/" +
             std::to_string(usage_error.exit_code) + "/" +
             std::to_string(unknown.exit_code) + " (want 0/1/2/2)");
  return ok;
}

}  // namespace

int main() {
  std::printf("acceptance: phonon optical-element simulator\n");
  try {
    criterion_pbs_mode_transform();
    criterion_cnot_truth_table();
    criterion_hwp_rotation_law();
    criterion_qwp_phase_law();
    criterion_decoupling();
    criterion_rwa_scan();
    criterion_hygiene();
    criterion_regime();
    criterion_cli_contract();
  } catch (const std::exception& e) {
    std::printf("[FAIL] acceptance aborted: %s\n", e.what());
    return 1;
  }
  std::printf("acceptance: %d of 9 criteria failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
