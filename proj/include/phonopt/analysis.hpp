#pragma once
// Quantitative verification: mode-transform (Bogoliubov coefficient)
// extraction, full-vs-effective infidelity scans that measure the averaging
// error rather than assuming it, and order-of-magnitude regime checks.

#include "phonopt/config.hpp"
#include "phonopt/elements.hpp"
#include "phonopt/evolution.hpp"
#include "phonopt/fock.hpp"
#include "phonopt/hamiltonian.hpp"
#include "phonopt/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace phonopt::analysis {

// ------------------------- mode-transform fits -------------------------------

struct ModeTransformReport {
  // U^+ a_i U ~ sum_j c(i, j) a_j on the fit domain; rows follow fock::Mode.
  Eigen::Matrix4cd coefficients;
  double residual = 0.0;          // worst relative Frobenius residual over rows
  double unitarity_defect = 0.0;  // ||C^+ C - I||_max of the coefficient matrix
  double condition = 0.0;         // conditioning of the fit normal equations
};

// Least-squares fit of U^+ a_i U onto {a_j}, domain-restricted to total phonon
// number <= n_safe where the truncated ladder algebra is exact. u acts on the
// phonon factor (one internal sector). Throws when the fit basis is rank
// deficient (n_safe must admit at least one phonon).
ModeTransformReport extract_mode_transform(const Mat& u_phonon,
                                           const fock::ModeLayout& l,
                                           int n_safe);

// Fit of the element's own sector unitary at its element duration, in the
// sector selected by the element's decoupling preparation.
ModeTransformReport element_mode_transform(ham::ElementKind kind,
                                           const TrapBeamConfig& c,
                                           const fock::ModeLayout& l,
                                           const ham::ElementParams& params,
                                           int n_safe);

// ------------------------------ averaging scans ------------------------------

struct RwaPoint {
  double rabi = 0.0;
  double gap = 0.0;         // smallest nonzero detuning among dropped terms
  double ratio = 0.0;       // effective coupling rate / gap
  double infidelity = 0.0;  // 1 - |<U_eff, U_full>|^2 / 16 on the logical block
  long steps = 0;
  double doubling_distance = 0.0;
  bool converged = false;
};

struct RwaScan {
  std::vector<RwaPoint> points;  // same order as the rabi list (descending)
  bool degenerate = false;    // frequency selection collapsed; trend not judged
  bool all_converged = false;
  bool monotone = false;      // strictly decreasing infidelity down the list
};

// Effective coupling rate of the element: the rate competing with the gap.
double effective_rate(ham::ElementKind kind, const TrapBeamConfig& c);

// For each rabi value (strictly descending, at least 2): integrate the full
// interaction-picture drive and the effective element over the SAME fixed
// window (the base config's element duration), starting from the decoupling
// preparation on each logical basis state, and report the block infidelity.
// The fixed window keeps the points comparable: only the drive strength
// changes along the scan.
RwaScan rwa_scan(ham::ElementKind kind, const TrapBeamConfig& base,
                 const fock::ModeLayout& l, const std::vector<double>& rabis,
                 const evo::IntegratorSpec& spec = {},
                 const ham::ElementParams& params = {});

// ------------------------------ regime report --------------------------------

struct RegimeInputs {
  std::optional<double> lifetime;      // internal-state lifetime, s
  std::optional<double> damping_time;  // mechanical damping time, s
  std::optional<double> distance;      // interatomic distance, m
  std::optional<int> principal_n;      // principal quantum number
};

struct RegimeCheck {
  std::string name;
  bool applicable = false;  // inputs present
  bool pass = false;
  double ratio = 0.0;       // achieved separation; pass needs >= 100
  std::string note;
};

struct RegimeReport {
  double longest_duration = 0.0;  // slowest element at default angles, s
  std::vector<RegimeCheck> checks;
  bool all_pass = false;  // over the applicable checks
};

// Order-of-magnitude sanity: element durations against the internal lifetime
// and mechanical damping, and the Rabi rate against the resonant dipole-dipole
// rate (e a0 n^2)^2 / (4 pi eps0 hbar r^3). Checks with missing inputs are
// reported as skipped, never silently passed.
RegimeReport regime_report(const TrapBeamConfig& c, const RegimeInputs& in);

}  // namespace phonopt::analysis
