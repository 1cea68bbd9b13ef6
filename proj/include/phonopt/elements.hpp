#pragma once
// Optical-element semantics: internal preparations, the single-phonon logical
// encoding, element application through the internal-sector decomposition,
// gate truth tables, and decoupling diagnostics.

#include "phonopt/config.hpp"
#include "phonopt/evolution.hpp"
#include "phonopt/fock.hpp"
#include "phonopt/hamiltonian.hpp"
#include "phonopt/types.hpp"

#include <array>
#include <string>
#include <string_view>
#include <vector>

namespace phonopt::elem {

// ------------------------- internal preparations -----------------------------

enum class InternalPrep { Plus, PlusI, Ground };

const char* prep_name(InternalPrep p);               // plus, plus-i, ground
InternalPrep prep_from_name(std::string_view name);  // throws on unknown name

// (|e>+|g>)/sqrt2, (|e>+i|g>)/sqrt2, |g> in the (g, e) component order.
Vec2 prep_vector(InternalPrep p);

// The internal state that diagonalizes the element's internal factor, so the
// motional dynamics factorize: plus for PBS/QWP kinds, plus-i for HWP kinds.
InternalPrep required_prep(ham::ElementKind k);

// Eigenvalue of the element's internal factor on its required preparation
// (+1 for PBS/QWP, -1 for HWP); selects the sector for mode-transform fits.
int prep_sector(ham::ElementKind k);

// --------------------------- logical encoding --------------------------------

// Two-qubit encoding on single-phonon states. The control bit is the
// vibration direction (0 -> x, 1 -> y), the target bit the mode family
// (0 -> centre of mass, 1 -> breathing):
//   index 0 = |00>: one CM x phonon      index 1 = |01>: one breathing x phonon
//   index 2 = |10>: one CM y phonon      index 3 = |11>: one breathing y phonon
std::array<int, 4> logical_counts(int index);
long logical_phonon_index(int index, const fock::ModeLayout& l);

// Normalized product state prep (x) Fock state.
Vec prepare(InternalPrep p, const std::array<int, 4>& counts,
            const fock::ModeLayout& l);

// ------------------------- sector decomposition ------------------------------

// An effective element factors as internal_op (x) g_phonon with internal_op
// eigenvalues +-1, so exp(-i H t) = sum_s |v_s><v_s| (x) exp(-i lambda_s g t)
// and everything can be computed on the phonon factor alone.
struct SectorDecomposition {
  ham::EffectiveElement element;
  Eigen::Vector2d eigenvalues;   // ascending: (-1, +1)
  Mat2 eigenvectors;             // columns matching eigenvalues
  evo::HermitianEig phonon_eig;  // of g_phonon
};

SectorDecomposition decompose(const ham::EffectiveElement& e);

// exp(-i lambda g t) for the sector with internal eigenvalue lambda = +-1.
Mat sector_unitary(const SectorDecomposition& d, int lambda, double t);

// Full-space exp(-i H t), assembled from the two sectors.
Mat full_unitary(const SectorDecomposition& d, double t);

Vec evolve_state(const SectorDecomposition& d, const Vec& psi, double t);

// Effective evolution of prep (x) |counts> over the element duration. The
// preparation must be the element's decoupling eigenstate unless
// allow_any_prep is set; durations and angles come from params.
Vec apply_element(ham::ElementKind kind, const TrapBeamConfig& c,
                  const fock::ModeLayout& l, const ham::ElementParams& params,
                  InternalPrep prep, const std::array<int, 4>& counts,
                  bool allow_any_prep = false);

// ------------------------------ gate reports ---------------------------------

// Logical-block matrix of a gate with every magnitude and phase on the record.
// The global phase is fixed by rotating the first nonzero diagonal entry (or,
// failing that, the largest entry of the first column) to be real positive.
struct GateReport {
  std::string gate;
  Mat logical;     // raw logical block, 4x4 or 2x2
  Mat normalized;  // logical with the global phase stripped
  Complex global_phase{1.0, 0.0};
  Eigen::MatrixXd magnitudes;
  Eigen::MatrixXd phases;          // arg of normalized entries; 0 below 1e-14
  Eigen::MatrixXd target_pattern;  // expected magnitude pattern, entries 0/1
  double permutation_fidelity = 0.0;  // smallest on-pattern magnitude
  double max_off_pattern = 0.0;       // largest off-pattern magnitude
  bool pattern_match = false;
  double relative_phase = 0.0;  // arg(last diag / first diag), diagonal gates
  std::vector<double> column_leakage;  // 1 - column norm^2 per logical input
  double max_leakage = 0.0;
  double min_internal_purity = 1.0;  // decoupling trace with prescribed prep
  double unitarity_residual = 0.0;   // ||M^+ M - I||_max of the logical block
};

// PBS on the four logical states: CNOT pattern (|10> <-> |11| swap).
GateReport cnot_truth_table(const TrapBeamConfig& c, const fock::ModeLayout& l);

// Half-wave rotation 2 theta = pi/2 on the direction qubit of one CM phonon:
// Pauli-X pattern, overall phase reported and stripped.
GateReport pauli_x_gate(const TrapBeamConfig& c, const fock::ModeLayout& l);

// Quarter-wave phases on the direction qubit of one CM phonon: k = 2 gives the
// Pauli-Z pattern (relative phase pi); k = 1 is the phase gate (pi/2).
GateReport pauli_z_gate(const TrapBeamConfig& c, const fock::ModeLayout& l,
                        int k = 2);
GateReport phase_gate(const TrapBeamConfig& c, const fock::ModeLayout& l);

// Dispatch by name: cnot, x, z, s. Throws on unknown gate.
GateReport gate_report(std::string_view gate, const TrapBeamConfig& c,
                       const fock::ModeLayout& l);

// --------------------------- decoupling check --------------------------------

// Internal reduced purity of (prep (x) logical superposition) sampled at
// n_samples times across the element duration. Purity pinned at 1 certifies
// that internal and motional degrees of freedom stay factorized.
struct PurityTrace {
  std::vector<double> times;
  std::vector<double> purity;
  double min_purity = 1.0;
};

PurityTrace decoupling_check(ham::ElementKind kind, const TrapBeamConfig& c,
                             const fock::ModeLayout& l, InternalPrep prep,
                             int n_samples,
                             const ham::ElementParams& params = {});

}  // namespace phonopt::elem
