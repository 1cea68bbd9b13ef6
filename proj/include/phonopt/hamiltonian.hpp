#pragma once
// Hamiltonians of the two-laser driven pair of trapped atoms, in
// angular-frequency units (hbar = 1).
//
// The drive couples the internal transition through the transverse profile of
// a Laguerre-Gauss beam evaluated at the atom displacements. To first order in
// the displacements the profile contributes one position factor per unit of
// orbital angular momentum; for |ell| = 2 the interaction is quadratic in the
// ladder operators, and picking the two laser frequencies selects which
// quadratic term survives averaging. Five selections are supported, one per
// optical element analog.

#include "phonopt/config.hpp"
#include "phonopt/fock.hpp"
#include "phonopt/types.hpp"

#include <cmath>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace phonopt::ham {

enum class ElementKind { Pbs, HwpCm, HwpBr, QwpCm, QwpBr };

const char* kind_name(ElementKind k);
ElementKind kind_from_name(std::string_view name);  // pbs, hwp-cm, ..., throws

struct ElementParams {
  double theta = M_PI / 4;  // half-wave rotation parameter, [0, pi)
  int k = 1;                // quarter-wave quarter-period count, >= 1
};

struct LaserPair {
  double omega1 = 0.0;  // absolute laser frequencies, rad/s
  double omega2 = 0.0;
  // Detunings omega_i - omega0, carried exactly so that interaction-picture
  // phases do not pick up the cancellation error of re-subtracting omega0.
  double delta1 = 0.0;
  double delta2 = 0.0;
  bool merged = false;  // frequencies coincide; the pair acts as one drive term
};

struct FrequencySelection {
  LaserPair lasers;
  bool degenerate = false;  // the selection rule collapsed (no unique resonance)
  std::string note;
};

// Laser frequencies that make the intended quadratic term stationary:
//   PBS     omega0 +- (nu_y - mu_y)
//   HWP_CM  omega0 +- (mu_x - mu_y)
//   HWP_BR  omega0 +- (nu_x - nu_y)
//   QWP_*   both at omega0 (one physical drive)
FrequencySelection select_frequencies(ElementKind k, const TrapBeamConfig& c);

// Static part: (omega0/2) sigma_z + mu_x n_ax + mu_y n_ay + nu_x n_bx + nu_y n_by.
// Centre-of-mass operators carry the mu frequencies, breathing operators nu.
Mat build_H0(const TrapBeamConfig& c, const fock::ModeLayout& l);

// Beam-profile operator on the phonon factor:
//   [ eta_xc(ax^+ + ax) - eta_xb(bx^+ + bx)
//     + i s (eta_yc(ay^+ + ay) - eta_yb(by^+ + by)) ]^|ell|,   s = pol_sign.
// |ell| = 0 gives the identity. Overall field amplitude is absorbed into rabi.
Mat build_profile_operator(const TrapBeamConfig& c, const fock::ModeLayout& l);

// One phase-dressed ladder factor of the profile: amp * e^{i rate t} * op.
struct DressedLetter {
  SpMat op;       // phonon-factor ladder operator
  Complex amp;    // signed Lamb-Dicke amplitude
  double rate;    // -mode frequency for a, +mode frequency for a^+
};

// One monomial of the expanded drive: coeff * e^{i rate t} * mat * sigma^+,
// plus its adjoint.
struct DriveTerm {
  Complex coeff;
  double rate;
  SpMat mat;
};

// Interaction-picture drive for |ell| = 2:
//   H(t) = -(Omega/2) P(t) sigma^+ (e^{-i delta_1 t} + e^{-i delta_2 t}) + h.c.
// where P(t) is the profile with every ladder operator carrying its H0 phase
// (a e^{-i omega_mode t}, adjoints conjugated). A merged LaserPair contributes
// a single e^{-i delta t} factor. The class keeps the profile in factored
// sparse form so H(t) can be applied to a thin column block without ever
// forming the dense matrix.
class InteractionModel {
 public:
  InteractionModel(const TrapBeamConfig& c, const fock::ModeLayout& l,
                   const LaserPair& lasers);

  const fock::ModeLayout& layout() const { return layout_; }

  // Dense full-space H(t); Hermitian by construction.
  Mat hamiltonian(double t) const;

  // out = H(t) * in for a dim x k column block.
  struct Workspace {
    Mat b1, b2;  // k x phonon_dim scratch, transposed layout
  };
  void apply(double t, const Mat& in, Mat& out, Workspace& ws) const;

  // Same operator on a transposed block (k x dim): each basis index is a
  // contiguous length-k slice, which is what the integrator's inner loop
  // wants. `in_t` and `out_t` must be distinct objects.
  void apply_transposed(double t, const Mat& in_t, Mat& out_t,
                        Workspace& ws) const;

  // Upper bound on the spectral norm of H(t), for step-size control.
  double norm_bound() const;

  // Monomial table over both lasers (the sigma^+ side; adjoints implied).
  const std::vector<DriveTerm>& expanded_terms() const { return terms_; }

  // Sum of the stationary monomials, embedded in the full space with its
  // adjoint. This is the model's own answer to "what survives averaging".
  Mat static_hamiltonian() const;

  // Smallest nonzero |rate| among the oscillating monomials: the detuning gap
  // that a resonance argument competes against. Zero means the selection left
  // no oscillating term (degenerate input).
  double min_nonzero_gap() const;

 private:
  Vec scaled_letter_coeffs(double t) const;
  // Rates below this magnitude count as stationary; sits far above the
  // floating-point residue of frequency arithmetic and far below real gaps.
  double static_rate_cut() const;

  // One nonzero of one letter's column map: column src feeds row dst with a
  // real ladder weight (the complex amplitude lives in the letter phase).
  struct LetterEntry {
    long src, dst;
    double val;
    int letter;
  };

  fock::ModeLayout layout_;
  std::vector<DressedLetter> letters_;
  std::vector<LetterEntry> entries_;  // flattened over all letters
  std::vector<double> deltas_;  // one entry per drive term (merged: one)
  double half_rabi_ = 0.0;
  std::vector<DriveTerm> terms_;
};

// Convenience closure over InteractionModel::hamiltonian.
std::function<Mat(double)> build_full_interaction(const TrapBeamConfig& c,
                                                  const fock::ModeLayout& l,
                                                  const LaserPair& lasers);

// --------------------------- Effective elements ------------------------------

// Every element's averaged Hamiltonian factors as internal_op (x) g_phonon,
// with internal_op Hermitian with eigenvalues +-1:
//   PBS     -(Omega eta_yc eta_yb)(ay^+ by + ay by^+)          (x) (s+ + s-)
//   HWP_CM  -(s Omega eta_xc eta_yc)(ax^+ ay + ax ay^+)        (x) i(s+ - s-)
//   HWP_BR  -(s Omega eta_xb eta_yb)(bx^+ by + bx by^+)        (x) i(s+ - s-)
//   QWP_CM  -Omega[eta_xc^2 n_ax - eta_yc^2 n_ay
//                  + (eta_xc^2 - eta_yc^2)]                    (x) (s+ + s-)
//   QWP_BR  same with breathing operators and eta_*b
// where s = pol_sign. The QWP constant shifts every state in an internal
// eigensector equally, so it only moves a global phase.
struct EffectiveElement {
  ElementKind kind;
  Mat g_phonon;      // Hermitian generator on the phonon factor
  Mat2 internal_op;  // Hermitian internal factor, eigenvalues +-1
};

EffectiveElement build_effective_element(ElementKind k, const TrapBeamConfig& c,
                                         const fock::ModeLayout& l);

// Dense full-space internal_op (x) g_phonon.
Mat build_effective(ElementKind k, const TrapBeamConfig& c, const fock::ModeLayout& l);

// Run time that completes the element:
//   PBS      pi / (2 Omega eta_yc eta_yb)          (full mode swap)
//   HWP_*    2 theta / (Omega eta_xc eta_yc)       (rotation by 2 theta)
//   QWP_*    k pi / (2 Omega (eta_x^2 + eta_y^2))  (k quarter-wave periods)
double element_duration(ElementKind k, const TrapBeamConfig& c,
                        const ElementParams& p = {});

}  // namespace phonopt::ham
