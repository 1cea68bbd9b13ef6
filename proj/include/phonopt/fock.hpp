#pragma once
// Truncated Fock space of two trapped atoms: one shared two-level internal
// factor and four bosonic modes (centre-of-mass x/y and breathing x/y), each
// cut off at n_max phonons. Basis index order is internal slowest, then
// CM_X, CM_Y, BR_X, BR_Y fastest; |g, 0,0,0,0> has index 0.

#include "phonopt/types.hpp"

#include <array>

namespace phonopt::fock {

enum class Mode : int { CmX = 0, CmY = 1, BrX = 2, BrY = 3 };

inline constexpr std::array<Mode, 4> kAllModes{Mode::CmX, Mode::CmY,
                                               Mode::BrX, Mode::BrY};
const char* mode_name(Mode m);

// Internal levels. Index 0 is |g>, index 1 is |e>.
inline constexpr int kGround = 0;
inline constexpr int kExcited = 1;

struct ModeLayout {
  explicit ModeLayout(int n_max_in);

  int n_max;        // highest phonon number kept per mode
  int per_mode;     // n_max + 1
  long phonon_dim;  // per_mode^4
  long dim;         // 2 * phonon_dim

  // counts are ordered like kAllModes: (CM_X, CM_Y, BR_X, BR_Y).
  long encode(int level, const std::array<int, 4>& counts) const;
  void decode(long index, int& level, std::array<int, 4>& counts) const;
  long phonon_index(const std::array<int, 4>& counts) const;
  std::array<int, 4> phonon_counts(long phonon_idx) const;
};

// --------------------------- Mode operators ----------------------------------

// Operators on the phonon factor alone (dimension phonon_dim).
SpMat annihilation_phonon(const ModeLayout& l, Mode m);
SpMat creation_phonon(const ModeLayout& l, Mode m);
Mat number_phonon(const ModeLayout& l, Mode m);

// Full-space embeddings (dimension dim).
Mat annihilation(const ModeLayout& l, Mode m);
Mat number_op(const ModeLayout& l, Mode m);
Mat embed_internal(const ModeLayout& l, const Mat2& op);  // op (x) 1_phonon
Mat embed_phonon(const ModeLayout& l, const Mat& op);     // 1_2 (x) op

// --------------------------- Internal operators ------------------------------

Mat2 sigma_plus();   // |e><g|
Mat2 sigma_minus();  // |g><e|
Mat2 sigma_z();      // |e><e| - |g><g|

// --------------------------- Subspaces and states ----------------------------

// Projector onto total phonon number <= n_safe (the region where the truncated
// ladder algebra is exact); diagonal 0/1 on the full space.
Mat safe_projector(const ModeLayout& l, int n_safe);
// The same subspace as a 0/1 diagonal on the phonon factor.
Eigen::VectorXd safe_mask_phonon(const ModeLayout& l, int n_safe);

Vec basis_state(const ModeLayout& l, int level, const std::array<int, 4>& counts);
Vec phonon_basis_state(const ModeLayout& l, const std::array<int, 4>& counts);

// Reduced 2x2 internal density matrix of a pure full-space state.
Mat2 partial_trace_internal(const ModeLayout& l, const Vec& psi);
double internal_purity(const ModeLayout& l, const Vec& psi);

}  // namespace phonopt::fock
