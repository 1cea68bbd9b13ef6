#include "phonopt/fock.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace phonopt {

double max_abs_diff(const Mat& a, const Mat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("max_abs_diff: shape mismatch");
  return (a - b).cwiseAbs().maxCoeff();
}

bool is_hermitian(const Mat& a, double rel_tol) {
  if (a.rows() != a.cols()) return false;
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  return max_abs_diff(a, a.adjoint()) <= rel_tol * scale;
}

double unitarity_defect(const Mat& u) {
  Mat p = u.adjoint() * u;
  return max_abs_diff(p, Mat::Identity(u.cols(), u.cols()));
}

bool is_unitary(const Mat& u, double abs_tol) {
  if (u.rows() != u.cols()) return false;
  return unitarity_defect(u) <= abs_tol;
}

namespace fock {

const char* mode_name(Mode m) {
  switch (m) {
    case Mode::CmX: return "cm_x";
    case Mode::CmY: return "cm_y";
    case Mode::BrX: return "br_x";
    case Mode::BrY: return "br_y";
  }
  throw std::invalid_argument("mode_name: unknown mode");
}

ModeLayout::ModeLayout(int n_max_in) : n_max(n_max_in) {
  if (n_max < 2)
    throw std::invalid_argument("ModeLayout: n_max must be >= 2, got " +
                                std::to_string(n_max));
  per_mode = n_max + 1;
  phonon_dim = 1;
  for (int i = 0; i < 4; ++i) phonon_dim *= per_mode;
  dim = 2 * phonon_dim;
}

long ModeLayout::phonon_index(const std::array<int, 4>& counts) const {
  long idx = 0;
  for (int i = 0; i < 4; ++i) {
    if (counts[i] < 0 || counts[i] > n_max)
      throw std::out_of_range("ModeLayout::phonon_index: occupation " +
                              std::to_string(counts[i]) + " outside [0, " +
                              std::to_string(n_max) + "]");
    idx = idx * per_mode + counts[i];
  }
  return idx;
}

long ModeLayout::encode(int level, const std::array<int, 4>& counts) const {
  if (level != kGround && level != kExcited)
    throw std::out_of_range("ModeLayout::encode: internal level must be 0 or 1");
  return level * phonon_dim + phonon_index(counts);
}

std::array<int, 4> ModeLayout::phonon_counts(long phonon_idx) const {
  if (phonon_idx < 0 || phonon_idx >= phonon_dim)
    throw std::out_of_range("ModeLayout::phonon_counts: index out of range");
  std::array<int, 4> counts{};
  for (int i = 3; i >= 0; --i) {
    counts[i] = static_cast<int>(phonon_idx % per_mode);
    phonon_idx /= per_mode;
  }
  return counts;
}

void ModeLayout::decode(long index, int& level, std::array<int, 4>& counts) const {
  if (index < 0 || index >= dim)
    throw std::out_of_range("ModeLayout::decode: index out of range");
  level = static_cast<int>(index / phonon_dim);
  counts = phonon_counts(index % phonon_dim);
}

// --------------------------- Mode operators ----------------------------------

// Stride of one phonon step in the given mode within the phonon-factor index.
static long mode_stride(const ModeLayout& l, Mode m) {
  long s = 1;
  for (int i = 3; i > static_cast<int>(m); --i) s *= l.per_mode;
  return s;
}

SpMat annihilation_phonon(const ModeLayout& l, Mode m) {
  // a |n> = sqrt(n) |n-1>, acting on one tensor factor.
  const long stride = mode_stride(l, m);
  std::vector<Eigen::Triplet<Complex>> trip;
  trip.reserve(l.phonon_dim);
  for (long idx = 0; idx < l.phonon_dim; ++idx) {
    const int n = static_cast<int>((idx / stride) % l.per_mode);
    if (n > 0) trip.emplace_back(idx - stride, idx, std::sqrt(double(n)));
  }
  SpMat a(l.phonon_dim, l.phonon_dim);
  a.setFromTriplets(trip.begin(), trip.end());
  return a;
}

SpMat creation_phonon(const ModeLayout& l, Mode m) {
  return SpMat(annihilation_phonon(l, m).adjoint());
}

Mat number_phonon(const ModeLayout& l, Mode m) {
  const long stride = mode_stride(l, m);
  Mat n = Mat::Zero(l.phonon_dim, l.phonon_dim);
  for (long idx = 0; idx < l.phonon_dim; ++idx)
    n(idx, idx) = double((idx / stride) % l.per_mode);
  return n;
}

Mat annihilation(const ModeLayout& l, Mode m) {
  return embed_phonon(l, Mat(annihilation_phonon(l, m)));
}

Mat number_op(const ModeLayout& l, Mode m) {
  return embed_phonon(l, number_phonon(l, m));
}

Mat embed_internal(const ModeLayout& l, const Mat2& op) {
  Mat full = Mat::Zero(l.dim, l.dim);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) {
      if (op(r, c) == Complex(0)) continue;
      for (long p = 0; p < l.phonon_dim; ++p)
        full(r * l.phonon_dim + p, c * l.phonon_dim + p) = op(r, c);
    }
  return full;
}

Mat embed_phonon(const ModeLayout& l, const Mat& op) {
  if (op.rows() != l.phonon_dim || op.cols() != l.phonon_dim)
    throw std::invalid_argument("embed_phonon: operator size does not match layout");
  Mat full = Mat::Zero(l.dim, l.dim);
  full.topLeftCorner(l.phonon_dim, l.phonon_dim) = op;
  full.bottomRightCorner(l.phonon_dim, l.phonon_dim) = op;
  return full;
}

// --------------------------- Internal operators ------------------------------

Mat2 sigma_plus() {
  Mat2 s = Mat2::Zero();
  s(kExcited, kGround) = 1.0;
  return s;
}

Mat2 sigma_minus() {
  Mat2 s = Mat2::Zero();
  s(kGround, kExcited) = 1.0;
  return s;
}

Mat2 sigma_z() {
  Mat2 s = Mat2::Zero();
  s(kExcited, kExcited) = 1.0;
  s(kGround, kGround) = -1.0;
  return s;
}

// --------------------------- Subspaces and states ----------------------------

Eigen::VectorXd safe_mask_phonon(const ModeLayout& l, int n_safe) {
  if (n_safe < 0 || n_safe > l.n_max)
    throw std::invalid_argument("safe_mask_phonon: n_safe must lie in [0, n_max]");
  Eigen::VectorXd mask = Eigen::VectorXd::Zero(l.phonon_dim);
  for (long idx = 0; idx < l.phonon_dim; ++idx) {
    const auto counts = l.phonon_counts(idx);
    const int total = counts[0] + counts[1] + counts[2] + counts[3];
    if (total <= n_safe) mask(idx) = 1.0;
  }
  return mask;
}

Mat safe_projector(const ModeLayout& l, int n_safe) {
  const Eigen::VectorXd mask = safe_mask_phonon(l, n_safe);
  Mat p = Mat::Zero(l.dim, l.dim);
  for (long idx = 0; idx < l.phonon_dim; ++idx) {
    p(idx, idx) = mask(idx);
    p(l.phonon_dim + idx, l.phonon_dim + idx) = mask(idx);
  }
  return p;
}

Vec phonon_basis_state(const ModeLayout& l, const std::array<int, 4>& counts) {
  Vec v = Vec::Zero(l.phonon_dim);
  v(l.phonon_index(counts)) = 1.0;
  return v;
}

Vec basis_state(const ModeLayout& l, int level, const std::array<int, 4>& counts) {
  Vec v = Vec::Zero(l.dim);
  v(l.encode(level, counts)) = 1.0;
  return v;
}

Mat2 partial_trace_internal(const ModeLayout& l, const Vec& psi) {
  if (psi.size() != l.dim)
    throw std::invalid_argument("partial_trace_internal: state size does not match layout");
  Mat2 rho = Mat2::Zero();
  // rho(r, c) = sum_p psi[r,p] conj(psi[c,p]); Vec::dot conjugates its left
  // argument, so the segment order below is (c, r).
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c)
      rho(r, c) = psi.segment(c * l.phonon_dim, l.phonon_dim)
                      .dot(psi.segment(r * l.phonon_dim, l.phonon_dim));
  return rho;
}

double internal_purity(const ModeLayout& l, const Vec& psi) {
  const Mat2 rho = partial_trace_internal(l, psi);
  return (rho * rho).trace().real();
}

}  // namespace fock
}  // namespace phonopt
