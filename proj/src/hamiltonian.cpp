#include "phonopt/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <sstream>
#include <stdexcept>

namespace phonopt::ham {

namespace {

constexpr Complex kI{0.0, 1.0};

double mode_frequency(const TrapBeamConfig& c, fock::Mode m) {
  switch (m) {
    case fock::Mode::CmX: return c.mu_x;
    case fock::Mode::CmY: return c.mu_y;
    case fock::Mode::BrX: return c.nu_x;
    case fock::Mode::BrY: return c.nu_y;
  }
  throw std::logic_error("mode_frequency: unreachable");
}

// Signed transverse-profile amplitude of each mode ladder pair. The two atoms
// sit on opposite sides of the beam axis, so breathing coordinates enter with
// the opposite sign; the y displacement is multiplied by i * pol_sign.
Complex mode_amplitude(const TrapBeamConfig& c, const LambDicke& eta, fock::Mode m) {
  const Complex iy = kI * static_cast<double>(c.pol_sign);
  switch (m) {
    case fock::Mode::CmX: return Complex{eta.xc, 0.0};
    case fock::Mode::BrX: return Complex{-eta.xb, 0.0};
    case fock::Mode::CmY: return iy * eta.yc;
    case fock::Mode::BrY: return -iy * eta.yb;
  }
  throw std::logic_error("mode_amplitude: unreachable");
}

std::vector<DressedLetter> make_letters(const TrapBeamConfig& c,
                                        const fock::ModeLayout& l) {
  const LambDicke eta = lamb_dicke(c);
  std::vector<DressedLetter> letters;
  letters.reserve(8);
  for (fock::Mode m : fock::kAllModes) {
    const double w = mode_frequency(c, m);
    const Complex amp = mode_amplitude(c, eta, m);
    letters.push_back({fock::annihilation_phonon(l, m), amp, -w});
    letters.push_back({fock::creation_phonon(l, m), amp, +w});
  }
  return letters;
}

// Place the sigma^+ phonon factor A and its adjoint into the full space:
// rows/cols [0, P) are |g>, [P, 2P) are |e>, so A occupies the (e, g) block.
Mat embed_raising_block(const Mat& a, const fock::ModeLayout& l) {
  const long p = l.phonon_dim;
  Mat h = Mat::Zero(l.dim, l.dim);
  h.block(p, 0, p, p) = a;
  h.block(0, p, p, p) = a.adjoint();
  return h;
}

}  // namespace

// ----------------------------- element naming --------------------------------

const char* kind_name(ElementKind k) {
  switch (k) {
    case ElementKind::Pbs: return "pbs";
    case ElementKind::HwpCm: return "hwp-cm";
    case ElementKind::HwpBr: return "hwp-br";
    case ElementKind::QwpCm: return "qwp-cm";
    case ElementKind::QwpBr: return "qwp-br";
  }
  throw std::logic_error("kind_name: unreachable");
}

ElementKind kind_from_name(std::string_view name) {
  for (ElementKind k : {ElementKind::Pbs, ElementKind::HwpCm, ElementKind::HwpBr,
                        ElementKind::QwpCm, ElementKind::QwpBr}) {
    if (name == kind_name(k)) return k;
  }
  throw std::invalid_argument("kind_from_name: unknown element '" +
                              std::string(name) + "'");
}

// --------------------------- frequency selection -----------------------------

FrequencySelection select_frequencies(ElementKind k, const TrapBeamConfig& c) {
  validate(c);
  FrequencySelection sel;

  double d = 0.0;
  switch (k) {
    case ElementKind::Pbs: d = c.nu_y - c.mu_y; break;
    case ElementKind::HwpCm: d = c.mu_x - c.mu_y; break;
    case ElementKind::HwpBr: d = c.nu_x - c.nu_y; break;
    case ElementKind::QwpCm:
    case ElementKind::QwpBr: d = 0.0; break;
  }

  if (k == ElementKind::QwpCm || k == ElementKind::QwpBr) {
    sel.lasers = {c.omega0, c.omega0, 0.0, 0.0, /*merged=*/true};
    sel.note = "both lasers on the carrier; single drive term";
  } else {
    sel.lasers = {c.omega0 + d, c.omega0 - d, d, -d, /*merged=*/false};
    std::ostringstream os;
    os << "lasers detuned by +-" << std::abs(d) << " rad/s from the carrier";
    sel.note = os.str();
  }

  // Degeneracy scan: count the ladder monomials each laser freezes and compare
  // against the count the selection is designed to freeze. Extra hits mean an
  // accidental coincidence among the trap frequencies.
  const double freqs[4] = {c.mu_x, c.mu_y, c.nu_x, c.nu_y};
  double scale = std::abs(d);
  for (double f : freqs) scale = std::max(scale, std::abs(f));
  const double cut = 1e-8 * scale;

  double rates[8];
  for (int m = 0; m < 4; ++m) {
    rates[2 * m] = -freqs[m];
    rates[2 * m + 1] = +freqs[m];
  }
  const bool merged = sel.lasers.merged;
  const double deltas[2] = {sel.lasers.delta1, sel.lasers.delta2};
  const int n_deltas = merged ? 1 : 2;
  const int expected_per_delta = merged ? 8 : 2;
  int frozen = 0;
  for (int li = 0; li < n_deltas; ++li)
    for (double rj : rates)
      for (double rk : rates)
        if (std::abs(rj + rk - deltas[li]) <= cut) ++frozen;

  if (!merged && std::abs(d) <= cut) {
    sel.degenerate = true;
    sel.note += "; selection collapsed: the two mode frequencies coincide";
  } else if (frozen != expected_per_delta * n_deltas) {
    sel.degenerate = true;
    std::ostringstream os;
    os << "; selection freezes " << frozen << " ladder monomials instead of "
       << expected_per_delta * n_deltas
       << ": trap frequencies share an accidental resonance";
    sel.note += os.str();
  }
  return sel;
}

// ------------------------------ static parts ---------------------------------

Mat build_H0(const TrapBeamConfig& c, const fock::ModeLayout& l) {
  validate(c);
  Mat h = Mat::Zero(l.dim, l.dim);
  for (long i = 0; i < l.dim; ++i) {
    int level;
    std::array<int, 4> n;
    l.decode(i, level, n);
    double e = (level == fock::kExcited ? 0.5 : -0.5) * c.omega0;
    e += c.mu_x * n[0] + c.mu_y * n[1] + c.nu_x * n[2] + c.nu_y * n[3];
    h(i, i) = e;
  }
  return h;
}

Mat build_profile_operator(const TrapBeamConfig& c, const fock::ModeLayout& l) {
  validate(c);
  const auto letters = make_letters(c, l);
  Mat b = Mat::Zero(l.phonon_dim, l.phonon_dim);
  for (const auto& w : letters) b += w.amp * Mat(w.op);
  const int a = std::abs(c.ell);
  Mat p = Mat::Identity(l.phonon_dim, l.phonon_dim);
  for (int i = 0; i < a; ++i) p = b * p;
  return p;
}

// ---------------------------- interaction model ------------------------------

InteractionModel::InteractionModel(const TrapBeamConfig& c,
                                   const fock::ModeLayout& l,
                                   const LaserPair& lasers)
    : layout_(l) {
  validate(c);
  if (std::abs(c.ell) != 2)
    throw std::invalid_argument(
        "InteractionModel: only the quadrupole drive (|ell| = 2) is modelled");
  letters_ = make_letters(c, l);
  for (size_t j = 0; j < letters_.size(); ++j)
    for (int outer = 0; outer < letters_[j].op.outerSize(); ++outer)
      for (SpMat::InnerIterator it(letters_[j].op, outer); it; ++it)
        entries_.push_back({it.col(), it.row(), it.value().real(),
                            static_cast<int>(j)});
  half_rabi_ = 0.5 * c.rabi;
  deltas_ = lasers.merged ? std::vector<double>{lasers.delta1}
                          : std::vector<double>{lasers.delta1, lasers.delta2};

  // Expand -(Omega/2) B(t)^2 sigma^+ sum_l e^{-i delta_l t} into monomials.
  for (double d : deltas_) {
    for (const auto& wj : letters_) {
      for (const auto& wk : letters_) {
        DriveTerm t;
        t.coeff = -half_rabi_ * wj.amp * wk.amp;
        t.rate = wj.rate + wk.rate - d;
        t.mat = SpMat(wj.op * wk.op);
        terms_.push_back(std::move(t));
      }
    }
  }
}

Vec InteractionModel::scaled_letter_coeffs(double t) const {
  Vec c(static_cast<long>(letters_.size()));
  for (size_t j = 0; j < letters_.size(); ++j)
    c(static_cast<long>(j)) = letters_[j].amp * std::exp(kI * (letters_[j].rate * t));
  return c;
}

Mat InteractionModel::hamiltonian(double t) const {
  const long p = layout_.phonon_dim;
  const Vec coeffs = scaled_letter_coeffs(t);
  Mat b = Mat::Zero(p, p);
  for (size_t j = 0; j < letters_.size(); ++j)
    b += coeffs(static_cast<long>(j)) * Mat(letters_[j].op);
  Complex drive{0.0, 0.0};
  for (double d : deltas_) drive += std::exp(-kI * (d * t));
  const Mat a = (-half_rabi_ * drive) * (b * b);
  return embed_raising_block(a, layout_);
}

void InteractionModel::apply(double t, const Mat& in, Mat& out,
                             Workspace& ws) const {
  Mat in_t = in.transpose();
  Mat out_t;
  apply_transposed(t, in_t, out_t, ws);
  out = out_t.transpose();
}

namespace {

// out.col(dst) += w(letter) * val * in.col(src) over all entries; `adjoint`
// swaps src/dst and conjugates the letter phases (ladder weights are real).
// K fixes the slice width at compile time when positive.
template <long K, typename Entries>
void letter_sweep(const std::vector<Complex>& w, bool adjoint, long k,
                  const Complex* in, Complex* out, const Entries& es) {
  for (const auto& e : es) {
    const Complex wl =
        (adjoint ? std::conj(w[e.letter]) : w[e.letter]) * e.val;
    const Complex* i = in + k * (adjoint ? e.dst : e.src);
    Complex* o = out + k * (adjoint ? e.src : e.dst);
    if constexpr (K > 0) {
      for (long q = 0; q < K; ++q) o[q] += wl * i[q];
    } else {
      for (long q = 0; q < k; ++q) o[q] += wl * i[q];
    }
  }
}

}  // namespace

void InteractionModel::apply_transposed(double t, const Mat& in_t, Mat& out_t,
                                        Workspace& ws) const {
  const long p = layout_.phonon_dim;
  const long k = in_t.rows();
  out_t.resize(k, 2 * p);
  ws.b1.resize(k, p);
  ws.b2.resize(k, p);

  std::vector<Complex> w(letters_.size());
  for (size_t j = 0; j < letters_.size(); ++j)
    w[j] = letters_[j].amp * std::exp(kI * (letters_[j].rate * t));
  Complex drive{0.0, 0.0};
  for (double d : deltas_) drive += std::exp(-kI * (d * t));
  const Complex fwd = -half_rabi_ * drive;

  auto sweep = [&](const Complex* in, Complex* out, bool adjoint) {
    if (k == 4)
      letter_sweep<4>(w, adjoint, k, in, out, entries_);
    else if (k == 1)
      letter_sweep<1>(w, adjoint, k, in, out, entries_);
    else
      letter_sweep<0>(w, adjoint, k, in, out, entries_);
  };

  // e half of the output: fwd * B(t) B(t) applied to the g half.
  ws.b1.setZero();
  sweep(in_t.data(), ws.b1.data(), false);
  ws.b2.setZero();
  sweep(ws.b1.data(), ws.b2.data(), false);
  out_t.rightCols(p) = fwd * ws.b2;

  // g half: conj(fwd) * B(t)^+ B(t)^+ applied to the e half.
  ws.b1.setZero();
  sweep(in_t.data() + k * p, ws.b1.data(), true);
  ws.b2.setZero();
  sweep(ws.b1.data(), ws.b2.data(), true);
  out_t.leftCols(p) = std::conj(fwd) * ws.b2;
}

double InteractionModel::norm_bound() const {
  // ||a|| = ||a^+|| = sqrt(n_max) after truncation, so
  // ||B(t)|| <= sqrt(n_max) sum_j |amp_j| for all t.
  double amp_sum = 0.0;
  for (const auto& w : letters_) amp_sum += std::abs(w.amp);
  const double b_bound = std::sqrt(static_cast<double>(layout_.n_max)) * amp_sum;
  const double drive_max = half_rabi_ * static_cast<double>(deltas_.size());
  // H is off-diagonal in the internal factor, so ||H|| equals the block norm.
  return drive_max * b_bound * b_bound;
}

double InteractionModel::static_rate_cut() const {
  double scale = 0.0;
  for (const auto& w : letters_) scale = std::max(scale, std::abs(w.rate));
  for (double d : deltas_) scale = std::max(scale, std::abs(d));
  return 1e-8 * scale;
}

Mat InteractionModel::static_hamiltonian() const {
  const long p = layout_.phonon_dim;
  const double cut = static_rate_cut();
  Mat a = Mat::Zero(p, p);
  for (const auto& t : terms_)
    if (std::abs(t.rate) <= cut) a += t.coeff * Mat(t.mat);
  return embed_raising_block(a, layout_);
}

double InteractionModel::min_nonzero_gap() const {
  const double cut = static_rate_cut();
  double gap = 0.0;
  for (const auto& t : terms_) {
    const double r = std::abs(t.rate);
    if (r <= cut) continue;
    if (gap == 0.0 || r < gap) gap = r;
  }
  return gap;
}

std::function<Mat(double)> build_full_interaction(const TrapBeamConfig& c,
                                                  const fock::ModeLayout& l,
                                                  const LaserPair& lasers) {
  auto model = std::make_shared<InteractionModel>(c, l, lasers);
  return [model](double t) { return model->hamiltonian(t); };
}

// --------------------------- effective elements ------------------------------

namespace {

// Hermitian internal factors with eigenvalues +-1.
Mat2 internal_sum() { return fock::sigma_plus() + fock::sigma_minus(); }
Mat2 internal_diff() { return kI * (fock::sigma_plus() - fock::sigma_minus()); }

// a^+ b + a b^+ between two phonon modes.
Mat exchange(fock::Mode m1, fock::Mode m2, const fock::ModeLayout& l) {
  const SpMat a1 = fock::annihilation_phonon(l, m1);
  const SpMat a2 = fock::annihilation_phonon(l, m2);
  const SpMat cross = SpMat(a1.adjoint() * a2);
  Mat g = Mat(cross);
  g += g.adjoint().eval();
  return g;
}

Mat qwp_generator(double eta_x2, double eta_y2, fock::Mode mx, fock::Mode my,
                  double rabi, const fock::ModeLayout& l) {
  Mat g = eta_x2 * fock::number_phonon(l, mx) - eta_y2 * fock::number_phonon(l, my);
  g += (eta_x2 - eta_y2) * Mat::Identity(l.phonon_dim, l.phonon_dim);
  return -rabi * g;
}

}  // namespace

EffectiveElement build_effective_element(ElementKind k, const TrapBeamConfig& c,
                                         const fock::ModeLayout& l) {
  validate(c);
  const LambDicke eta = lamb_dicke(c);
  const double s = static_cast<double>(c.pol_sign);
  EffectiveElement e;
  e.kind = k;
  switch (k) {
    case ElementKind::Pbs:
      // The +-i y amplitudes enter squared, so pol_sign drops out.
      e.g_phonon =
          -c.rabi * eta.yc * eta.yb * exchange(fock::Mode::CmY, fock::Mode::BrY, l);
      e.internal_op = internal_sum();
      break;
    case ElementKind::HwpCm:
      e.g_phonon = -s * c.rabi * eta.xc * eta.yc *
                   exchange(fock::Mode::CmX, fock::Mode::CmY, l);
      e.internal_op = internal_diff();
      break;
    case ElementKind::HwpBr:
      e.g_phonon = -s * c.rabi * eta.xb * eta.yb *
                   exchange(fock::Mode::BrX, fock::Mode::BrY, l);
      e.internal_op = internal_diff();
      break;
    case ElementKind::QwpCm:
      e.g_phonon = qwp_generator(eta.xc * eta.xc, eta.yc * eta.yc,
                                 fock::Mode::CmX, fock::Mode::CmY, c.rabi, l);
      e.internal_op = internal_sum();
      break;
    case ElementKind::QwpBr:
      e.g_phonon = qwp_generator(eta.xb * eta.xb, eta.yb * eta.yb,
                                 fock::Mode::BrX, fock::Mode::BrY, c.rabi, l);
      e.internal_op = internal_sum();
      break;
  }
  return e;
}

Mat build_effective(ElementKind k, const TrapBeamConfig& c,
                    const fock::ModeLayout& l) {
  const EffectiveElement e = build_effective_element(k, c, l);
  const long p = l.phonon_dim;
  Mat h = Mat::Zero(l.dim, l.dim);
  for (int r = 0; r < 2; ++r)
    for (int col = 0; col < 2; ++col)
      if (e.internal_op(r, col) != Complex{0.0, 0.0})
        h.block(r * p, col * p, p, p) = e.internal_op(r, col) * e.g_phonon;
  return h;
}

double element_duration(ElementKind k, const TrapBeamConfig& c,
                        const ElementParams& p) {
  validate(c);
  if (c.rabi <= 0.0)
    throw std::invalid_argument("element_duration: rabi must be positive");
  const LambDicke eta = lamb_dicke(c);
  switch (k) {
    case ElementKind::Pbs:
      return M_PI / (2.0 * c.rabi * eta.yc * eta.yb);
    case ElementKind::HwpCm:
    case ElementKind::HwpBr: {
      if (!(p.theta >= 0.0 && p.theta < M_PI))
        throw std::invalid_argument("element_duration: theta must lie in [0, pi)");
      const double ee =
          k == ElementKind::HwpCm ? eta.xc * eta.yc : eta.xb * eta.yb;
      return 2.0 * p.theta / (c.rabi * ee);
    }
    case ElementKind::QwpCm:
    case ElementKind::QwpBr: {
      if (p.k < 1)
        throw std::invalid_argument("element_duration: k must be at least 1");
      const double e2 = k == ElementKind::QwpCm
                            ? eta.xc * eta.xc + eta.yc * eta.yc
                            : eta.xb * eta.xb + eta.yb * eta.yb;
      return static_cast<double>(p.k) * M_PI / (2.0 * c.rabi * e2);
    }
  }
  throw std::logic_error("element_duration: unreachable");
}

}  // namespace phonopt::ham
