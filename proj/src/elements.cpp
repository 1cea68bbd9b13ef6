#include "phonopt/elements.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>
#include <stdexcept>

namespace phonopt::elem {

namespace {
constexpr double kDiagFloor = 1e-8;   // diagonal entry usable as phase anchor
constexpr double kPhaseFloor = 1e-14; // below this magnitude, report phase 0
}  // namespace

// ------------------------- internal preparations -----------------------------

const char* prep_name(InternalPrep p) {
  switch (p) {
    case InternalPrep::Plus: return "plus";
    case InternalPrep::PlusI: return "plus-i";
    case InternalPrep::Ground: return "ground";
  }
  throw std::logic_error("prep_name: unreachable");
}

InternalPrep prep_from_name(std::string_view name) {
  for (InternalPrep p :
       {InternalPrep::Plus, InternalPrep::PlusI, InternalPrep::Ground}) {
    if (name == prep_name(p)) return p;
  }
  throw std::invalid_argument("prep_from_name: unknown preparation '" +
                              std::string(name) + "'");
}

Vec2 prep_vector(InternalPrep p) {
  const double r = 1.0 / std::sqrt(2.0);
  Vec2 v;
  switch (p) {
    case InternalPrep::Plus: v << Complex{r, 0.0}, Complex{r, 0.0}; break;
    case InternalPrep::PlusI: v << Complex{0.0, r}, Complex{r, 0.0}; break;
    case InternalPrep::Ground: v << Complex{1.0, 0.0}, Complex{0.0, 0.0}; break;
  }
  return v;
}

InternalPrep required_prep(ham::ElementKind k) {
  switch (k) {
    case ham::ElementKind::Pbs:
    case ham::ElementKind::QwpCm:
    case ham::ElementKind::QwpBr: return InternalPrep::Plus;
    case ham::ElementKind::HwpCm:
    case ham::ElementKind::HwpBr: return InternalPrep::PlusI;
  }
  throw std::logic_error("required_prep: unreachable");
}

int prep_sector(ham::ElementKind k) {
  // plus has (s+ + s-) eigenvalue +1; plus-i has i(s+ - s-) eigenvalue -1.
  return required_prep(k) == InternalPrep::PlusI ? -1 : +1;
}

// --------------------------- logical encoding --------------------------------

std::array<int, 4> logical_counts(int index) {
  // counts ordered (CM_X, CM_Y, BR_X, BR_Y)
  switch (index) {
    case 0: return {1, 0, 0, 0};  // |00>: CM x
    case 1: return {0, 0, 1, 0};  // |01>: breathing x
    case 2: return {0, 1, 0, 0};  // |10>: CM y
    case 3: return {0, 0, 0, 1};  // |11>: breathing y
  }
  throw std::out_of_range("logical_counts: index must be 0..3");
}

long logical_phonon_index(int index, const fock::ModeLayout& l) {
  return l.phonon_index(logical_counts(index));
}

Vec prepare(InternalPrep p, const std::array<int, 4>& counts,
            const fock::ModeLayout& l) {
  for (int n : counts)
    if (n < 0 || n > l.n_max)
      throw std::out_of_range("prepare: phonon count outside the layout");
  const Vec2 v = prep_vector(p);
  const long pidx = l.phonon_index(counts);
  Vec psi = Vec::Zero(l.dim);
  psi(pidx) = v(0);                 // |g> component
  psi(l.phonon_dim + pidx) = v(1);  // |e> component
  return psi;
}

// ------------------------- sector decomposition ------------------------------

SectorDecomposition decompose(const ham::EffectiveElement& e) {
  Eigen::SelfAdjointEigenSolver<Mat2> es(e.internal_op);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("decompose: internal eigensolver failed");
  const Eigen::Vector2d ev = es.eigenvalues();
  if (std::abs(ev(0) + 1.0) > 1e-9 || std::abs(ev(1) - 1.0) > 1e-9)
    throw std::invalid_argument(
        "decompose: internal factor must have eigenvalues -1 and +1");
  return {e, ev, es.eigenvectors(), evo::eig_hermitian(e.g_phonon)};
}

Mat sector_unitary(const SectorDecomposition& d, int lambda, double t) {
  if (lambda != -1 && lambda != +1)
    throw std::invalid_argument("sector_unitary: sector must be -1 or +1");
  return evo::unitary_at(d.phonon_eig, static_cast<double>(lambda) * t);
}

Mat full_unitary(const SectorDecomposition& d, double t) {
  const long p = d.phonon_eig.vectors.rows();
  const Mat um = sector_unitary(d, -1, t);
  const Mat up = sector_unitary(d, +1, t);
  const Vec2 vm = d.eigenvectors.col(0);
  const Vec2 vp = d.eigenvectors.col(1);
  Mat u(2 * p, 2 * p);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c)
      u.block(r * p, c * p, p, p) =
          vm(r) * std::conj(vm(c)) * um + vp(r) * std::conj(vp(c)) * up;
  return u;
}

Vec evolve_state(const SectorDecomposition& d, const Vec& psi, double t) {
  const long p = d.phonon_eig.vectors.rows();
  if (psi.size() != 2 * p)
    throw std::invalid_argument("evolve_state: state does not match the element");
  Vec out = Vec::Zero(2 * p);
  for (int s = 0; s < 2; ++s) {
    const Vec2 v = d.eigenvectors.col(s);
    const Vec phi =
        std::conj(v(0)) * psi.head(p) + std::conj(v(1)) * psi.tail(p);
    const Vec chi =
        evo::unitary_at(d.phonon_eig, d.eigenvalues(s) * t) * phi;
    out.head(p) += v(0) * chi;
    out.tail(p) += v(1) * chi;
  }
  return out;
}

Vec apply_element(ham::ElementKind kind, const TrapBeamConfig& c,
                  const fock::ModeLayout& l, const ham::ElementParams& params,
                  InternalPrep prep, const std::array<int, 4>& counts,
                  bool allow_any_prep) {
  const InternalPrep req = required_prep(kind);
  if (prep != req && !allow_any_prep)
    throw std::invalid_argument(
        std::string("apply_element: ") + ham::kind_name(kind) +
        " requires internal prep '" + prep_name(req) +
        "'; set allow_any_prep to study the entangling regime");
  const double t = ham::element_duration(kind, c, params);
  const SectorDecomposition d = decompose(ham::build_effective_element(kind, c, l));
  return evolve_state(d, prepare(prep, counts, l), t);
}

// ------------------------------ gate reports ---------------------------------

namespace {

struct GateSpec {
  std::string name;
  ham::ElementKind kind;
  ham::ElementParams params;
  std::vector<int> basis;          // logical indices spanning the block
  Eigen::MatrixXd pattern;         // target magnitude pattern
};

GateReport build_report(const GateSpec& spec, const TrapBeamConfig& c,
                        const fock::ModeLayout& l) {
  const InternalPrep prep = required_prep(spec.kind);
  const double t = ham::element_duration(spec.kind, c, spec.params);
  const SectorDecomposition d =
      decompose(ham::build_effective_element(spec.kind, c, l));
  const int n = static_cast<int>(spec.basis.size());

  GateReport r;
  r.gate = spec.name;
  r.logical.resize(n, n);
  r.column_leakage.assign(n, 0.0);
  std::vector<Vec> bras(n);
  for (int i = 0; i < n; ++i)
    bras[i] = prepare(prep, logical_counts(spec.basis[i]), l);
  for (int j = 0; j < n; ++j) {
    const Vec col = evolve_state(d, bras[j], t);
    double captured = 0.0;
    for (int i = 0; i < n; ++i) {
      r.logical(i, j) = bras[i].dot(col);
      captured += std::norm(r.logical(i, j));
    }
    r.column_leakage[j] = 1.0 - captured;
    r.max_leakage = std::max(r.max_leakage, r.column_leakage[j]);
  }

  // Global phase: first usable diagonal entry, else the largest entry of the
  // first column, rotated to be real positive.
  Complex anchor{0.0, 0.0};
  for (int i = 0; i < n && std::abs(anchor) <= kDiagFloor; ++i)
    anchor = r.logical(i, i);
  if (std::abs(anchor) <= kDiagFloor) {
    int best = 0;
    for (int i = 1; i < n; ++i)
      if (std::abs(r.logical(i, 0)) > std::abs(r.logical(best, 0))) best = i;
    anchor = r.logical(best, 0);
  }
  r.global_phase = std::abs(anchor) > 0.0 ? anchor / std::abs(anchor)
                                          : Complex{1.0, 0.0};
  r.normalized = r.logical / r.global_phase;

  r.magnitudes.resize(n, n);
  r.phases.resize(n, n);
  r.target_pattern = spec.pattern;
  r.permutation_fidelity = 1.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double mag = std::abs(r.normalized(i, j));
      r.magnitudes(i, j) = mag;
      r.phases(i, j) = mag > kPhaseFloor ? std::arg(r.normalized(i, j)) : 0.0;
      if (spec.pattern(i, j) > 0.5)
        r.permutation_fidelity = std::min(r.permutation_fidelity, mag);
      else
        r.max_off_pattern = std::max(r.max_off_pattern, mag);
    }
  }
  // A column norm of 1 - 1e-10 caps stray entries near sqrt(2e-10).
  r.pattern_match = r.permutation_fidelity >= 1.0 - tol::kLeakage &&
                    r.max_off_pattern <= 2e-5;

  if (std::abs(r.normalized(0, 0)) > kDiagFloor &&
      std::abs(r.normalized(n - 1, n - 1)) > kDiagFloor)
    r.relative_phase =
        std::arg(r.normalized(n - 1, n - 1) * std::conj(r.normalized(0, 0)));

  r.unitarity_residual = unitarity_defect(r.logical);
  r.min_internal_purity =
      decoupling_check(spec.kind, c, l, prep, 21, spec.params).min_purity;
  return r;
}

Eigen::MatrixXd cnot_pattern() {
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(4, 4);
  p(0, 0) = p(1, 1) = 1.0;  // control 0: unchanged
  p(3, 2) = p(2, 3) = 1.0;  // control 1: target flipped
  return p;
}

}  // namespace

GateReport cnot_truth_table(const TrapBeamConfig& c, const fock::ModeLayout& l) {
  GateSpec spec{"cnot", ham::ElementKind::Pbs, {}, {0, 1, 2, 3}, cnot_pattern()};
  return build_report(spec, c, l);
}

GateReport pauli_x_gate(const TrapBeamConfig& c, const fock::ModeLayout& l) {
  Eigen::MatrixXd x(2, 2);
  x << 0, 1, 1, 0;
  ham::ElementParams params;
  params.theta = M_PI / 4;  // half-wave rotation 2 theta = pi/2
  GateSpec spec{"x", ham::ElementKind::HwpCm, params, {0, 2}, x};
  return build_report(spec, c, l);
}

GateReport pauli_z_gate(const TrapBeamConfig& c, const fock::ModeLayout& l,
                        int k) {
  ham::ElementParams params;
  params.k = k;
  GateSpec spec{k == 1 ? "s" : "z", ham::ElementKind::QwpCm, params, {0, 2},
                Eigen::MatrixXd::Identity(2, 2)};
  return build_report(spec, c, l);
}

GateReport phase_gate(const TrapBeamConfig& c, const fock::ModeLayout& l) {
  return pauli_z_gate(c, l, 1);
}

GateReport gate_report(std::string_view gate, const TrapBeamConfig& c,
                       const fock::ModeLayout& l) {
  if (gate == "cnot") return cnot_truth_table(c, l);
  if (gate == "x") return pauli_x_gate(c, l);
  if (gate == "z") return pauli_z_gate(c, l, 2);
  if (gate == "s") return phase_gate(c, l);
  throw std::invalid_argument("gate_report: unknown gate '" +
                              std::string(gate) + "'");
}

// --------------------------- decoupling check --------------------------------

PurityTrace decoupling_check(ham::ElementKind kind, const TrapBeamConfig& c,
                             const fock::ModeLayout& l, InternalPrep prep,
                             int n_samples, const ham::ElementParams& params) {
  if (n_samples < 2)
    throw std::invalid_argument("decoupling_check: need at least 2 samples");
  const double t_total = ham::element_duration(kind, c, params);
  const SectorDecomposition d = decompose(ham::build_effective_element(kind, c, l));

  // Equal logical superposition: every coupled mode pair participates.
  Vec phi = Vec::Zero(l.phonon_dim);
  for (int j = 0; j < 4; ++j)
    phi += fock::phonon_basis_state(l, logical_counts(j));
  phi /= 2.0;
  const Vec2 v = prep_vector(prep);
  Vec psi0 = Vec::Zero(l.dim);
  psi0.head(l.phonon_dim) = v(0) * phi;
  psi0.tail(l.phonon_dim) = v(1) * phi;

  PurityTrace trace;
  trace.times.reserve(n_samples);
  trace.purity.reserve(n_samples);
  for (int j = 0; j < n_samples; ++j) {
    const double t =
        t_total * static_cast<double>(j) / static_cast<double>(n_samples - 1);
    const double p = fock::internal_purity(l, evolve_state(d, psi0, t));
    trace.times.push_back(t);
    trace.purity.push_back(p);
    trace.min_purity = std::min(trace.min_purity, p);
  }
  return trace;
}

}  // namespace phonopt::elem
