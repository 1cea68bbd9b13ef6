#include "phonopt/analysis.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace phonopt::analysis {

// ------------------------- mode-transform fits -------------------------------

ModeTransformReport extract_mode_transform(const Mat& u_phonon,
                                           const fock::ModeLayout& l,
                                           int n_safe) {
  if (u_phonon.rows() != l.phonon_dim || u_phonon.cols() != l.phonon_dim)
    throw std::invalid_argument(
        "extract_mode_transform: unitary does not act on the phonon factor");
  const Eigen::VectorXd mask = fock::safe_mask_phonon(l, n_safe);

  // Fit basis: each ladder operator restricted to the safe domain.
  std::array<Mat, 4> basis;
  for (int j = 0; j < 4; ++j)
    basis[j] = Mat(fock::annihilation_phonon(l, fock::kAllModes[j])) *
               mask.asDiagonal();

  Eigen::Matrix4cd gram;
  for (int j = 0; j < 4; ++j)
    for (int k = 0; k < 4; ++k)
      gram(j, k) = basis[j].conjugate().cwiseProduct(basis[k]).sum();

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(gram);
  const double lam_min = es.eigenvalues().minCoeff();
  const double lam_max = es.eigenvalues().maxCoeff();
  if (!(lam_min > 1e-13 * lam_max) || lam_max <= 0.0)
    throw std::runtime_error(
        "extract_mode_transform: fit basis is rank deficient on the safe "
        "subspace; increase n_safe");

  ModeTransformReport rep;
  rep.condition = lam_max / lam_min;
  const Eigen::LDLT<Eigen::Matrix4cd> solver(gram);
  for (int i = 0; i < 4; ++i) {
    const Mat target =
        (u_phonon.adjoint() *
         Mat(fock::annihilation_phonon(l, fock::kAllModes[i])) * u_phonon) *
        mask.asDiagonal();
    Eigen::Vector4cd rhs;
    for (int j = 0; j < 4; ++j)
      rhs(j) = basis[j].conjugate().cwiseProduct(target).sum();
    const Eigen::Vector4cd coef = solver.solve(rhs);
    Mat fitted = Mat::Zero(l.phonon_dim, l.phonon_dim);
    for (int j = 0; j < 4; ++j) fitted += coef(j) * basis[j];
    const double rel =
        (target - fitted).norm() / std::max(basis[i].norm(), 1e-300);
    rep.residual = std::max(rep.residual, rel);
    rep.coefficients.row(i) = coef.transpose();
  }
  rep.unitarity_defect = unitarity_defect(rep.coefficients);
  return rep;
}

ModeTransformReport element_mode_transform(ham::ElementKind kind,
                                           const TrapBeamConfig& c,
                                           const fock::ModeLayout& l,
                                           const ham::ElementParams& params,
                                           int n_safe) {
  const elem::SectorDecomposition d =
      elem::decompose(ham::build_effective_element(kind, c, l));
  const double t = ham::element_duration(kind, c, params);
  const Mat u = elem::sector_unitary(d, elem::prep_sector(kind), t);
  return extract_mode_transform(u, l, n_safe);
}

// ------------------------------ averaging scans ------------------------------

double effective_rate(ham::ElementKind kind, const TrapBeamConfig& c) {
  const LambDicke eta = lamb_dicke(c);
  switch (kind) {
    case ham::ElementKind::Pbs: return c.rabi * eta.yc * eta.yb;
    case ham::ElementKind::HwpCm: return c.rabi * eta.xc * eta.yc;
    case ham::ElementKind::HwpBr: return c.rabi * eta.xb * eta.yb;
    case ham::ElementKind::QwpCm:
      return c.rabi * (eta.xc * eta.xc + eta.yc * eta.yc);
    case ham::ElementKind::QwpBr:
      return c.rabi * (eta.xb * eta.xb + eta.yb * eta.yb);
  }
  throw std::logic_error("effective_rate: unreachable");
}

RwaScan rwa_scan(ham::ElementKind kind, const TrapBeamConfig& base,
                 const fock::ModeLayout& l, const std::vector<double>& rabis,
                 const evo::IntegratorSpec& spec,
                 const ham::ElementParams& params) {
  if (rabis.size() < 2)
    throw std::invalid_argument("rwa_scan: need at least 2 scan points");
  for (size_t i = 1; i < rabis.size(); ++i)
    if (!(rabis[i] < rabis[i - 1]))
      throw std::invalid_argument(
          "rwa_scan: rabi values must be strictly decreasing");
  validate(base);

  const double window = ham::element_duration(kind, base, params);
  const ham::FrequencySelection sel = ham::select_frequencies(kind, base);
  const elem::InternalPrep prep = elem::required_prep(kind);

  Mat initial(l.dim, 4);
  for (int j = 0; j < 4; ++j)
    initial.col(j) = elem::prepare(prep, elem::logical_counts(j), l);

  RwaScan scan;
  scan.degenerate = sel.degenerate;
  bool all_conv = true;
  for (double rabi : rabis) {
    TrapBeamConfig cfg = base;
    cfg.rabi = rabi;
    validate(cfg);

    const ham::InteractionModel model(cfg, l, sel.lasers);
    const evo::Integration integ =
        evo::propagate_columns(model, 0.0, window, initial, spec);

    const elem::SectorDecomposition d =
        elem::decompose(ham::build_effective_element(kind, cfg, l));
    Mat effective(l.dim, 4);
    for (int j = 0; j < 4; ++j)
      effective.col(j) = elem::evolve_state(d, initial.col(j), window);

    const Complex overlap = (effective.adjoint() * integ.result).trace();
    RwaPoint point;
    point.rabi = rabi;
    point.gap = model.min_nonzero_gap();
    point.ratio = point.gap > 0.0
                      ? effective_rate(kind, cfg) / point.gap
                      : std::numeric_limits<double>::infinity();
    point.infidelity = 1.0 - std::norm(overlap) / 16.0;
    point.steps = integ.steps;
    point.doubling_distance = integ.doubling_distance;
    point.converged = integ.converged;
    all_conv = all_conv && integ.converged;
    scan.points.push_back(point);
  }
  scan.all_converged = all_conv;
  if (!scan.degenerate) {
    scan.monotone = true;
    for (size_t i = 1; i < scan.points.size(); ++i)
      if (!(scan.points[i].infidelity < scan.points[i - 1].infidelity))
        scan.monotone = false;
  }
  return scan;
}

// ------------------------------ regime report --------------------------------

namespace {
// CODATA values; used only for the order-of-magnitude checks.
constexpr double kHbar = 1.054571817e-34;     // J s
constexpr double kElectron = 1.602176634e-19; // C
constexpr double kBohr = 5.29177210903e-11;   // m
constexpr double kEps0 = 8.8541878128e-12;    // F/m
}  // namespace

RegimeReport regime_report(const TrapBeamConfig& c, const RegimeInputs& in) {
  validate(c);
  RegimeReport rep;
  for (ham::ElementKind k :
       {ham::ElementKind::Pbs, ham::ElementKind::HwpCm, ham::ElementKind::HwpBr,
        ham::ElementKind::QwpCm, ham::ElementKind::QwpBr})
    rep.longest_duration =
        std::max(rep.longest_duration, ham::element_duration(k, c, {}));

  auto add_ratio_check = [&](const std::string& name, bool applicable,
                             double ratio, const std::string& note) {
    RegimeCheck chk;
    chk.name = name;
    chk.applicable = applicable;
    chk.ratio = applicable ? ratio : 0.0;
    chk.pass = applicable && ratio >= tol::kRegimeMargin;
    chk.note = note;
    rep.checks.push_back(chk);
  };

  if (in.lifetime)
    add_ratio_check("lifetime_over_duration", true,
                    *in.lifetime / rep.longest_duration,
                    "internal lifetime vs slowest element");
  else
    add_ratio_check("lifetime_over_duration", false, 0.0,
                    "skipped: lifetime not provided");

  if (in.damping_time)
    add_ratio_check("damping_over_duration", true,
                    *in.damping_time / rep.longest_duration,
                    "mechanical damping vs slowest element");
  else
    add_ratio_check("damping_over_duration", false, 0.0,
                    "skipped: damping_time not provided");

  if (in.distance && in.principal_n) {
    const double n2 = static_cast<double>(*in.principal_n) *
                      static_cast<double>(*in.principal_n);
    const double dipole = kElectron * kBohr * n2;  // C m
    const double r = *in.distance;
    const double dd_rate =
        dipole * dipole / (4.0 * M_PI * kEps0 * kHbar * r * r * r);  // rad/s
    std::ostringstream os;
    os << "dipole-dipole rate " << dd_rate << " rad/s at r = " << r
       << " m, n = " << *in.principal_n;
    add_ratio_check("rabi_over_dipole_dipole", true, c.rabi / dd_rate, os.str());
  } else {
    add_ratio_check("rabi_over_dipole_dipole", false, 0.0,
                    "skipped: distance or principal_n not provided");
  }

  rep.all_pass = true;
  for (const RegimeCheck& chk : rep.checks)
    if (chk.applicable && !chk.pass) rep.all_pass = false;
  return rep;
}

}  // namespace phonopt::analysis
