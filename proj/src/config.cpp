#include "phonopt/config.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace phonopt {

namespace {

constexpr double kHBar = 1.054571817e-34;  // J s

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw std::invalid_argument(std::string("TrapBeamConfig: ") + name +
                                " must be positive and finite, got " +
                                std::to_string(v));
}

}  // namespace

void validate(const TrapBeamConfig& c) {
  require_positive(c.mass, "mass");
  require_positive(c.waist, "waist");
  require_positive(c.mu_x, "mu_x");
  require_positive(c.mu_y, "mu_y");
  require_positive(c.nu_x, "nu_x");
  require_positive(c.nu_y, "nu_y");
  require_positive(c.omega0, "omega0");
  if (c.rabi < 0.0 || !std::isfinite(c.rabi))
    throw std::invalid_argument("TrapBeamConfig: rabi must be >= 0 and finite");
  if (c.pol_sign != 1 && c.pol_sign != -1)
    throw std::invalid_argument("TrapBeamConfig: pol_sign must be +1 or -1");
  if (c.ell < -3 || c.ell > 3)
    throw std::invalid_argument("TrapBeamConfig: |ell| must be <= 3, got " +
                                std::to_string(c.ell));
}

LambDicke lamb_dicke(const TrapBeamConfig& c) {
  validate(c);
  const double k = kHBar / (c.mass * c.waist * c.waist);
  LambDicke eta;
  eta.xc = std::sqrt(k / c.mu_x);
  eta.yc = std::sqrt(k / c.mu_y);
  eta.xb = std::sqrt(k / c.nu_x);
  eta.yb = std::sqrt(k / c.nu_y);
  for (double v : {eta.xc, eta.yc, eta.xb, eta.yb})
    if (!(v > 0.0) || !(v < 1.0))
      throw std::invalid_argument(
          "lamb_dicke: derived factor " + std::to_string(v) +
          " outside (0, 1); trap is not in the resolved regime");
  return eta;
}

}  // namespace phonopt
