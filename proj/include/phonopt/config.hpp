#pragma once
// Trap and beam parameters. Inputs are SI (kg, m, rad/s); everything derived
// from them is dimensionless or in angular-frequency units with hbar = 1, so
// Planck's constant appears only here.

#include <string>

namespace phonopt {

struct TrapBeamConfig {
  double mass = 0.0;    // atom mass, kg
  double waist = 0.0;   // beam waist w0, m
  double mu_x = 0.0;    // centre-of-mass trap frequencies, rad/s
  double mu_y = 0.0;
  double nu_x = 0.0;    // breathing-mode frequencies, rad/s
  double nu_y = 0.0;
  double omega0 = 0.0;  // internal transition frequency, rad/s
  double rabi = 0.0;    // carrier Rabi frequency Omega, rad/s
  int ell = 2;          // beam orbital angular momentum; |ell| enters the profile
  int pol_sign = +1;    // handedness of the profile, +1 or -1
};

// Lamb-Dicke factors eta = sqrt(hbar / (m * omega_mode * w0^2)); "c" marks the
// centre-of-mass modes (frequencies mu), "b" the breathing modes (nu).
struct LambDicke {
  double xc = 0.0, yc = 0.0, xb = 0.0, yb = 0.0;
};

// Throws std::invalid_argument naming the offending field.
void validate(const TrapBeamConfig& c);

// Validates, then derives; every factor must land in (0, 1).
LambDicke lamb_dicke(const TrapBeamConfig& c);

}  // namespace phonopt
