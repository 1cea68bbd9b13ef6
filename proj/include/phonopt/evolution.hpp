#pragma once
// Propagators. Time-independent Hermitian generators are exponentiated through
// their eigendecomposition, which keeps the result unitary to machine
// precision at these dimensions. Time-dependent drives go through a
// second-order midpoint-exponential integrator whose accuracy is certified by
// step doubling, not assumed.

#include "phonopt/hamiltonian.hpp"
#include "phonopt/types.hpp"

#include <functional>
#include <string>

namespace phonopt::evo {

// Cached eigendecomposition of a Hermitian generator, reusable across times.
struct HermitianEig {
  Mat vectors;
  Eigen::VectorXd values;
};

HermitianEig eig_hermitian(const Mat& h);         // throws on non-Hermitian input
Mat unitary_at(const HermitianEig& e, double t);  // exp(-i h t)

struct Propagator {
  Mat u;
  std::string generator;  // short description for reports
  double duration = 0.0;  // seconds
};

// U = exp(-i h t); convention fixed once here, every reported phase follows it.
Propagator expm_hermitian(const Mat& h, double t,
                          const std::string& label = "hermitian");
Mat evolve(const Mat& h, double t);  // exp(-i h t) without the wrapper

// Heisenberg picture of an operator: returns U^+ A U.
Mat heisenberg_transform(const Mat& u, const Mat& a);

struct IntegratorSpec {
  long steps = 1L << 12;   // first pass; at least 16
  bool richardson = true;  // double the step count until the result stops moving
  long max_steps = 1L << 26;
  double tolerance = tol::kConvergence;
};

struct Integration {
  Mat result;
  long steps = 0;                   // step count of the accepted pass
  double doubling_distance = 0.0;   // max-abs change on the final doubling
  bool converged = false;
};

// Ordered product of exp(-i H(midpoint) dt) steps from t0 to t1, evaluated
// densely; result is the full propagator. With richardson on, the step count
// doubles until consecutive results differ by less than the tolerance in
// max-abs norm; non-convergence within max_steps is reported, not hidden.
Integration propagate_time_dependent(const std::function<Mat(double)>& hfun,
                                     double t0, double t1,
                                     const IntegratorSpec& spec = {});

// Same stepping applied to a thin column block of the factored drive. Each
// step's exponential acts through a truncated Taylor series whose tail is kept
// below 1e-16, so the scheme error is the midpoint rule's alone and nothing
// dense is ever formed.
Integration propagate_columns(const ham::InteractionModel& model, double t0,
                              double t1, const Mat& initial,
                              const IntegratorSpec& spec = {});

}  // namespace phonopt::evo
