#pragma once
// Shared linear-algebra typedefs and the numeric tolerances used across the
// library. Matrix comparisons everywhere use the max-abs entry distance.

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <complex>

namespace phonopt {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Mat2 = Eigen::Matrix2cd;
using Vec = Eigen::VectorXcd;
using Vec2 = Eigen::Vector2cd;
using SpMat = Eigen::SparseMatrix<Complex>;

inline constexpr const char* kVersion = "0.1.0";

namespace tol {
// Absolute unless stated otherwise.
inline constexpr double kNorm = 1e-12;         // state normalization
inline constexpr double kHermitian = 1e-12;    // relative to the largest entry
inline constexpr double kUnitary = 1e-10;
inline constexpr double kConvergence = 1e-8;   // integrator step doubling
inline constexpr double kModeFit = 1e-8;       // mode-transform residual
inline constexpr double kLeakage = 1e-10;
inline constexpr double kFitUnitary = 1e-6;    // fitted coefficient matrix
inline constexpr double kRegimeMargin = 1e2;   // required time-scale separation
}  // namespace tol

double max_abs_diff(const Mat& a, const Mat& b);

// Hermiticity is judged relative to the largest entry: Hamiltonians carry
// rad/s-scale entries, so a fixed absolute cutoff would be meaningless.
bool is_hermitian(const Mat& a, double rel_tol = tol::kHermitian);
bool is_unitary(const Mat& u, double abs_tol = tol::kUnitary);
double unitarity_defect(const Mat& u);  // ||U^+ U - I||_max

}  // namespace phonopt
