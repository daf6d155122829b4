#pragma once

#include <vector>

#include "fssh/matrix.hpp"

namespace fssh {

/// Tolerances for the dense kernel, collected in one place. All sit two to
/// three orders of magnitude above the double-precision noise floor for the
/// matrix sizes used here (<= ~500 x 500).
namespace tol {
inline constexpr double hermiticity_input = 1e-12;   // relative, on max|entry|
inline constexpr double unitarity_input = 1e-8;      // for log_unitary inputs
inline constexpr double eig_residual = 1e-10;        // ||H - Q L Q^dag||_max / ||H||_max
inline constexpr double orthonormality = 1e-10;      // ||Q^dag Q - I||_max
inline constexpr double expm_unitarity = 1e-10;      // unitarity of exp(-iHt)
inline constexpr double log_roundtrip = 1e-8;        // ||exp(-i log U) - U||_max
inline constexpr double branch_guard = 1e-12;        // eigenphase distance to -pi
inline constexpr double chiral_leakage = 1e-6;       // off-diagonal blocks of V(L/2)
}  // namespace tol

/// Eigendecomposition of a Hermitian matrix: H = Q diag(eigenvalues) Q^dag,
/// eigenvalues ascending, columns of Q orthonormal.
struct HermitianEigenSystem {
  std::vector<double> eigenvalues;
  ComplexMatrix eigenvectors;
};

/// Hermitian logarithm of a unitary: U = exp(-i hermitian_log), with every
/// eigenphase on the principal branch (-pi, pi].
struct UnitaryLogResult {
  ComplexMatrix hermitian_log;
  std::vector<double> eigenphases;  // ascending
};

/// Cyclic Jacobi diagonalization for complex Hermitian matrices. Chosen for
/// robustness at the matrix sizes of this project rather than asymptotic
/// speed. Throws HermiticityViolation / ConvergenceFailure.
HermitianEigenSystem eig_hermitian(const ComplexMatrix& h);

/// exp(-i H t) for Hermitian H, computed through the eigendecomposition so the
/// result is unitary to round-off. Throws HermiticityViolation.
ComplexMatrix expm_skew_hermitian(const ComplexMatrix& h, double t);

/// Principal logarithm of a unitary matrix. U is normal, so the commuting
/// Hermitian pair A = (U+U^dag)/2, B = i(U^dag-U)/2 is diagonalized
/// simultaneously (eig of A, then per-degenerate-cluster rotation from B) and
/// phases are read off as atan2(b, a) in that joint eigenbasis. Eigenphases
/// within tol::branch_guard of -pi throw BranchAmbiguity; callers perturb and
/// retry rather than silently shifting the branch.
UnitaryLogResult log_unitary(const ComplexMatrix& u);

}  // namespace fssh
