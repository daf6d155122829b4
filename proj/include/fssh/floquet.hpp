#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "fssh/evolution.hpp"
#include "fssh/lattice.hpp"

namespace fssh {

/// Eigenphases phi in (-pi, pi] and quasienergies eps = phi / Lambda of a
/// one-period evolution operator, with the matching orthonormal eigenvectors.
struct FloquetSpectrum {
  std::vector<double> eigenphases;    // ascending
  std::vector<double> quasienergies;  // eigenphases / period (1/mm)
  ComplexMatrix eigenvectors;         // columns follow the eigenphase order
  double period = 0.0;
};

/// Gap sizes of a Floquet spectrum around 0 and around pi, in radians.
struct GapReport {
  double zero_gap = 0.0;  // 2 min |phi|
  double pi_gap = 0.0;    // 2 min (pi - |phi|)
};

/// Result of the pi-gap winding computation.
struct InvariantResult {
  double raw_winding = 0.0;   // unwrapped phase winding of det V+ over the zone
  int g_pi = 0;               // nearest integer
  int k_points = 0;           // grid size used
  double max_phase_step = 0;  // largest unwrapping step (validity: < pi/2)
};

/// One-period evolution operator of the open chain. Throws DriveError for an
/// undriven spec (use the static spectrum path instead).
ComplexMatrix floquet_operator(const LatticeSpec& spec, const PropagatorPlan& plan,
                               const std::optional<DisorderSpec>& disorder = std::nullopt);

/// One-period Bloch evolution operator U(Lambda, k).
ComplexMatrix bloch_floquet_operator(const LatticeSpec& spec, double k,
                                     const PropagatorPlan& plan);

/// Quasienergy spectrum of a unitary one-period operator via the principal
/// matrix logarithm.
FloquetSpectrum quasienergy_spectrum(const ComplexMatrix& u, double period);

GapReport gap_report(const FloquetSpectrum& spectrum);

/// Periodized evolution operator V(z, k) = U(z, k) exp(+i H_eff(k) z);
/// identity at z = 0 and z = Lambda.
ComplexMatrix periodized_evolution(const LatticeSpec& spec, double k, double z,
                                   const PropagatorPlan& plan);

/// Split V(Lambda/2, k) into its two chiral blocks. The chiral permutation
/// sorts sublattice-A sites (odd sites, 1-based) first, making the chiral
/// operator diag(I, -I). Off-diagonal leakage beyond tol::chiral_leakage
/// throws ChiralityViolation.
std::pair<ComplexMatrix, ComplexMatrix> chiral_blocks(const ComplexMatrix& v_half);

/// The pi-gap invariant: winding number of det V+(k) over the Brillouin zone,
/// accumulated by phase unwrapping on a uniform closed k grid. Evaluated in
/// the theta0 = 0 drive frame, where the chiral block structure is exact; the
/// integer is frame independent. Throws GapClosedError when the pi gap over
/// the grid falls below 0.05 rad and ResolutionError when unwrapping steps
/// reach pi/2 (the caller doubles k_points).
InvariantResult g_pi(const LatticeSpec& spec, int k_points, const PropagatorPlan& plan);

}  // namespace fssh
