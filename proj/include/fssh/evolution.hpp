#pragma once

#include <optional>
#include <vector>

#include "fssh/lattice.hpp"
#include "fssh/matrix.hpp"

namespace fssh {

/// Discretization of the time-ordered exponential: uniform substeps with the
/// midpoint-exponential rule, exp(-i H(z_mid) dz) per substep. Second-order
/// accurate and unitary by construction.
struct PropagatorPlan {
  int steps_per_period = 256;

  void validate() const;  // throws PlanError below 16 steps per period
};

/// Sampled amplitudes and site intensities along z.
struct StateTrace {
  std::vector<double> z_samples;          // ascending, first sample at the injection point
  std::vector<StateVector> amplitudes;    // one N-vector per sample
  std::vector<std::vector<double>> intensities;  // |amplitude|^2 per site
};

/// Time-ordered propagator U(z1, z0) for the open chain. Throws PlanError if
/// z1 < z0 or the plan is invalid.
ComplexMatrix propagator(const LatticeSpec& spec, double z0, double z1,
                         const PropagatorPlan& plan,
                         const std::optional<DisorderSpec>& disorder = std::nullopt);

/// Bloch-decomposed propagator U(z1, z0; k) for a 2-band Bloch spec.
ComplexMatrix bloch_propagator(const LatticeSpec& spec, double k, double z0, double z1,
                               const PropagatorPlan& plan);

/// Evolve psi0 across [0, L], sampling at sample_count uniform positions.
/// psi0 must be normalized to 1e-12 (StateError otherwise); a driven spec must
/// cover at least one full period (SpecError otherwise).
StateTrace evolve_state(const LatticeSpec& spec, const StateVector& psi0,
                        const PropagatorPlan& plan, int sample_count,
                        const std::optional<DisorderSpec>& disorder = std::nullopt);

/// Stroboscopic samples at z = 0, Lambda, ..., periods * Lambda, computed by
/// repeated application of the one-period propagator. Throws DriveError for an
/// undriven spec.
StateTrace stroboscopic_trace(const LatticeSpec& spec, const StateVector& psi0,
                              const PropagatorPlan& plan, int periods,
                              const std::optional<DisorderSpec>& disorder = std::nullopt);

}  // namespace fssh
