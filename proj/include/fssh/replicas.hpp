#pragma once

#include <vector>

#include "fssh/evolution.hpp"
#include "fssh/lattice.hpp"

namespace fssh {

/// Frequency-space truncation: replicas n = -n_max .. +n_max.
struct ReplicaSpec {
  int n_max = 2;

  void validate() const;  // throws SpecError for negative n_max
};

/// Quasienergy bands of the truncated replica ladder, folded into the first
/// Floquet zone (-omega/2, omega/2]. Only eigenvalues passing the truncation
/// trust rule are kept, so the per-k band count may vary.
struct ReplicaBands {
  std::vector<double> k_grid;
  std::vector<std::vector<double>> bands;  // folded eigenvalues per k, ascending
};

/// Largest replica index whose eigenvalues are trusted at this truncation.
/// Truncation artifacts reach one replica deeper than the outermost ring, so
/// diagnostics keep dominant-|n| <= max(0, n_max - 2).
int trusted_replica_order(int n_max);

/// Truncated extended-space Hamiltonian: block (m, n) = H^(m-n) + m omega I
/// on the diagonal, Fourier blocks from the lattice decomposition. Open
/// boundary (N x N blocks) or Bloch (2 x 2 blocks) when k is given.
ComplexMatrix extended_hamiltonian(const LatticeSpec& spec, const ReplicaSpec& rspec);
ComplexMatrix extended_hamiltonian(const LatticeSpec& spec, const ReplicaSpec& rspec, double k);

/// Fold an energy into the first Floquet zone (-omega/2, omega/2].
double fold_to_zone(double value, double omega);

ReplicaBands replica_bands(const LatticeSpec& spec, const ReplicaSpec& rspec,
                           const std::vector<double>& k_grid);

/// Validation of the truncation: worst-case (over the k grid) Hausdorff
/// distance between the folded trusted replica eigenvalues and the
/// quasienergies of the directly time-ordered Floquet operator.
double replica_vs_floquet(const LatticeSpec& spec, const ReplicaSpec& rspec,
                          const std::vector<double>& k_grid, const PropagatorPlan& plan);

}  // namespace fssh
