#include "fssh/replicas.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fssh/errors.hpp"
#include "fssh/floquet.hpp"
#include "fssh/numerics.hpp"

namespace fssh {

namespace {

void place_block(ComplexMatrix& big, const ComplexMatrix& block, std::size_t row0,
                 std::size_t col0) {
  for (std::size_t i = 0; i < block.rows(); ++i)
    for (std::size_t j = 0; j < block.cols(); ++j) big(row0 + i, col0 + j) = block(i, j);
}

ComplexMatrix assemble(const FourierComponents& fc, double omega, int n_max,
                       std::size_t block_dim) {
  const std::size_t replicas = std::size_t(2 * n_max + 1);
  ComplexMatrix big(replicas * block_dim, replicas * block_dim);
  for (int m = -n_max; m <= n_max; ++m) {
    const std::size_t bm = std::size_t(m + n_max);
    ComplexMatrix diag = fc.h0;
    for (std::size_t i = 0; i < block_dim; ++i) diag(i, i) += double(m) * omega;
    place_block(big, diag, bm * block_dim, bm * block_dim);
    if (m < n_max) {
      // block (m+1, m) carries H^(+1)
      place_block(big, fc.hplus, (bm + 1) * block_dim, bm * block_dim);
      place_block(big, fc.hminus, bm * block_dim, (bm + 1) * block_dim);
    }
  }
  return big;
}

// dominant replica index of an eigenvector column
int dominant_replica(const ComplexMatrix& vectors, std::size_t col, int n_max,
                     std::size_t block_dim) {
  int best = 0;
  double best_weight = -1.0;
  for (int m = -n_max; m <= n_max; ++m) {
    const std::size_t row0 = std::size_t(m + n_max) * block_dim;
    double w = 0.0;
    for (std::size_t i = 0; i < block_dim; ++i) w += std::norm(vectors(row0 + i, col));
    if (w > best_weight) {
      best_weight = w;
      best = m;
    }
  }
  return best;
}

std::vector<double> trusted_folded_eigenvalues(const LatticeSpec& spec, const ReplicaSpec& rspec,
                                               double k) {
  const ComplexMatrix hf = extended_hamiltonian(spec, rspec, k);
  const HermitianEigenSystem es = eig_hermitian(hf);
  const int trust = trusted_replica_order(rspec.n_max);
  std::vector<double> folded;
  for (std::size_t col = 0; col < es.eigenvalues.size(); ++col) {
    if (std::abs(dominant_replica(es.eigenvectors, col, rspec.n_max, 2)) > trust) continue;
    folded.push_back(fold_to_zone(es.eigenvalues[col], spec.omega));
  }
  std::sort(folded.begin(), folded.end());
  return folded;
}

}  // namespace

void ReplicaSpec::validate() const {
  if (n_max < 0) throw SpecError("n_max: truncation order must be nonnegative");
}

int trusted_replica_order(int n_max) { return std::max(0, n_max - 2); }

ComplexMatrix extended_hamiltonian(const LatticeSpec& spec, const ReplicaSpec& rspec) {
  rspec.validate();
  if (!spec.driven()) throw DriveError("extended_hamiltonian: spec is undriven");
  return assemble(fourier_components(spec), spec.omega, rspec.n_max, std::size_t(spec.sites));
}

ComplexMatrix extended_hamiltonian(const LatticeSpec& spec, const ReplicaSpec& rspec, double k) {
  rspec.validate();
  if (!spec.driven()) throw DriveError("extended_hamiltonian: spec is undriven");
  return assemble(fourier_components(spec, k), spec.omega, rspec.n_max, 2);
}

double fold_to_zone(double value, double omega) {
  double folded = value - omega * std::round(value / omega);
  if (folded <= -0.5 * omega) folded += omega;
  if (folded > 0.5 * omega) folded -= omega;
  return folded;
}

ReplicaBands replica_bands(const LatticeSpec& spec, const ReplicaSpec& rspec,
                           const std::vector<double>& k_grid) {
  ReplicaBands out;
  out.k_grid = k_grid;
  out.bands.reserve(k_grid.size());
  for (double k : k_grid) out.bands.push_back(trusted_folded_eigenvalues(spec, rspec, k));
  return out;
}

double replica_vs_floquet(const LatticeSpec& spec, const ReplicaSpec& rspec,
                          const std::vector<double>& k_grid, const PropagatorPlan& plan) {
  double worst = 0.0;
  for (double k : k_grid) {
    const std::vector<double> folded = trusted_folded_eigenvalues(spec, rspec, k);
    const FloquetSpectrum fs =
        quasienergy_spectrum(bloch_floquet_operator(spec, k, plan), spec.period());

    auto nearest = [](const std::vector<double>& set, double x) {
      double best = std::numeric_limits<double>::infinity();
      for (double v : set) best = std::min(best, std::abs(v - x));
      return best;
    };
    double h = 0.0;
    for (double v : folded) h = std::max(h, nearest(fs.quasienergies, v));
    for (double q : fs.quasienergies) h = std::max(h, nearest(folded, q));
    worst = std::max(worst, h);
  }
  return worst;
}

}  // namespace fssh
