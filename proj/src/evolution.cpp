#include "fssh/evolution.hpp"

#include <cmath>

#include "fssh/errors.hpp"
#include "fssh/numerics.hpp"

namespace fssh {

namespace {

int substep_count(const LatticeSpec& spec, double z0, double z1, const PropagatorPlan& plan) {
  if (!spec.driven()) return 1;  // static Hamiltonian: one exact exponential
  const double span = z1 - z0;
  if (span == 0.0) return 0;
  return std::max(1, int(std::ceil(span / spec.period() * double(plan.steps_per_period))));
}

// ordered product of midpoint exponentials applied to an initial matrix
template <typename HamAt>
ComplexMatrix ordered_product(std::size_t dim, double z0, double z1, int steps, HamAt&& ham_at) {
  ComplexMatrix u = ComplexMatrix::identity(dim);
  if (steps == 0) return u;
  const double dz = (z1 - z0) / double(steps);
  for (int j = 0; j < steps; ++j) {
    const double z_mid = z0 + (double(j) + 0.5) * dz;
    u = expm_skew_hermitian(ham_at(z_mid), dz) * u;
  }
  return u;
}

}  // namespace

void PropagatorPlan::validate() const {
  if (steps_per_period < 16)
    throw PlanError("steps_per_period: need at least 16 substeps per period");
}

ComplexMatrix propagator(const LatticeSpec& spec, double z0, double z1,
                         const PropagatorPlan& plan,
                         const std::optional<DisorderSpec>& disorder) {
  plan.validate();
  if (z1 < z0) throw PlanError("propagator: z1 must not precede z0");
  if (spec.boundary != Boundary::open)
    throw BoundaryMismatch("propagator: spec has Bloch boundary, use bloch_propagator");

  const BondProfile offsets =
      disorder ? apply_disorder(spec, *disorder) : BondProfile{};
  const int steps = substep_count(spec, z0, z1, plan);
  return ordered_product(std::size_t(spec.sites), z0, z1, steps,
                         [&](double z) { return hamiltonian_at(spec, z, offsets); });
}

ComplexMatrix bloch_propagator(const LatticeSpec& spec, double k, double z0, double z1,
                               const PropagatorPlan& plan) {
  plan.validate();
  if (z1 < z0) throw PlanError("bloch_propagator: z1 must not precede z0");
  const int steps = substep_count(spec, z0, z1, plan);
  return ordered_product(2, z0, z1, steps,
                         [&](double z) { return bloch_hamiltonian(spec, k, z); });
}

StateTrace evolve_state(const LatticeSpec& spec, const StateVector& psi0,
                        const PropagatorPlan& plan, int sample_count,
                        const std::optional<DisorderSpec>& disorder) {
  plan.validate();
  if (psi0.size() != std::size_t(spec.sites))
    throw StateError("evolve_state: psi0 has the wrong dimension");
  if (std::abs(norm(psi0) - 1.0) > 1e-12)
    throw StateError("evolve_state: psi0 is not normalized");
  if (sample_count < 2) throw StateError("evolve_state: need at least two samples");
  if (spec.driven() && spec.period() > spec.length)
    throw SpecError("L: propagation needs at least one full drive period (Lambda <= L)");

  const BondProfile offsets =
      disorder ? apply_disorder(spec, *disorder) : BondProfile{};

  // beta0 is a multiple of the identity: step with it stripped and put the
  // exact global phase exp(-i beta0 z) back on the sampled amplitudes, so
  // intensities cannot pick up gauge-dependent round-off
  LatticeSpec stepping = spec;
  stepping.beta0 = 0.0;

  StateTrace trace;
  trace.z_samples.resize(sample_count);
  trace.amplitudes.reserve(sample_count);
  trace.intensities.reserve(sample_count);

  StateVector psi = psi0;
  double z_prev = 0.0;
  for (int s = 0; s < sample_count; ++s) {
    const double z = spec.length * double(s) / double(sample_count - 1);
    trace.z_samples[s] = z;
    if (s > 0) {
      const int steps = substep_count(spec, z_prev, z, plan);
      const double dz = (z - z_prev) / double(steps);
      for (int j = 0; j < steps; ++j) {
        const double z_mid = z_prev + (double(j) + 0.5) * dz;
        psi = expm_skew_hermitian(hamiltonian_at(stepping, z_mid, offsets), dz) * psi;
      }
    }
    StateVector sampled = psi;
    if (spec.beta0 != 0.0) {
      const Complex phase = std::exp(Complex(0.0, -spec.beta0 * z));
      for (Complex& c : sampled) c *= phase;
    }
    std::vector<double> intensity(sampled.size());
    for (std::size_t i = 0; i < sampled.size(); ++i) intensity[i] = std::norm(sampled[i]);
    trace.amplitudes.push_back(std::move(sampled));
    trace.intensities.push_back(std::move(intensity));
    z_prev = z;
  }
  return trace;
}

StateTrace stroboscopic_trace(const LatticeSpec& spec, const StateVector& psi0,
                              const PropagatorPlan& plan, int periods,
                              const std::optional<DisorderSpec>& disorder) {
  plan.validate();
  if (!spec.driven()) throw DriveError("stroboscopic_trace: spec is undriven");
  if (psi0.size() != std::size_t(spec.sites))
    throw StateError("stroboscopic_trace: psi0 has the wrong dimension");
  if (std::abs(norm(psi0) - 1.0) > 1e-12)
    throw StateError("stroboscopic_trace: psi0 is not normalized");
  if (periods < 0) throw StateError("stroboscopic_trace: negative period count");

  LatticeSpec stepping = spec;
  stepping.beta0 = 0.0;
  const ComplexMatrix u_period = propagator(stepping, 0.0, spec.period(), plan, disorder);

  StateTrace trace;
  StateVector psi = psi0;
  for (int m = 0; m <= periods; ++m) {
    const double z = double(m) * spec.period();
    trace.z_samples.push_back(z);
    StateVector sampled = psi;
    if (spec.beta0 != 0.0) {
      const Complex phase = std::exp(Complex(0.0, -spec.beta0 * z));
      for (Complex& c : sampled) c *= phase;
    }
    std::vector<double> intensity(sampled.size());
    for (std::size_t i = 0; i < sampled.size(); ++i) intensity[i] = std::norm(sampled[i]);
    trace.amplitudes.push_back(std::move(sampled));
    trace.intensities.push_back(std::move(intensity));
    if (m < periods) psi = u_period * psi;
  }
  return trace;
}

}  // namespace fssh
