#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fssh/errors.hpp"
#include "fssh/evolution.hpp"
#include "fssh/numerics.hpp"

using namespace fssh;

namespace {
constexpr double PI = 3.14159265358979323846;

LatticeSpec experiment_spec(double n_lambda) {
  LatticeSpec s;
  s.sites = 10;
  s.length = 400.0;
  s.kappa0 = 0.042;
  s.delta_kappa = 0.02;
  s.omega = n_lambda * 2.0 * PI / 400.0;
  return s;
}

StateVector e1(int n) {
  StateVector psi(n, Complex(0.0, 0.0));
  psi[0] = 1.0;
  return psi;
}
}  // namespace

TEST_CASE("propagator: static spec reduces to one matrix exponential") {
  LatticeSpec s = experiment_spec(3.0);
  s.omega = 0.0;
  const PropagatorPlan plan;
  const ComplexMatrix u = propagator(s, 0.0, 250.0, plan);
  const ComplexMatrix ref = expm_skew_hermitian(hamiltonian_at(s, 0.0), 250.0);
  CHECK(max_abs_diff(u, ref) < 1e-9);
}

TEST_CASE("propagator: composition over subintervals") {
  // cut point commensurate with the substep grid, where the group property
  // holds exactly; incommensurate cuts differ at the discretization error
  const LatticeSpec s = experiment_spec(3.0);
  const PropagatorPlan plan;
  const double z1 = s.period() / 2.0, z2 = 1.5 * s.period();
  const ComplexMatrix direct = propagator(s, 0.0, z2, plan);
  const ComplexMatrix split = propagator(s, z1, z2, plan) * propagator(s, 0.0, z1, plan);
  CHECK(max_abs_diff(direct, split) < 1e-9);
}

TEST_CASE("propagator: 256 steps per period against the fine-step oracle") {
  // frozen from the 16384-step oracle: 2.09e-5 at 256 substeps (second-order
  // midpoint rule), shrinking by ~4x per step doubling
  const LatticeSpec s = experiment_spec(3.0);
  const ComplexMatrix fine = propagator(s, 0.0, s.period(), PropagatorPlan{16384});
  const ComplexMatrix coarse = propagator(s, 0.0, s.period(), PropagatorPlan{256});
  CHECK(max_abs_diff(coarse, fine) < 3e-5);
  const ComplexMatrix medium = propagator(s, 0.0, s.period(), PropagatorPlan{1024});
  CHECK(max_abs_diff(medium, fine) < 2e-6);
}

TEST_CASE("propagator: unitary and second-order convergent") {
  const LatticeSpec s = experiment_spec(5.0);
  const PropagatorPlan plan;
  const ComplexMatrix u = propagator(s, 0.0, s.period(), plan);
  CHECK(u.unitarity_defect() < 1e-9);
  const ComplexMatrix should_be_identity = u.adjoint() * u;
  CHECK(max_abs_diff(should_be_identity, ComplexMatrix::identity(u.rows())) < 1e-9);

  // halving the step should reduce the error by about 4x
  const ComplexMatrix ref = propagator(s, 0.0, s.period(), PropagatorPlan{8192});
  const double err_h = max_abs_diff(propagator(s, 0.0, s.period(), PropagatorPlan{128}), ref);
  const double err_h2 = max_abs_diff(propagator(s, 0.0, s.period(), PropagatorPlan{256}), ref);
  const double ratio = err_h / err_h2;
  CHECK(ratio > 3.5);
  CHECK(ratio < 4.5);
}

TEST_CASE("propagator: plan and ordering errors") {
  const LatticeSpec s = experiment_spec(3.0);
  CHECK_THROWS_AS(propagator(s, 0.0, 10.0, PropagatorPlan{8}), PlanError);
  CHECK_THROWS_AS(propagator(s, 10.0, 0.0, PropagatorPlan{}), PlanError);
}

TEST_CASE("evolve_state: two-site Rabi oscillation against the closed form") {
  LatticeSpec s = experiment_spec(3.0);
  s.sites = 2;
  s.omega = 0.0;
  s.delta_kappa = 0.0;
  const StateTrace trace = evolve_state(s, e1(2), PropagatorPlan{}, 257);
  for (std::size_t i = 0; i < trace.z_samples.size(); ++i) {
    const double expected = std::sin(s.kappa0 * trace.z_samples[i]);
    CHECK(std::abs(trace.intensities[i][1] - expected * expected) < 1e-6);
  }
}

TEST_CASE("evolve_state: first sample is the injected state, norm conserved") {
  const LatticeSpec s = experiment_spec(3.0);
  const StateTrace trace = evolve_state(s, e1(10), PropagatorPlan{}, 101);
  CHECK(trace.z_samples.front() == 0.0);
  CHECK(trace.z_samples.back() == s.length);
  CHECK(std::abs(trace.amplitudes.front()[0] - Complex(1.0, 0.0)) < 1e-15);
  for (const auto& intensity : trace.intensities) {
    double total = 0.0;
    for (double v : intensity) total += v;
    CHECK(std::abs(total - 1.0) < 1e-8);
  }
}

TEST_CASE("evolve_state: input validation") {
  const LatticeSpec s = experiment_spec(3.0);
  StateVector bad(10, Complex(0.0, 0.0));
  bad[0] = 0.9;
  CHECK_THROWS_AS(evolve_state(s, bad, PropagatorPlan{}, 64), StateError);

  LatticeSpec slow = experiment_spec(0.5);  // period 800 > L
  CHECK_THROWS_AS(evolve_state(slow, e1(10), PropagatorPlan{}, 64), SpecError);
}

TEST_CASE("evolve_state: beta0 only contributes a global phase") {
  LatticeSpec s = experiment_spec(3.0);
  LatticeSpec shifted = s;
  shifted.beta0 = 0.35;
  const StateTrace a = evolve_state(s, e1(10), PropagatorPlan{}, 64);
  const StateTrace b = evolve_state(shifted, e1(10), PropagatorPlan{}, 64);
  for (std::size_t i = 0; i < a.z_samples.size(); ++i) {
    for (int site = 0; site < 10; ++site)
      CHECK(std::abs(a.intensities[i][site] - b.intensities[i][site]) < 1e-10);
    // amplitudes differ by exp(-i beta0 z)
    const Complex expected_phase = std::exp(Complex(0.0, -shifted.beta0 * a.z_samples[i]));
    for (int site = 0; site < 10; ++site)
      CHECK(std::abs(b.amplitudes[i][site] - expected_phase * a.amplitudes[i][site]) < 1e-8);
  }
}

TEST_CASE("stroboscopic_trace: matches direct propagation to multiples of the period") {
  const LatticeSpec s = experiment_spec(3.0);
  const PropagatorPlan plan;
  const StateTrace strobe = stroboscopic_trace(s, e1(10), plan, 3);
  REQUIRE(strobe.z_samples.size() == 4);
  CHECK(norm(strobe.amplitudes[0]) == doctest::Approx(1.0));
  for (int i = 0; i < 10; ++i)
    CHECK(std::abs(strobe.amplitudes[0][i] - e1(10)[i]) == 0.0);

  for (int m = 1; m <= 3; ++m) {
    const ComplexMatrix um = propagator(s, 0.0, double(m) * s.period(), plan);
    const StateVector direct = um * e1(10);
    for (int i = 0; i < 10; ++i)
      CHECK(std::abs(strobe.amplitudes[m][i] - direct[i]) < 1e-8);
  }
}

TEST_CASE("stroboscopic_trace: beta0 leaves intensities untouched") {
  const LatticeSpec s = experiment_spec(3.0);
  LatticeSpec shifted = s;
  shifted.beta0 = 0.21;
  StateVector psi(10, Complex(0.0, 0.0));
  psi[0] = 1.0;
  const StateTrace a = stroboscopic_trace(s, psi, PropagatorPlan{}, 3);
  const StateTrace b = stroboscopic_trace(shifted, psi, PropagatorPlan{}, 3);
  for (std::size_t m = 0; m < a.z_samples.size(); ++m)
    for (int i = 0; i < 10; ++i)
      CHECK(std::abs(a.intensities[m][i] - b.intensities[m][i]) < 1e-12);
}

TEST_CASE("stroboscopic_trace: driven uniform chain reduces to the static evolution") {
  LatticeSpec s = experiment_spec(3.0);
  s.delta_kappa = 0.0;  // driven flag set, but H is z-independent
  StateVector bulk(10, Complex(0.0, 0.0));
  bulk[4] = 1.0;
  const StateTrace strobe = stroboscopic_trace(s, bulk, PropagatorPlan{}, 2);
  const ComplexMatrix u2 = expm_skew_hermitian(hamiltonian_at(s, 0.0), 2.0 * s.period());
  const StateVector direct = u2 * bulk;
  for (int i = 0; i < 10; ++i) CHECK(std::abs(strobe.amplitudes[2][i] - direct[i]) < 1e-9);

  LatticeSpec undriven = s;
  undriven.omega = 0.0;
  CHECK_THROWS_AS(stroboscopic_trace(undriven, bulk, PropagatorPlan{}, 2), DriveError);
}
