#include "fssh/floquet.hpp"

#include <cmath>

#include "fssh/errors.hpp"
#include "fssh/numerics.hpp"

namespace fssh {

namespace {
constexpr double PI = 3.14159265358979323846;
constexpr double GAP_CLOSED_THRESHOLD = 0.05;  // rad, pi-gap validity floor

double wrap_to_pi(double x) {
  while (x > PI) x -= 2.0 * PI;
  while (x <= -PI) x += 2.0 * PI;
  return x;
}
}  // namespace

ComplexMatrix floquet_operator(const LatticeSpec& spec, const PropagatorPlan& plan,
                               const std::optional<DisorderSpec>& disorder) {
  if (!spec.driven()) throw DriveError("floquet_operator: spec is undriven");
  return propagator(spec, 0.0, spec.period(), plan, disorder);
}

ComplexMatrix bloch_floquet_operator(const LatticeSpec& spec, double k,
                                     const PropagatorPlan& plan) {
  if (!spec.driven()) throw DriveError("bloch_floquet_operator: spec is undriven");
  return bloch_propagator(spec, k, 0.0, spec.period(), plan);
}

FloquetSpectrum quasienergy_spectrum(const ComplexMatrix& u, double period) {
  const UnitaryLogResult lg = log_unitary(u);
  const HermitianEigenSystem es = eig_hermitian(lg.hermitian_log);

  FloquetSpectrum out;
  out.period = period;
  out.eigenphases = es.eigenvalues;
  out.quasienergies.resize(out.eigenphases.size());
  for (std::size_t j = 0; j < out.eigenphases.size(); ++j)
    out.quasienergies[j] = out.eigenphases[j] / period;
  out.eigenvectors = es.eigenvectors;
  return out;
}

GapReport gap_report(const FloquetSpectrum& spectrum) {
  if (spectrum.eigenphases.empty()) throw SpecError("gap_report: empty spectrum");
  double min_abs = PI, min_to_pi = PI;
  for (double phi : spectrum.eigenphases) {
    min_abs = std::min(min_abs, std::abs(phi));
    min_to_pi = std::min(min_to_pi, PI - std::abs(phi));
  }
  return GapReport{2.0 * min_abs, 2.0 * min_to_pi};
}

ComplexMatrix periodized_evolution(const LatticeSpec& spec, double k, double z,
                                   const PropagatorPlan& plan) {
  if (!spec.driven()) throw DriveError("periodized_evolution: spec is undriven");
  const double lambda = spec.period();
  const ComplexMatrix u_period = bloch_propagator(spec, k, 0.0, lambda, plan);
  const UnitaryLogResult lg = log_unitary(u_period);  // H_eff * Lambda
  const ComplexMatrix u_z = bloch_propagator(spec, k, 0.0, z, plan);
  // exp(+i H_eff z) = exp(-i (H_eff Lambda) (-z / Lambda))
  return u_z * expm_skew_hermitian(lg.hermitian_log, -z / lambda);
}

std::pair<ComplexMatrix, ComplexMatrix> chiral_blocks(const ComplexMatrix& v_half) {
  if (!v_half.square() || v_half.rows() % 2 != 0)
    throw ChiralityViolation("chiral_blocks: need a square even-dimensional matrix", 0.0);
  const std::size_t n = v_half.rows();
  const std::size_t half = n / 2;

  // permutation: sublattice A (even 0-based index = odd 1-based site) first
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < half; ++i) {
    perm[i] = 2 * i;
    perm[half + i] = 2 * i + 1;
  }

  ComplexMatrix plus(half, half), minus(half, half);
  double leakage = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const Complex v = v_half(perm[i], perm[j]);
      const bool i_plus = i < half, j_plus = j < half;
      if (i_plus && j_plus)
        plus(i, j) = v;
      else if (!i_plus && !j_plus)
        minus(i - half, j - half) = v;
      else
        leakage = std::max(leakage, std::abs(v));
    }
  }
  if (leakage > tol::chiral_leakage)
    throw ChiralityViolation(
        "chiral_blocks: off-diagonal leakage above tolerance (wrong time frame or theta0?)",
        leakage);
  return {plus, minus};
}

InvariantResult g_pi(const LatticeSpec& spec, int k_points, const PropagatorPlan& plan) {
  if (spec.boundary != Boundary::bloch)
    throw BoundaryMismatch("g_pi: invariant is defined on the Bloch spec");
  if (!spec.driven()) throw DriveError("g_pi: spec is undriven");
  if (k_points < 3) throw SpecError("g_pi: need at least 3 k points");

  // invariant frame: theta0 = 0 makes H(z) even in z and the chiral split of
  // V(Lambda/2) exact; other theta0 values are origin shifts of the same drive
  LatticeSpec frame = spec;
  frame.theta0 = 0.0;
  const double lambda = frame.period();

  // pass 1: one-period logs over the grid, diagnosing the pi gap before any
  // chiral decomposition is attempted (the split degrades exactly when the
  // gap closes, and GapClosedError is the meaningful diagnosis then)
  std::vector<ComplexMatrix> logs(k_points);
  std::vector<double> grid(k_points);
  double min_pi_distance = PI;
  for (int j = 0; j < k_points; ++j) {
    double k = -PI + 2.0 * PI * double(j) / double(k_points - 1);
    for (int attempt = 0;; ++attempt) {
      try {
        const UnitaryLogResult lg = log_unitary(bloch_propagator(frame, k, 0.0, lambda, plan));
        for (double phi : lg.eigenphases)
          min_pi_distance = std::min(min_pi_distance, PI - std::abs(phi));
        logs[j] = lg.hermitian_log;
        break;
      } catch (const BranchAmbiguity&) {
        if (attempt >= 1) {
          min_pi_distance = 0.0;  // unresolvable branch point: the gap is closed
          break;
        }
        k += 1e-6 * 2.0 * PI;
      }
    }
    grid[j] = k;
  }
  const double pi_gap = 2.0 * min_pi_distance;
  if (pi_gap < GAP_CLOSED_THRESHOLD)
    throw GapClosedError("g_pi: pi gap closed over the k grid (" + std::to_string(pi_gap) +
                         " rad), invariant undefined");

  // pass 2: accumulate the winding of det V+ by phase unwrapping
  double accumulated = 0.0, max_step = 0.0;
  double prev_phase = 0.0;
  for (int j = 0; j < k_points; ++j) {
    const ComplexMatrix u_half = bloch_propagator(frame, grid[j], 0.0, lambda / 2.0, plan);
    const ComplexMatrix v_half = u_half * expm_skew_hermitian(logs[j], -0.5);
    const auto [v_plus, v_minus] = chiral_blocks(v_half);
    const double phase = std::arg(v_plus.determinant());
    if (j > 0) {
      const double step = wrap_to_pi(phase - prev_phase);
      max_step = std::max(max_step, std::abs(step));
      accumulated += step;
    }
    prev_phase = phase;
  }
  if (max_step >= PI / 2.0)
    throw ResolutionError("g_pi: unwrapping step reached pi/2, double k_points");

  InvariantResult out;
  out.raw_winding = accumulated / (2.0 * PI);
  out.g_pi = int(std::lround(out.raw_winding));
  out.k_points = k_points;
  out.max_phase_step = max_step;
  if (std::abs(out.raw_winding - double(out.g_pi)) > 1e-3)
    throw ResolutionError("g_pi: raw winding not within 1e-3 of an integer");
  return out;
}

}  // namespace fssh
