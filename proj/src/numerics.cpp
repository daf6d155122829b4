#include "fssh/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fssh/errors.hpp"

namespace fssh {

namespace {

constexpr double PI = 3.14159265358979323846;

void require_hermitian(const ComplexMatrix& h, const char* who) {
  if (!h.square()) throw HermiticityViolation(std::string(who) + ": matrix not square", 0.0);
  if (!h.all_finite()) throw HermiticityViolation(std::string(who) + ": non-finite entries", 0.0);
  const double defect = h.hermiticity_defect();
  if (defect > tol::hermiticity_input * h.max_abs())  // relative to the largest entry
    throw HermiticityViolation(std::string(who) + ": input not Hermitian", defect);
}

// One cyclic sweep of complex Jacobi rotations on the Hermitian work matrix a,
// accumulating the rotations into q. Rotations with |a_pq| <= threshold are
// skipped. Returns the largest off-diagonal magnitude seen before rotating.
double jacobi_sweep(ComplexMatrix& a, ComplexMatrix& q, double threshold) {
  const std::size_t n = a.rows();
  double off_max = 0.0;
  for (std::size_t p = 0; p + 1 < n; ++p) {
    for (std::size_t r = p + 1; r < n; ++r) {
      const Complex apr = a(p, r);
      const double mag = std::abs(apr);
      off_max = std::max(off_max, mag);
      if (mag <= threshold) continue;

      const double app = a(p, p).real();
      const double arr = a(r, r).real();
      const Complex phase = apr / mag;

      // rotation angle zeroing a_pr: smallest root of t^2 - 2 tau t - 1 = 0
      const double tau = (arr - app) / (2.0 * mag);
      const double t = (tau >= 0.0 ? -1.0 : 1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
      const double c = 1.0 / std::sqrt(1.0 + t * t);
      const double s = t * c;
      const Complex s_phase = s * phase;

      // rows p, r of a  (A <- R^dag A)
      for (std::size_t j = 0; j < n; ++j) {
        const Complex apj = a(p, j);
        const Complex arj = a(r, j);
        a(p, j) = c * apj + s_phase * arj;
        a(r, j) = -std::conj(s_phase) * apj + c * arj;
      }
      // columns p, r of a  (A <- A R)
      for (std::size_t i = 0; i < n; ++i) {
        const Complex aip = a(i, p);
        const Complex air = a(i, r);
        a(i, p) = c * aip + std::conj(s_phase) * air;
        a(i, r) = -s_phase * aip + c * air;
      }
      // restore exact Hermitian structure of the touched entries
      a(p, r) = Complex(0.0, 0.0);
      a(r, p) = Complex(0.0, 0.0);
      a(p, p) = Complex(a(p, p).real(), 0.0);
      a(r, r) = Complex(a(r, r).real(), 0.0);

      // accumulate eigenvectors (Q <- Q R)
      for (std::size_t i = 0; i < n; ++i) {
        const Complex qip = q(i, p);
        const Complex qir = q(i, r);
        q(i, p) = c * qip + std::conj(s_phase) * qir;
        q(i, r) = -s_phase * qip + c * qir;
      }
    }
  }
  return off_max;
}

}  // namespace

HermitianEigenSystem eig_hermitian(const ComplexMatrix& h) {
  require_hermitian(h, "eig_hermitian");
  const std::size_t n = h.rows();

  // symmetrize the work copy so round-off asymmetry cannot accumulate
  ComplexMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = 0.5 * (h(i, j) + std::conj(h(j, i)));

  ComplexMatrix q = ComplexMatrix::identity(n);
  const double scale = std::max(a.max_abs(), 1e-300);
  const double stop = 1e-14 * scale;

  constexpr int max_sweeps = 80;
  bool converged = false;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    const double off = jacobi_sweep(a, q, 0.1 * stop);
    if (off <= stop) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw ConvergenceFailure("eig_hermitian: Jacobi sweeps did not converge");

  HermitianEigenSystem out;
  out.eigenvalues.resize(n);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> diag(n);
  for (std::size_t i = 0; i < n; ++i) diag[i] = a(i, i).real();
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return diag[x] < diag[y]; });

  out.eigenvectors = ComplexMatrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    out.eigenvalues[j] = diag[order[j]];
    for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, j) = q(i, order[j]);
  }
  return out;
}

ComplexMatrix expm_skew_hermitian(const ComplexMatrix& h, double t) {
  require_hermitian(h, "expm_skew_hermitian");
  const HermitianEigenSystem es = eig_hermitian(h);
  const std::size_t n = h.rows();

  // U = Q diag(exp(-i lambda t)) Q^dag
  ComplexMatrix scaled = es.eigenvectors;
  for (std::size_t j = 0; j < n; ++j) {
    const Complex f = std::exp(Complex(0.0, -es.eigenvalues[j] * t));
    for (std::size_t i = 0; i < n; ++i) scaled(i, j) *= f;
  }
  return scaled * es.eigenvectors.adjoint();
}

UnitaryLogResult log_unitary(const ComplexMatrix& u) {
  if (!u.square()) throw UnitarityViolation("log_unitary: matrix not square", 0.0);
  const double defect = u.unitarity_defect();
  if (defect > tol::unitarity_input)
    throw UnitarityViolation("log_unitary: input not unitary", defect);
  const std::size_t n = u.rows();

  // commuting Hermitian pair: U = A + iB
  const ComplexMatrix ud = u.adjoint();
  ComplexMatrix a(n, n), b(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      a(i, j) = 0.5 * (u(i, j) + ud(i, j));
      b(i, j) = Complex(0.0, 0.5) * (ud(i, j) - u(i, j));
    }
  }

  HermitianEigenSystem ea = eig_hermitian(a);
  ComplexMatrix& q = ea.eigenvectors;

  // resolve degenerate clusters of A with B (cos phi equal, sin phi differs;
  // this is the generic situation for chiral-symmetric spectra)
  const double cluster_gap = 1e-7;
  std::size_t start = 0;
  while (start < n) {
    std::size_t end = start + 1;
    while (end < n && ea.eigenvalues[end] - ea.eigenvalues[end - 1] <= cluster_gap) ++end;
    const std::size_t m = end - start;
    if (m > 1) {
      ComplexMatrix sub(m, m);
      for (std::size_t cj = 0; cj < m; ++cj) {
        StateVector col(n);
        for (std::size_t i = 0; i < n; ++i) col[i] = q(i, start + cj);
        const StateVector bcol = b * col;
        for (std::size_t ci = 0; ci < m; ++ci) {
          Complex acc(0.0, 0.0);
          for (std::size_t i = 0; i < n; ++i) acc += std::conj(q(i, start + ci)) * bcol[i];
          sub(ci, cj) = acc;
        }
      }
      // force Hermitian before diagonalizing
      for (std::size_t ci = 0; ci < m; ++ci)
        for (std::size_t cj = ci; cj < m; ++cj) {
          const Complex v = 0.5 * (sub(ci, cj) + std::conj(sub(cj, ci)));
          sub(ci, cj) = v;
          sub(cj, ci) = std::conj(v);
        }
      const HermitianEigenSystem eb = eig_hermitian(sub);
      // rotate the cluster columns of q
      ComplexMatrix rotated(n, m);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t cj = 0; cj < m; ++cj) {
          Complex acc(0.0, 0.0);
          for (std::size_t ck = 0; ck < m; ++ck)
            acc += q(i, start + ck) * eb.eigenvectors(ck, cj);
          rotated(i, cj) = acc;
        }
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t cj = 0; cj < m; ++cj) q(i, start + cj) = rotated(i, cj);
    }
    start = end;
  }

  // eigenphases from the joint basis; U q_j = e^{i atan2(b_j, a_j)} q_j and
  // U = exp(-iH) puts the H-eigenphase at the negative of that angle
  UnitaryLogResult out;
  out.eigenphases.resize(n);
  std::vector<double> phases(n);
  for (std::size_t j = 0; j < n; ++j) {
    StateVector col(n);
    for (std::size_t i = 0; i < n; ++i) col[i] = q(i, j);
    const StateVector acol = a * col;
    const StateVector bcol = b * col;
    Complex aj(0.0, 0.0), bj(0.0, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      aj += std::conj(col[i]) * acol[i];
      bj += std::conj(col[i]) * bcol[i];
    }
    double phi = -std::atan2(bj.real(), aj.real());
    if (phi <= -PI) phi += 2.0 * PI;  // branch convention (-pi, pi]
    if (phi + PI <= tol::branch_guard)
      throw BranchAmbiguity("log_unitary: eigenphase at the -pi branch point");
    phases[j] = phi;
  }

  ComplexMatrix scaled = q;
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) scaled(i, j) *= phases[j];
  ComplexMatrix hlog = scaled * q.adjoint();
  // symmetrize away round-off
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      const Complex v = 0.5 * (hlog(i, j) + std::conj(hlog(j, i)));
      hlog(i, j) = v;
      hlog(j, i) = std::conj(v);
    }
  out.hermitian_log = hlog;
  out.eigenphases = phases;
  std::sort(out.eigenphases.begin(), out.eigenphases.end());
  return out;
}

}  // namespace fssh
