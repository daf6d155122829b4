// Regenerates tests/data/expectations.json: reference values measured once
// with a fine-step propagator (4096 substeps per period) and frozen for the
// test suite. Run from the repository root:
//
//   ./build/gen_expectations tests/data/expectations.json

#include <cmath>
#include <fstream>
#include <iostream>
#include <vector>

#include "fssh/harness.hpp"

using namespace fssh;

namespace {

constexpr double PI = 3.14159265358979323846;

LatticeSpec base_spec(double n_lambda, double theta0 = 0.0) {
  LatticeSpec s;
  s.sites = 10;
  s.length = 400.0;
  s.kappa0 = 0.042;
  s.delta_kappa = 0.02;
  s.omega = n_lambda * 2.0 * PI / s.length;
  s.theta0 = theta0;
  return s;
}

StateVector e1(int n) {
  StateVector psi(n, Complex(0.0, 0.0));
  psi[0] = 1.0;
  return psi;
}

std::vector<double> z_averaged_profile(const LatticeSpec& spec, const PropagatorPlan& plan) {
  const StateTrace trace = evolve_state(spec, e1(spec.sites), plan, 2048);
  std::vector<double> profile(spec.sites, 0.0);
  for (const auto& intensity : trace.intensities)
    for (int i = 0; i < spec.sites; ++i) profile[i] += intensity[i];
  for (double& p : profile) p /= double(trace.intensities.size());
  return profile;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string path = argc > 1 ? argv[1] : "tests/data/expectations.json";
  const PropagatorPlan fine{4096};

  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "cannot write " << path << "\n";
    return 1;
  }

  auto emit = [&out, first = true](const std::string& key, double value) mutable {
    if (!first) out << ",\n";
    first = false;
    out << "  \"" << key << "\": " << format_double(value);
    std::cout << key << " = " << format_double(value) << "\n";
  };

  out << "{\n";

  // boundary fractions at z = L (intensity on sites 1-2, edge injection)
  emit("fig2c_boundary_fraction", boundary_fraction(base_spec(3.0), fine));
  emit("fig4a_boundary_fraction", boundary_fraction(base_spec(3.0, PI), fine));
  {
    LatticeSpec dimerized = base_spec(3.0);
    dimerized.omega = 0.0;  // frozen bonds 0.022 / 0.062
    emit("fig2d_boundary_fraction", boundary_fraction(dimerized, fine));
  }
  {
    LatticeSpec uniform = base_spec(3.0);
    uniform.omega = 0.0;
    uniform.delta_kappa = 0.0;
    const ComplexMatrix u = propagator(uniform, 0.0, uniform.length, fine);
    const StateVector psi = u * e1(uniform.sites);
    emit("fig2b_site1_intensity", std::norm(psi[0]));
  }
  emit("fig5_nl4_boundary_fraction", boundary_fraction(base_spec(4.0), fine));

  // stroboscopic behavior of the n_Lambda = 3 run (fig3d)
  {
    const LatticeSpec s = base_spec(3.0);
    const StateTrace strobe = stroboscopic_trace(s, e1(s.sites), fine, 3);
    double mean = 0.0;
    for (int m = 1; m <= 3; ++m) mean += strobe.intensities[m][0];
    mean /= 3.0;
    double var = 0.0;
    for (int m = 1; m <= 3; ++m) {
      const double d = strobe.intensities[m][0] - mean;
      var += d * d;
    }
    emit("fig3d_strobe_site1_variance", var / 3.0);

    const StateTrace intra = evolve_state(s, e1(s.sites), fine, 2048);
    double lo = 1.0, hi = 0.0;
    for (std::size_t i = 0; i < intra.z_samples.size(); ++i) {
      if (intra.z_samples[i] > s.period()) break;
      lo = std::min(lo, intra.intensities[i][0]);
      hi = std::max(hi, intra.intensities[i][0]);
    }
    emit("fig3d_intraperiod_peak_to_peak", hi - lo);
  }

  // high-frequency theta0 insensitivity (figs 2a / 4b)
  {
    const std::vector<double> p0 = z_averaged_profile(base_spec(20.0), fine);
    const std::vector<double> ppi = z_averaged_profile(base_spec(20.0, PI), fine);
    double tv = 0.0;
    for (std::size_t i = 0; i < p0.size(); ++i) tv += std::abs(p0[i] - ppi[i]);
    emit("tv_nl20_theta0", tv / 2.0);
  }

  // disorder ensembles (fig5), amplitude 0.022, seeds base+0..49
  for (double nl : {3.0, 4.0}) {
    const EnsembleSummary s = disorder_ensemble(base_spec(nl), 0.022, 50, fine, 1);
    const std::string tag = nl == 3.0 ? "fig5_nl3" : "fig5_nl4";
    emit(tag + "_fraction_above_half", s.fraction_above_half);
    emit(tag + "_q10", s.q10);
    emit(tag + "_median", s.median);
  }

  out << "\n}\n";
  std::cout << "wrote " << path << "\n";
  return 0;
}
