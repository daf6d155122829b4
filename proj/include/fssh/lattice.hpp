#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fssh/matrix.hpp"

namespace fssh {

enum class Boundary { open, bloch };

/// Physical and drive parameters of one run. Lengths in mm, couplings and
/// frequencies in 1/mm; the propagation coordinate z plays the role of time.
struct LatticeSpec {
  int sites = 10;              // N
  double length = 400.0;       // L (mm)
  double kappa0 = 0.042;       // mean coupling (1/mm)
  double delta_kappa = 0.02;   // modulation depth (1/mm)
  double omega = 0.0;          // drive frequency (rad/mm); 0 = undriven
  double theta0 = 0.0;         // initial drive phase (rad)
  double beta0 = 0.0;          // propagation constant offset (1/mm)
  Boundary boundary = Boundary::open;

  bool driven() const { return omega > 0.0; }
  double period() const;                        // Lambda = 2 pi / omega
  double bandwidth() const { return 4.0 * kappa0; }
  double reduced_frequency() const;             // n_Lambda = omega L / (2 pi)

  /// Throws SpecError if any invariant is violated.
  void validate() const;
};

/// Exponential spacing-to-coupling law kappa(G) = prefactor * exp(-G / decay_length).
struct GeometryMap {
  double g0;            // rest spacing (mm)
  double A0;            // bending amplitude (mm)
  double Lambda;        // bending period (mm)
  double decay_length;  // d (mm)
  double prefactor;     // c (1/mm)
};

/// Static random bond offsets, uniform on [-amplitude, amplitude].
struct DisorderSpec {
  double amplitude = 0.0;  // max |offset| (1/mm)
  std::uint64_t seed = 0;
};

/// Instantaneous bond couplings kappa_i, i = 1..N-1.
struct BondProfile {
  std::vector<double> bonds;
};

/// A parsed config document: the lattice spec plus the optional tables.
/// provided_keys records which fields the document set explicitly, so callers
/// can apply a config as a partial override.
struct ParsedSpec {
  LatticeSpec spec;
  std::optional<GeometryMap> geometry;
  std::optional<DisorderSpec> disorder;
  std::set<std::string> provided_keys;
};

/// Parse the flat key/value config format (strict: unknown keys are errors).
/// Accepts either `omega` or `n_Lambda` (converted as omega = n_Lambda 2pi/L),
/// never both. Throws SpecError with the offending field named.
ParsedSpec parse_spec(const std::string& text);

/// Calibrate (prefactor, decay_length) so that kappa(g0) = kappa0 and the
/// first-order modulation amplitude |kappa'(g0)| 2 A0 equals delta_kappa.
GeometryMap calibrate_geometry(double g0, double A0, double Lambda, double kappa0,
                               double delta_kappa);

/// kappa(G) for the calibrated map. Throws GeometryError for G <= 0.
double geometry_to_coupling(const GeometryMap& map, double spacing);

/// Draw the N-1 static disorder offsets for this spec. Throws SpecError when
/// the amplitude would let a bond reach zero.
BondProfile apply_disorder(const LatticeSpec& spec, const DisorderSpec& disorder);

/// Open-boundary instantaneous Hamiltonian at position z: real symmetric
/// tridiagonal, diagonal beta0, bond i = kappa0 + (-1)^i delta_kappa
/// cos(omega z + theta0) + offset_i (bonds 1-based). Throws BoundaryMismatch
/// on a Bloch spec.
ComplexMatrix hamiltonian_at(const LatticeSpec& spec, double z);
ComplexMatrix hamiltonian_at(const LatticeSpec& spec, double z, const DisorderSpec& disorder);
ComplexMatrix hamiltonian_at(const LatticeSpec& spec, double z, const BondProfile& offsets);

/// Bloch Hamiltonian H(k, z) = [[0, h], [h*, 0]] with h = v + w e^{-ik},
/// v/w the intra-/inter-cell couplings (beta0 gauged away). Throws
/// BoundaryMismatch on an open spec.
ComplexMatrix bloch_hamiltonian(const LatticeSpec& spec, double k, double z);

/// Exact single-harmonic decomposition H(z) = h0 + hplus e^{i omega z} +
/// hminus e^{-i omega z}.
struct FourierComponents {
  ComplexMatrix h0;
  ComplexMatrix hplus;
  ComplexMatrix hminus;
};
FourierComponents fourier_components(const LatticeSpec& spec);            // open boundary
FourierComponents fourier_components(const LatticeSpec& spec, double k);  // Bloch blocks

}  // namespace fssh
