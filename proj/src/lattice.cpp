#include "fssh/lattice.hpp"

#include <cctype>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "fssh/errors.hpp"
#include "fssh/prng.hpp"

namespace fssh {

namespace {
constexpr double PI = 3.14159265358979323846;

double drive_modulation(const LatticeSpec& s, double z) {
  return s.delta_kappa * std::cos(s.omega * z + s.theta0);
}
}  // namespace

double LatticeSpec::period() const {
  if (!driven()) throw SpecError("period: spec is undriven (omega = 0)");
  return 2.0 * PI / omega;
}

double LatticeSpec::reduced_frequency() const { return omega * length / (2.0 * PI); }

void LatticeSpec::validate() const {
  if (boundary == Boundary::open && sites < 2) throw SpecError("N: open chain needs N >= 2");
  if (boundary == Boundary::bloch && sites % 2 != 0)
    throw SpecError("N: Bloch interpretation needs an even N");
  if (length <= 0.0) throw SpecError("L: length must be positive");
  if (kappa0 <= 0.0) throw SpecError("kappa0: mean coupling must be positive");
  if (delta_kappa < 0.0 || delta_kappa >= kappa0)
    throw SpecError("delta_kappa: need 0 <= delta_kappa < kappa0 so couplings stay positive");
  if (omega < 0.0) throw SpecError("omega: drive frequency must be nonnegative");
}

// ---------------------------------------------------------------------------
// config parsing (strict flat key/value format with optional tables)
// ---------------------------------------------------------------------------

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_number(const std::string& key, const std::string& value) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &pos);
  } catch (const std::exception&) {
    throw SpecError(key + ": not a number: '" + value + "'");
  }
  if (pos != value.size()) throw SpecError(key + ": trailing characters in '" + value + "'");
  return v;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  std::size_t pos = 0;
  std::uint64_t v = 0;
  try {
    v = std::stoull(value, &pos);
  } catch (const std::exception&) {
    throw SpecError(key + ": not an unsigned integer: '" + value + "'");
  }
  if (pos != value.size()) throw SpecError(key + ": trailing characters in '" + value + "'");
  return v;
}

std::string parse_string(const std::string& value) {
  if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
    return value.substr(1, value.size() - 2);
  return value;  // bare words accepted for enum-like fields
}

}  // namespace

ParsedSpec parse_spec(const std::string& text) {
  ParsedSpec out;
  std::map<std::string, std::string> top, geometry, disorder;
  std::map<std::string, std::string>* current = &top;
  std::string section;

  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']')
        throw SpecError("config line " + std::to_string(lineno) + ": malformed table header");
      section = trim(line.substr(1, line.size() - 2));
      if (section == "geometry")
        current = &geometry;
      else if (section == "disorder")
        current = &disorder;
      else
        throw SpecError("unknown table [" + section + "]");
      continue;
    }

    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw SpecError("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw SpecError("config line " + std::to_string(lineno) + ": empty key or value");
    if (current->count(key)) throw SpecError(key + ": duplicate key");
    (*current)[key] = value;
  }

  const std::set<std::string> known_top = {"N",      "L",      "kappa0", "delta_kappa", "omega",
                                           "n_Lambda", "theta0", "beta0",  "boundary"};
  for (const auto& [k, v] : top)
    if (!known_top.count(k)) throw SpecError(k + ": unknown key");

  LatticeSpec spec;
  if (top.count("N")) spec.sites = int(parse_number("N", top["N"]));
  if (top.count("L")) spec.length = parse_number("L", top["L"]);
  if (top.count("kappa0")) spec.kappa0 = parse_number("kappa0", top["kappa0"]);
  if (top.count("delta_kappa")) spec.delta_kappa = parse_number("delta_kappa", top["delta_kappa"]);
  if (top.count("theta0")) spec.theta0 = parse_number("theta0", top["theta0"]);
  if (top.count("beta0")) spec.beta0 = parse_number("beta0", top["beta0"]);

  if (top.count("omega") && top.count("n_Lambda"))
    throw SpecError("omega/n_Lambda: give one of the two, not both");
  if (top.count("omega")) {
    spec.omega = parse_number("omega", top["omega"]);
  } else if (top.count("n_Lambda")) {
    const double n_lambda = parse_number("n_Lambda", top["n_Lambda"]);
    if (n_lambda < 0.0) throw SpecError("n_Lambda: must be nonnegative");
    spec.omega = n_lambda * 2.0 * PI / spec.length;
  }

  if (top.count("boundary")) {
    const std::string b = parse_string(top["boundary"]);
    if (b == "open")
      spec.boundary = Boundary::open;
    else if (b == "bloch")
      spec.boundary = Boundary::bloch;
    else
      throw SpecError("boundary: expected \"open\" or \"bloch\", got '" + b + "'");
  }

  spec.validate();
  out.spec = spec;
  for (const auto& [k, v] : top) out.provided_keys.insert(k);
  for (const auto& [k, v] : geometry) out.provided_keys.insert("geometry." + k);
  for (const auto& [k, v] : disorder) out.provided_keys.insert("disorder." + k);

  if (!geometry.empty()) {
    double g0 = 2.6, a0 = 0.8;
    for (const auto& [k, v] : geometry) {
      if (k == "g0")
        g0 = parse_number("geometry.g0", v);
      else if (k == "A0")
        a0 = parse_number("geometry.A0", v);
      else
        throw SpecError("geometry." + k + ": unknown key");
    }
    const double lambda = spec.driven() ? spec.period() : spec.length;
    out.geometry = calibrate_geometry(g0, a0, lambda, spec.kappa0, spec.delta_kappa);
  }

  if (!disorder.empty()) {
    DisorderSpec d;
    for (const auto& [k, v] : disorder) {
      if (k == "amplitude")
        d.amplitude = parse_number("disorder.amplitude", v);
      else if (k == "seed")
        d.seed = parse_u64("disorder.seed", v);
      else
        throw SpecError("disorder." + k + ": unknown key");
    }
    if (d.amplitude < 0.0) throw SpecError("disorder.amplitude: must be nonnegative");
    if (d.amplitude > spec.kappa0 - spec.delta_kappa)
      throw SpecError("disorder.amplitude: must not exceed kappa0 - delta_kappa");
    out.disorder = d;
  }

  return out;
}

// ---------------------------------------------------------------------------
// geometry calibration
// ---------------------------------------------------------------------------

GeometryMap calibrate_geometry(double g0, double A0, double Lambda, double kappa0,
                               double delta_kappa) {
  if (g0 <= 0.0 || A0 <= 0.0) throw GeometryError("geometry: need g0 > 0 and A0 > 0");
  if (g0 - 2.0 * A0 <= 0.0)
    throw GeometryError("geometry: waveguides touch (g0 - 2 A0 <= 0)");
  if (delta_kappa <= 0.0)
    throw GeometryError("geometry: calibration needs delta_kappa > 0");
  GeometryMap map;
  map.g0 = g0;
  map.A0 = A0;
  map.Lambda = Lambda;
  map.decay_length = 2.0 * A0 * kappa0 / delta_kappa;
  map.prefactor = kappa0 * std::exp(g0 / map.decay_length);
  return map;
}

double geometry_to_coupling(const GeometryMap& map, double spacing) {
  if (spacing <= 0.0) throw GeometryError("geometry_to_coupling: spacing must be positive");
  return map.prefactor * std::exp(-spacing / map.decay_length);
}

// ---------------------------------------------------------------------------
// disorder
// ---------------------------------------------------------------------------

BondProfile apply_disorder(const LatticeSpec& spec, const DisorderSpec& disorder) {
  if (disorder.amplitude < 0.0) throw SpecError("disorder amplitude must be nonnegative");
  // equality allowed: the weakest bond can then touch zero at isolated z only
  if (disorder.amplitude > spec.kappa0 - spec.delta_kappa)
    throw SpecError("disorder amplitude must not exceed kappa0 - delta_kappa");
  const CounterRng rng{disorder.seed};
  BondProfile profile;
  profile.bonds.resize(spec.sites - 1);
  for (std::size_t i = 0; i < profile.bonds.size(); ++i)
    profile.bonds[i] = rng.uniform_symmetric(i, disorder.amplitude);
  return profile;
}

// ---------------------------------------------------------------------------
// Hamiltonians
// ---------------------------------------------------------------------------

ComplexMatrix hamiltonian_at(const LatticeSpec& spec, double z, const BondProfile& offsets) {
  if (spec.boundary != Boundary::open)
    throw BoundaryMismatch("hamiltonian_at: spec has Bloch boundary");
  spec.validate();
  const std::size_t n = std::size_t(spec.sites);
  if (!offsets.bonds.empty() && offsets.bonds.size() != n - 1)
    throw SpecError("bond offsets: expected N-1 entries");

  ComplexMatrix h(n, n);
  const double mod = drive_modulation(spec, z);
  for (std::size_t i = 0; i < n; ++i) h(i, i) = spec.beta0;
  for (std::size_t bond = 1; bond < n; ++bond) {
    const double parity = (bond % 2 == 1) ? -1.0 : 1.0;
    double kappa = spec.kappa0 + parity * mod;
    if (!offsets.bonds.empty()) kappa += offsets.bonds[bond - 1];
    h(bond - 1, bond) = kappa;
    h(bond, bond - 1) = kappa;
  }
  return h;
}

ComplexMatrix hamiltonian_at(const LatticeSpec& spec, double z) {
  return hamiltonian_at(spec, z, BondProfile{});
}

ComplexMatrix hamiltonian_at(const LatticeSpec& spec, double z, const DisorderSpec& disorder) {
  return hamiltonian_at(spec, z, apply_disorder(spec, disorder));
}

ComplexMatrix bloch_hamiltonian(const LatticeSpec& spec, double k, double z) {
  if (spec.boundary != Boundary::bloch)
    throw BoundaryMismatch("bloch_hamiltonian: spec has open boundary");
  spec.validate();
  const double mod = drive_modulation(spec, z);
  const double v = spec.kappa0 - mod;  // intra-cell, matches bond 1 of the open chain
  const double w = spec.kappa0 + mod;
  const Complex hk = v + w * std::exp(Complex(0.0, -k));
  ComplexMatrix h(2, 2);
  h(0, 1) = hk;
  h(1, 0) = std::conj(hk);
  return h;
}

FourierComponents fourier_components(const LatticeSpec& spec) {
  if (spec.boundary != Boundary::open)
    throw BoundaryMismatch("fourier_components: spec has Bloch boundary (pass k)");
  spec.validate();
  const std::size_t n = std::size_t(spec.sites);

  ComplexMatrix h0(n, n), staggered(n, n);
  for (std::size_t i = 0; i < n; ++i) h0(i, i) = spec.beta0;
  for (std::size_t bond = 1; bond < n; ++bond) {
    const double parity = (bond % 2 == 1) ? -1.0 : 1.0;
    h0(bond - 1, bond) = spec.kappa0;
    h0(bond, bond - 1) = spec.kappa0;
    staggered(bond - 1, bond) = parity * spec.delta_kappa;
    staggered(bond, bond - 1) = parity * spec.delta_kappa;
  }

  FourierComponents out;
  if (!spec.driven()) {
    // frozen modulation is static: fold it into h0
    out.h0 = h0 + Complex(std::cos(spec.theta0), 0.0) * staggered;
    out.hplus = ComplexMatrix(n, n);
    out.hminus = ComplexMatrix(n, n);
    return out;
  }
  out.h0 = h0;
  out.hplus = Complex(0.5, 0.0) * std::exp(Complex(0.0, spec.theta0)) * staggered;
  out.hminus = out.hplus.adjoint();
  return out;
}

FourierComponents fourier_components(const LatticeSpec& spec, double k) {
  if (spec.boundary != Boundary::bloch)
    throw BoundaryMismatch("fourier_components: spec has open boundary");
  spec.validate();

  ComplexMatrix h0(2, 2), staggered(2, 2);
  const Complex h0k = spec.kappa0 * (1.0 + std::exp(Complex(0.0, -k)));
  h0(0, 1) = h0k;
  h0(1, 0) = std::conj(h0k);
  const Complex hck = spec.delta_kappa * (-1.0 + std::exp(Complex(0.0, -k)));
  staggered(0, 1) = hck;
  staggered(1, 0) = std::conj(hck);

  FourierComponents out;
  if (!spec.driven()) {
    out.h0 = h0 + Complex(std::cos(spec.theta0), 0.0) * staggered;
    out.hplus = ComplexMatrix(2, 2);
    out.hminus = ComplexMatrix(2, 2);
    return out;
  }
  out.h0 = h0;
  out.hplus = Complex(0.5, 0.0) * std::exp(Complex(0.0, spec.theta0)) * staggered;
  out.hminus = out.hplus.adjoint();
  return out;
}

}  // namespace fssh
