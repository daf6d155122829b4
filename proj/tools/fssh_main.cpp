// Command-line harness: spectra, invariants, propagation traces, replica
// bands, figure scenarios, frequency sweeps and disorder ensembles, all
// emitted as deterministic CSV/JSON datasets with a JSON manifest.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "fssh/errors.hpp"
#include "fssh/harness.hpp"
#include "fssh/numerics.hpp"
#include "fssh/replicas.hpp"

namespace {

using namespace fssh;

constexpr double PI = 3.14159265358979323846;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct GlobalOptions {
  std::string config;
  std::string out = ".";
  std::uint64_t seed = 1;
  int steps_per_period = 256;
  int k_points = 513;
  std::string format = "csv";

  OutputFormat output_format() const {
    if (format == "csv") return OutputFormat::csv;
    if (format == "json") return OutputFormat::json;
    throw SpecError("--format: expected csv or json");
  }
  PropagatorPlan plan() const { return PropagatorPlan{steps_per_period}; }
  ParsedSpec parsed() const {
    if (config.empty()) throw SpecError("--config: this subcommand needs a config file");
    return parse_spec(read_file(config));
  }
};

void write_manifest_only(const std::string& out_dir, const std::string& name,
                         const Dataset& data, OutputFormat format) {
  std::vector<ManifestFile> files;
  write_dataset(data, out_dir, format, files);
  std::ofstream m((std::filesystem::path(out_dir) / (name + "_manifest.json")).string(),
                  std::ios::binary);
  m << "{\n  \"tool_version\": \"" << TOOL_VERSION << "\",\n  \"files\": [\n";
  for (std::size_t i = 0; i < files.size(); ++i) {
    m << "    {\"path\": \"" << std::filesystem::path(files[i].path).filename().string()
      << "\", \"kind\": \"" << files[i].kind << "\", \"checksum\": \"" << files[i].checksum
      << "\"}" << (i + 1 < files.size() ? ",\n" : "\n");
  }
  m << "  ]\n}\n";
}

int run_spectrum(const GlobalOptions& g) {
  const ParsedSpec parsed = g.parsed();
  const LatticeSpec& spec = parsed.spec;
  Dataset d;
  d.name = "spectrum";
  if (!spec.driven()) {
    // static path: eigenvalues of the frozen Hamiltonian
    d.columns = {"mode_index", "eigenvalue_per_mm"};
    const HermitianEigenSystem es = eig_hermitian(
        parsed.disorder ? hamiltonian_at(spec, 0.0, *parsed.disorder)
                        : hamiltonian_at(spec, 0.0));
    for (std::size_t j = 0; j < es.eigenvalues.size(); ++j)
      d.rows.push_back({double(j), es.eigenvalues[j]});
    write_manifest_only(g.out, d.name, d, g.output_format());
    return 0;
  }
  if (spec.boundary == Boundary::open) {
    const FloquetSpectrum fs = quasienergy_spectrum(
        floquet_operator(spec, g.plan(), parsed.disorder), spec.period());
    d.columns = {"mode_index", "eigenphase_rad", "quasienergy_per_mm"};
    for (std::size_t j = 0; j < fs.eigenphases.size(); ++j)
      d.rows.push_back({double(j), fs.eigenphases[j], fs.quasienergies[j]});
  } else {
    d.columns = {"k_rad", "band_index", "eigenphase_rad", "quasienergy_per_mm"};
    for (int j = 0; j < g.k_points; ++j) {
      const double k = -PI + 2.0 * PI * double(j) / double(g.k_points - 1);
      const FloquetSpectrum fs =
          quasienergy_spectrum(bloch_floquet_operator(spec, k, g.plan()), spec.period());
      for (std::size_t b = 0; b < fs.eigenphases.size(); ++b)
        d.rows.push_back({k, double(b), fs.eigenphases[b], fs.quasienergies[b]});
    }
  }
  write_manifest_only(g.out, d.name, d, g.output_format());
  return 0;
}

int run_invariant(const GlobalOptions& g) {
  const ParsedSpec parsed = g.parsed();
  LatticeSpec spec = parsed.spec;
  spec.boundary = Boundary::bloch;
  const InvariantResult res = g_pi(spec, g.k_points, g.plan());
  std::cout << "raw_winding = " << format_double(res.raw_winding) << "\n"
            << "g_pi = " << res.g_pi << "\n"
            << "k_points = " << res.k_points << "\n"
            << "max_phase_step = " << format_double(res.max_phase_step) << "\n";
  Dataset d;
  d.name = "invariant";
  d.columns = {"raw_winding", "g_pi", "k_points", "max_phase_step"};
  d.rows.push_back({res.raw_winding, double(res.g_pi), double(res.k_points),
                    res.max_phase_step});
  write_manifest_only(g.out, d.name, d, g.output_format());
  return 0;
}

int run_propagate(const GlobalOptions& g, int samples, int site) {
  const ParsedSpec parsed = g.parsed();
  const LatticeSpec& spec = parsed.spec;
  if (site < 1 || site > spec.sites) throw StateError("--site: out of range");
  StateVector psi0(spec.sites, Complex(0.0, 0.0));
  psi0[site - 1] = 1.0;
  const StateTrace trace = evolve_state(spec, psi0, g.plan(), samples, parsed.disorder);
  Dataset d;
  d.name = "propagate";
  d.columns = {"z_mm", "site", "intensity"};
  for (std::size_t s = 0; s < trace.z_samples.size(); ++s)
    for (std::size_t i = 0; i < trace.intensities[s].size(); ++i)
      d.rows.push_back({trace.z_samples[s], double(i + 1), trace.intensities[s][i]});
  write_manifest_only(g.out, d.name, d, g.output_format());
  return 0;
}

int run_replicas(const GlobalOptions& g, int n_max, int nk) {
  const ParsedSpec parsed = g.parsed();
  LatticeSpec spec = parsed.spec;
  spec.boundary = Boundary::bloch;
  std::vector<double> k_grid;
  for (int j = 0; j < nk; ++j) k_grid.push_back(-PI + 2.0 * PI * double(j) / double(nk - 1));
  const ReplicaBands bands = replica_bands(spec, ReplicaSpec{n_max}, k_grid);
  Dataset d;
  d.name = "replicas";
  d.columns = {"k_rad", "band_index", "quasienergy_per_mm"};
  for (std::size_t i = 0; i < bands.k_grid.size(); ++i)
    for (std::size_t b = 0; b < bands.bands[i].size(); ++b)
      d.rows.push_back({bands.k_grid[i], double(b), bands.bands[i][b]});
  write_manifest_only(g.out, d.name, d, g.output_format());
  return 0;
}

int run_scenario_cmd(const GlobalOptions& g, const std::string& id, int samples) {
  ScenarioConfig cfg;
  cfg.id = id;
  if (!g.config.empty()) cfg.overrides = parse_spec(read_file(g.config));
  cfg.output_dir = g.out;
  cfg.plan = g.plan();
  cfg.format = g.output_format();
  cfg.base_seed = g.seed;
  cfg.samples = samples;
  cfg.k_points = g.k_points;
  run_scenario(cfg);
  return 0;
}

int run_sweep(const GlobalOptions& g, const std::string& values) {
  std::vector<double> grid;
  std::stringstream ss(values);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (!tok.empty()) grid.push_back(std::stod(tok));
  if (grid.empty()) throw SpecError("--values: no frequencies given");
  const std::vector<InvariantSweepRow> rows = sweep_invariant(grid, g.k_points, g.plan());
  Dataset d;
  d.name = "sweep";
  d.columns = {"omega_over_delta", "raw_winding", "g_pi", "defined"};
  for (const auto& r : rows) {
    d.rows.push_back({r.omega_over_delta, r.raw_winding, double(r.g_pi), r.defined ? 1.0 : 0.0});
    std::cout << "omega/Delta = " << format_double(r.omega_over_delta) << ": "
              << (r.defined ? ("G_pi = " + std::to_string(r.g_pi)) : "undefined (gap closed)")
              << "\n";
  }
  write_manifest_only(g.out, d.name, d, g.output_format());
  return 0;
}

int run_ensemble(const GlobalOptions& g, double amplitude, int seeds) {
  const ParsedSpec parsed = g.parsed();
  const LatticeSpec& spec = parsed.spec;
  double amp = amplitude;
  std::uint64_t seed = g.seed;
  if (parsed.disorder) {
    if (amplitude < 0.0) amp = parsed.disorder->amplitude;
    seed = parsed.disorder->seed;
  }
  if (amp < 0.0) throw SpecError("--amplitude: disorder amplitude not given");
  const EnsembleSummary s = disorder_ensemble(spec, amp, seeds, g.plan(), seed);
  std::cout << "clean boundary fraction = " << format_double(s.clean_fraction) << "\n"
            << "median = " << format_double(s.median) << ", q10 = " << format_double(s.q10)
            << ", fraction >= 0.5: " << format_double(s.fraction_above_half) << "\n";
  Dataset d;
  d.name = "ensemble";
  d.columns = {"seed", "boundary_fraction"};
  for (std::size_t i = 0; i < s.seeds.size(); ++i)
    d.rows.push_back({double(s.seeds[i]), s.boundary_fractions[i]});
  write_manifest_only(g.out, d.name, d, g.output_format());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Driven SSH waveguide-lattice simulator"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  GlobalOptions g;
  app.add_option("--config", g.config, "config file (flat key = value format)");
  app.add_option("--out", g.out, "output directory");
  app.add_option("--seed", g.seed, "base seed for ensembles");
  app.add_option("--steps-per-period", g.steps_per_period, "propagator substeps per period");
  app.add_option("--k-points", g.k_points, "Brillouin-zone grid size");
  app.add_option("--format", g.format, "dataset format: csv or json");

  auto* spectrum = app.add_subcommand("spectrum", "quasienergy spectrum of U(Lambda)");
  auto* invariant = app.add_subcommand("invariant", "pi-gap winding invariant");
  auto* propagate = app.add_subcommand("propagate", "intensity trace of an injected state");
  int samples = 2048, site = 1;
  propagate->add_option("--samples", samples, "z samples across [0, L]");
  propagate->add_option("--site", site, "injection waveguide (1-based)");
  auto* replicas = app.add_subcommand("replicas", "folded replica band structure");
  int n_max = 5, nk = 201;
  replicas->add_option("--n-max", n_max, "replica truncation order");
  replicas->add_option("--bands-k-points", nk, "k grid size for the bands");
  auto* scenario = app.add_subcommand("scenario", "reproduce one figure dataset");
  std::string scenario_id;
  scenario->add_option("--id", scenario_id, "scenario id (fig2a..fig5b)")->required();
  int scenario_samples = 2048;
  scenario->add_option("--samples", scenario_samples, "z samples for intensity maps");
  auto* sweep = app.add_subcommand("sweep", "invariant vs drive frequency");
  std::string values;
  sweep->add_option("--values", values, "comma-separated omega/Delta list")->required();
  auto* ensemble = app.add_subcommand("ensemble", "disorder ensemble statistics");
  double amplitude = -1.0;
  int seeds = 50;
  ensemble->add_option("--amplitude", amplitude, "disorder amplitude (1/mm)");
  ensemble->add_option("--seeds", seeds, "ensemble size");

  CLI11_PARSE(app, argc, argv);

  try {
    if (spectrum->parsed()) return run_spectrum(g);
    if (invariant->parsed()) return run_invariant(g);
    if (propagate->parsed()) return run_propagate(g, samples, site);
    if (replicas->parsed()) return run_replicas(g, n_max, nk);
    if (scenario->parsed()) return run_scenario_cmd(g, scenario_id, scenario_samples);
    if (sweep->parsed()) return run_sweep(g, values);
    if (ensemble->parsed()) return run_ensemble(g, amplitude, seeds);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::spec ? 2 : 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
