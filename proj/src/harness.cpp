#include "fssh/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <thread>

#include <json.hpp>

#include "fssh/errors.hpp"
#include "fssh/numerics.hpp"
#include "fssh/replicas.hpp"

namespace fssh {

namespace {

constexpr double PI = 3.14159265358979323846;

LatticeSpec default_spec() {
  LatticeSpec s;
  s.sites = 10;
  s.length = 400.0;
  s.kappa0 = 0.042;
  s.delta_kappa = 0.02;
  s.omega = 0.0;
  s.theta0 = 0.0;
  s.boundary = Boundary::open;
  return s;
}

double omega_for_reduced(const LatticeSpec& s, double n_lambda) {
  return n_lambda * 2.0 * PI / s.length;
}

// run fn(0..count) on a few workers; results must be written by index
template <typename F>
void parallel_for(std::size_t count, F&& fn) {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned workers = unsigned(std::min<std::size_t>(hw, count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::future<void>> futures;
  futures.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    futures.push_back(std::async(std::launch::async, [&]() {
      for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
    }));
  }
  for (auto& f : futures) f.get();
}

StateVector edge_injection(int sites) {
  StateVector psi(sites, Complex(0.0, 0.0));
  psi[0] = 1.0;
  return psi;
}

// apply override keys from a parsed config onto a scenario default spec
void apply_overrides(const ScenarioConfig& cfg, LatticeSpec& spec,
                     std::optional<DisorderSpec>& disorder) {
  if (!cfg.overrides) return;
  const ParsedSpec& o = *cfg.overrides;
  const auto has = [&](const char* key) { return o.provided_keys.count(key) > 0; };
  if (has("N")) spec.sites = o.spec.sites;
  if (has("L")) spec.length = o.spec.length;
  if (has("kappa0")) spec.kappa0 = o.spec.kappa0;
  if (has("delta_kappa")) spec.delta_kappa = o.spec.delta_kappa;
  if (has("omega") || has("n_Lambda")) spec.omega = o.spec.omega;
  if (has("theta0")) spec.theta0 = o.spec.theta0;
  if (has("beta0")) spec.beta0 = o.spec.beta0;
  if (has("boundary")) spec.boundary = o.spec.boundary;
  if (o.disorder) disorder = o.disorder;
  spec.validate();
}

nlohmann::json spec_json(const LatticeSpec& s) {
  return nlohmann::json{{"N", s.sites},
                        {"L", s.length},
                        {"kappa0", s.kappa0},
                        {"delta_kappa", s.delta_kappa},
                        {"omega", s.omega},
                        {"theta0", s.theta0},
                        {"beta0", s.beta0},
                        {"boundary", s.boundary == Boundary::open ? "open" : "bloch"}};
}

Dataset intensity_dataset(const std::string& name, const StateTrace& trace) {
  Dataset d;
  d.name = name;
  d.columns = {"z_mm", "site", "intensity"};
  for (std::size_t s = 0; s < trace.z_samples.size(); ++s)
    for (std::size_t i = 0; i < trace.intensities[s].size(); ++i)
      d.rows.push_back({trace.z_samples[s], double(i + 1), trace.intensities[s][i]});
  return d;
}

}  // namespace

// ---------------------------------------------------------------------------
// serialization
// ---------------------------------------------------------------------------

std::string format_double(double v) {
  // shortest decimal that round-trips exactly, so replays are byte-identical
  char buf[40];
  for (int precision = 15; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    if (std::strtod(buf, nullptr) == v) return buf;
  }
  return buf;
}

std::string fnv1a_file_checksum(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioError("checksum: cannot open " + path);
  std::uint64_t hash = 0xcbf29ce484222325ull;
  char c;
  while (in.get(c)) {
    hash ^= std::uint64_t(static_cast<unsigned char>(c));
    hash *= 0x100000001b3ull;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a:%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

void write_dataset(const Dataset& data, const std::string& dir, OutputFormat format,
                   std::vector<ManifestFile>& files) {
  std::filesystem::create_directories(dir);
  const std::string ext = format == OutputFormat::csv ? ".csv" : ".json";
  const std::string path = (std::filesystem::path(dir) / (data.name + ext)).string();

  std::ofstream out(path, std::ios::binary);
  if (!out) throw ScenarioError("cannot write " + path);
  if (format == OutputFormat::csv) {
    for (std::size_t c = 0; c < data.columns.size(); ++c)
      out << (c ? "," : "") << data.columns[c];
    out << "\n";
    for (const auto& row : data.rows) {
      for (std::size_t c = 0; c < row.size(); ++c)
        out << (c ? "," : "") << format_double(row[c]);
      out << "\n";
    }
  } else {
    out << "{\n  \"columns\": [";
    for (std::size_t c = 0; c < data.columns.size(); ++c)
      out << (c ? ", " : "") << '"' << data.columns[c] << '"';
    out << "],\n  \"rows\": [\n";
    for (std::size_t r = 0; r < data.rows.size(); ++r) {
      out << "    [";
      for (std::size_t c = 0; c < data.rows[r].size(); ++c)
        out << (c ? ", " : "") << format_double(data.rows[r][c]);
      out << (r + 1 < data.rows.size() ? "],\n" : "]\n");
    }
    out << "  ]\n}\n";
  }
  out.close();
  files.push_back({path, format == OutputFormat::csv ? "csv" : "json",
                   fnv1a_file_checksum(path)});
}

// ---------------------------------------------------------------------------
// mid-level operations
// ---------------------------------------------------------------------------

double boundary_fraction(const LatticeSpec& spec, const PropagatorPlan& plan,
                         const std::optional<DisorderSpec>& disorder) {
  const ComplexMatrix u = propagator(spec, 0.0, spec.length, plan, disorder);
  const StateVector psi = u * edge_injection(spec.sites);
  return std::norm(psi[0]) + std::norm(psi[1]);
}

std::vector<InvariantSweepRow> sweep_invariant(const std::vector<double>& omega_over_delta,
                                               int k_points, const PropagatorPlan& plan) {
  LatticeSpec base = default_spec();
  base.boundary = Boundary::bloch;

  std::vector<InvariantSweepRow> rows(omega_over_delta.size());
  parallel_for(omega_over_delta.size(), [&](std::size_t i) {
    InvariantSweepRow row;
    row.omega_over_delta = omega_over_delta[i];
    LatticeSpec s = base;
    s.omega = row.omega_over_delta * s.bandwidth();
    try {
      InvariantResult res;
      try {
        res = g_pi(s, k_points, plan);
      } catch (const ResolutionError&) {
        res = g_pi(s, 2 * k_points - 1, plan);  // one retry on a doubled grid
      }
      row.raw_winding = res.raw_winding;
      row.g_pi = res.g_pi;
      row.defined = true;
    } catch (const GapClosedError&) {
      row.defined = false;
    }
    rows[i] = row;
  });
  return rows;
}

EnsembleSummary disorder_ensemble(const LatticeSpec& spec, double amplitude, int seeds,
                                  const PropagatorPlan& plan, std::uint64_t base_seed) {
  if (seeds < 1) throw SpecError("disorder_ensemble: need at least one seed");
  EnsembleSummary summary;
  summary.clean_fraction = boundary_fraction(spec, plan);
  summary.seeds.resize(seeds);
  summary.boundary_fractions.resize(seeds);
  parallel_for(std::size_t(seeds), [&](std::size_t i) {
    const DisorderSpec d{amplitude, base_seed + i};
    summary.seeds[i] = d.seed;
    summary.boundary_fractions[i] = boundary_fraction(spec, plan, d);
  });

  std::vector<double> sorted = summary.boundary_fractions;
  std::sort(sorted.begin(), sorted.end());
  const auto quantile = [&](double p) {
    const std::size_t idx = std::size_t(std::lround(p * double(sorted.size() - 1)));
    return sorted[idx];
  };
  summary.min = sorted.front();
  summary.q10 = quantile(0.10);
  summary.median = quantile(0.50);
  summary.q90 = quantile(0.90);
  summary.max = sorted.back();
  std::size_t above = 0;
  for (double f : sorted)
    if (f >= 0.5) ++above;
  summary.fraction_above_half = double(above) / double(sorted.size());
  return summary;
}

// ---------------------------------------------------------------------------
// scenarios
// ---------------------------------------------------------------------------

const std::vector<std::string>& scenario_ids() {
  static const std::vector<std::string> ids = {"fig2a", "fig2b", "fig2c", "fig2d", "fig3a",
                                               "fig3b", "fig3c", "fig3d", "fig3e", "fig3f",
                                               "fig3g", "fig4a", "fig4b", "fig5a", "fig5b"};
  return ids;
}

namespace {

// configure the spec for one of the intensity-map scenarios
void propagation_scenario(const std::string& id, LatticeSpec& spec) {
  if (id == "fig2a") {
    spec.omega = omega_for_reduced(spec, 20.0);
  } else if (id == "fig2b") {
    spec.delta_kappa = 0.0;
    spec.omega = 0.0;
  } else if (id == "fig2c") {
    spec.omega = omega_for_reduced(spec, 3.0);
  } else if (id == "fig2d") {
    spec.omega = 0.0;  // frozen dimerization: bonds kappa0 -+ delta_kappa
  } else if (id == "fig4a") {
    spec.omega = omega_for_reduced(spec, 3.0);
    spec.theta0 = PI;
  } else if (id == "fig4b") {
    spec.omega = omega_for_reduced(spec, 20.0);
    spec.theta0 = PI;
  }
}

std::vector<double> frequency_grid(double start, double stop, double step) {
  std::vector<double> grid;
  for (int j = 0;; ++j) {
    const double v = start + step * double(j);
    if (v > stop + 1e-12) break;
    grid.push_back(v);
  }
  return grid;
}

}  // namespace

OutputManifest run_scenario(const ScenarioConfig& cfg) {
  const auto& ids = scenario_ids();
  if (std::find(ids.begin(), ids.end(), cfg.id) == ids.end())
    throw ScenarioError("unknown scenario id '" + cfg.id + "'");
  cfg.plan.validate();

  LatticeSpec spec = default_spec();
  std::optional<DisorderSpec> disorder;
  std::vector<Dataset> datasets;
  nlohmann::json echo;
  echo["scenario"] = cfg.id;
  echo["plan"] = {{"steps_per_period", cfg.plan.steps_per_period}};
  echo["samples"] = cfg.samples;
  echo["k_points"] = cfg.k_points;
  echo["base_seed"] = cfg.base_seed;
  echo["format"] = cfg.format == OutputFormat::csv ? "csv" : "json";

  const bool is_propagation = cfg.id.rfind("fig2", 0) == 0 || cfg.id.rfind("fig4", 0) == 0;

  if (is_propagation) {
    propagation_scenario(cfg.id, spec);
    apply_overrides(cfg, spec, disorder);
    const StateTrace trace =
        evolve_state(spec, edge_injection(spec.sites), cfg.plan, cfg.samples, disorder);
    datasets.push_back(intensity_dataset(cfg.id + "_intensity", trace));
  } else if (cfg.id == "fig3a") {
    spec.sites = 40;
    apply_overrides(cfg, spec, disorder);
    const std::vector<double> grid = frequency_grid(0.2025, 1.9775, 0.025);
    std::vector<std::vector<std::vector<double>>> rows(grid.size());
    parallel_for(grid.size(), [&](std::size_t i) {
      LatticeSpec s = spec;
      s.omega = grid[i] * s.bandwidth();
      const FloquetSpectrum fs =
          quasienergy_spectrum(floquet_operator(s, cfg.plan, disorder), s.period());
      for (std::size_t j = 0; j < fs.eigenphases.size(); ++j)
        rows[i].push_back({grid[i], double(j), fs.eigenphases[j], fs.quasienergies[j]});
    });
    Dataset d;
    d.name = "fig3a_obc_spectrum";
    d.columns = {"omega_over_delta", "mode_index", "eigenphase_rad", "quasienergy_per_mm"};
    for (const auto& block : rows)
      for (const auto& row : block) d.rows.push_back(row);
    datasets.push_back(std::move(d));
  } else if (cfg.id == "fig3b") {
    apply_overrides(cfg, spec, disorder);
    // open intervals on both sides of the closure points 1/3 and 1
    std::vector<double> grid = frequency_grid(0.35, 0.975, 0.025);
    for (double v : frequency_grid(1.025, 2.0, 0.025)) grid.push_back(v);
    const std::vector<InvariantSweepRow> rows = sweep_invariant(grid, cfg.k_points, cfg.plan);
    Dataset d;
    d.name = "fig3b_invariant";
    d.columns = {"omega_over_delta", "raw_winding", "g_pi", "defined"};
    for (const auto& r : rows)
      d.rows.push_back({r.omega_over_delta, r.raw_winding, double(r.g_pi), r.defined ? 1.0 : 0.0});
    datasets.push_back(std::move(d));
  } else if (cfg.id == "fig3c") {
    spec.sites = 40;
    apply_overrides(cfg, spec, disorder);
    const ReplicaSpec rspec{3};
    const int trust = trusted_replica_order(rspec.n_max);
    const std::vector<double> grid = frequency_grid(0.2025, 0.9775, 0.025);
    std::vector<std::vector<std::vector<double>>> rows(grid.size());
    parallel_for(grid.size(), [&](std::size_t i) {
      LatticeSpec s = spec;
      s.omega = grid[i] * s.bandwidth();
      const ComplexMatrix hf = extended_hamiltonian(s, rspec);
      const HermitianEigenSystem es = eig_hermitian(hf);
      const std::size_t block = std::size_t(s.sites);
      int kept = 0;
      for (std::size_t col = 0; col < es.eigenvalues.size(); ++col) {
        // dominant replica filter, inline to reuse the eigenvectors
        int best = 0;
        double best_w = -1.0;
        for (int m = -rspec.n_max; m <= rspec.n_max; ++m) {
          double w = 0.0;
          const std::size_t row0 = std::size_t(m + rspec.n_max) * block;
          for (std::size_t r = 0; r < block; ++r) w += std::norm(es.eigenvectors(row0 + r, col));
          if (w > best_w) {
            best_w = w;
            best = m;
          }
        }
        if (std::abs(best) > trust) continue;
        const double folded = fold_to_zone(es.eigenvalues[col], s.omega);
        rows[i].push_back({grid[i], double(kept++), folded, folded * s.period()});
      }
    });
    Dataset d;
    d.name = "fig3c_replica_obc_spectrum";
    d.columns = {"omega_over_delta", "state_index", "quasienergy_per_mm", "eigenphase_rad"};
    for (const auto& block : rows)
      for (const auto& row : block) d.rows.push_back(row);
    datasets.push_back(std::move(d));
  } else if (cfg.id == "fig3d") {
    spec.omega = omega_for_reduced(spec, 3.0);
    apply_overrides(cfg, spec, disorder);
    const StateVector psi0 = edge_injection(spec.sites);
    datasets.push_back(intensity_dataset(
        "fig3d_intensity", evolve_state(spec, psi0, cfg.plan, cfg.samples, disorder)));
    const int periods = int(std::floor(spec.length / spec.period() + 1e-9));
    datasets.push_back(intensity_dataset(
        "fig3d_stroboscopic", stroboscopic_trace(spec, psi0, cfg.plan, periods, disorder)));
  } else if (cfg.id == "fig3e" || cfg.id == "fig3f" || cfg.id == "fig3g") {
    spec.boundary = Boundary::bloch;
    const double wod = cfg.id == "fig3e" ? 1.0 / 3.0 : (cfg.id == "fig3f" ? 0.5 : 1.0);
    spec.omega = wod * spec.bandwidth();
    apply_overrides(cfg, spec, disorder);
    const ReplicaSpec rspec{5};
    std::vector<double> k_grid;
    const int nk = 201;
    for (int j = 0; j < nk; ++j) k_grid.push_back(-PI + 2.0 * PI * double(j) / double(nk - 1));
    const ReplicaBands bands = replica_bands(spec, rspec, k_grid);
    Dataset d;
    d.name = cfg.id + "_replica_bands";
    d.columns = {"k_rad", "band_index", "quasienergy_per_mm"};
    for (std::size_t i = 0; i < bands.k_grid.size(); ++i)
      for (std::size_t b = 0; b < bands.bands[i].size(); ++b)
        d.rows.push_back({bands.k_grid[i], double(b), bands.bands[i][b]});
    datasets.push_back(std::move(d));
  } else if (cfg.id == "fig5a" || cfg.id == "fig5b") {
    spec.omega = omega_for_reduced(spec, cfg.id == "fig5a" ? 3.0 : 4.0);
    apply_overrides(cfg, spec, disorder);
    double amplitude = 0.022;  // free parameter: the printed caption value is ambiguous
    std::uint64_t seed = cfg.base_seed;
    if (disorder) {
      amplitude = disorder->amplitude;
      seed = disorder->seed;
    }
    const int seed_count = 50;
    const EnsembleSummary summary =
        disorder_ensemble(spec, amplitude, seed_count, cfg.plan, seed);

    Dataset per_seed;
    per_seed.name = cfg.id + "_ensemble";
    per_seed.columns = {"seed", "boundary_fraction"};
    for (std::size_t i = 0; i < summary.seeds.size(); ++i)
      per_seed.rows.push_back({double(summary.seeds[i]), summary.boundary_fractions[i]});
    datasets.push_back(std::move(per_seed));

    Dataset stats;
    stats.name = cfg.id + "_summary";
    stats.columns = {"clean_fraction", "min", "q10", "median", "q90", "max",
                     "fraction_above_half"};
    stats.rows.push_back({summary.clean_fraction, summary.min, summary.q10, summary.median,
                          summary.q90, summary.max, summary.fraction_above_half});
    datasets.push_back(std::move(stats));

    datasets.push_back(intensity_dataset(
        cfg.id + "_intensity",
        evolve_state(spec, edge_injection(spec.sites), cfg.plan, cfg.samples,
                     DisorderSpec{amplitude, seed})));
    echo["disorder"] = {{"amplitude", amplitude}, {"seed", seed}, {"seeds", seed_count}};
  }

  echo["spec"] = spec_json(spec);

  OutputManifest manifest;
  manifest.tool_version = TOOL_VERSION;
  for (const Dataset& d : datasets) write_dataset(d, cfg.output_dir, cfg.format, manifest.files);
  manifest.spec_echo = echo.dump(2);

  nlohmann::json mj;
  mj["tool_version"] = manifest.tool_version;
  mj["spec_echo"] = echo;
  mj["files"] = nlohmann::json::array();
  for (const ManifestFile& f : manifest.files)
    mj["files"].push_back({{"path", std::filesystem::path(f.path).filename().string()},
                           {"kind", f.kind},
                           {"checksum", f.checksum}});
  const std::string mpath =
      (std::filesystem::path(cfg.output_dir) / (cfg.id + "_manifest.json")).string();
  std::ofstream mout(mpath, std::ios::binary);
  if (!mout) throw ScenarioError("cannot write " + mpath);
  mout << mj.dump(2) << "\n";
  return manifest;
}

}  // namespace fssh
