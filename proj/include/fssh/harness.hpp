#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fssh/evolution.hpp"
#include "fssh/floquet.hpp"
#include "fssh/lattice.hpp"

namespace fssh {

enum class OutputFormat { csv, json };

/// A tabular dataset ready for serialization.
struct Dataset {
  std::string name;  // file stem
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// One scenario run: a figure id, optional config-file overrides (only keys
/// present in the file are applied on top of the scenario defaults), and the
/// output location.
struct ScenarioConfig {
  std::string id;
  std::optional<ParsedSpec> overrides;
  std::string output_dir = ".";
  PropagatorPlan plan;
  OutputFormat format = OutputFormat::csv;
  std::uint64_t base_seed = 1;
  int samples = 2048;
  int k_points = 513;
};

struct ManifestFile {
  std::string path;
  std::string kind;  // "csv" or "json"
  std::string checksum;
};

struct OutputManifest {
  std::vector<ManifestFile> files;
  std::string spec_echo;  // JSON document reproducing the run
  std::string tool_version;
};

inline constexpr const char* TOOL_VERSION = "fssh 0.1.0";

/// The known scenario ids (fig2a..fig5b).
const std::vector<std::string>& scenario_ids();

/// Run one scenario deterministically and write its datasets plus a JSON
/// manifest into output_dir. Throws ScenarioError for an unknown id.
OutputManifest run_scenario(const ScenarioConfig& cfg);

/// One row of the invariant sweep; undefined rows mark closed-gap points.
struct InvariantSweepRow {
  double omega_over_delta = 0.0;
  double raw_winding = 0.0;
  int g_pi = 0;
  bool defined = false;
};

/// Sweep the pi-gap invariant over drive frequencies (in units of the static
/// bandwidth). Closed-gap points come back as undefined rows; unwrapping
/// resolution problems retry once with a doubled grid before propagating.
std::vector<InvariantSweepRow> sweep_invariant(const std::vector<double>& omega_over_delta,
                                               int k_points, const PropagatorPlan& plan);

/// Disorder ensemble: per-seed boundary fraction at z = L plus summary
/// quantiles. Seeds are base_seed + i for i in [0, seeds).
struct EnsembleSummary {
  std::vector<std::uint64_t> seeds;
  std::vector<double> boundary_fractions;  // per seed, same order
  double clean_fraction = 0.0;             // no-disorder reference
  double min = 0.0, q10 = 0.0, median = 0.0, q90 = 0.0, max = 0.0;
  double fraction_above_half = 0.0;  // share of seeds with fraction >= 0.5
};

EnsembleSummary disorder_ensemble(const LatticeSpec& spec, double amplitude, int seeds,
                                  const PropagatorPlan& plan, std::uint64_t base_seed);

/// Intensity on the two boundary sites after propagating e1 across [0, L].
double boundary_fraction(const LatticeSpec& spec, const PropagatorPlan& plan,
                         const std::optional<DisorderSpec>& disorder = std::nullopt);

// --- serialization helpers (deterministic, byte-stable) ---

std::string format_double(double v);  // shortest round-trip-exact decimal
void write_dataset(const Dataset& data, const std::string& dir, OutputFormat format,
                   std::vector<ManifestFile>& files);
std::string fnv1a_file_checksum(const std::string& path);

}  // namespace fssh
