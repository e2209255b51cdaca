#pragma once

// Run configuration: file parsing (key = value sections, with JSON as an
// accepted alternative), validation, deterministic seed derivation, and
// the canonical hash embedded in every output file.
//
// A config file is organized in blocks:
//
//   [grid]      n_x, L, bc
//   [physics]   nu
//   [ic.random] sigma_xi, j_max, seed          -- exactly one ic.* block
//   [ic.plane_wave] delta_m, m
//   [ic.file]   path
//   [pipeline]  taus, ns, m, rhos | rho_vecs, tau_unit, n_seeds
//   [readout]   mode, epsilon3, repetitions, seed
//   [ensemble]  n_en, base_seed
//   [output]    directory, formats
//
// The same keys nest as objects in the JSON form.  Values that affect
// results (everything except output.directory) feed the canonical hash,
// so a rerun with an identical effective configuration is detectable
// from the outputs alone.

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "qburgers/correlators.hpp"
#include "qburgers/fields.hpp"
#include "qburgers/qstate.hpp"

namespace qburgers {

enum class IcKind { Random, PlaneWave, File };

struct IcConfig {
    IcKind kind = IcKind::Random;
    RandomIC random;
    PlaneWaveIC plane_wave;
    std::string file_path;  ///< text file, one velocity value per row
};

/// How the `taus` list is to be read: Grid = nu*t/dx^2 (the propagator's
/// native unit), Domain = nu*t/L^2 (grid value / N_x^2).
enum class TauUnit { Grid, Domain };

struct PipelineConfig {
    std::vector<double> taus{0.0};
    std::vector<int> ns{2};
    int m = 0;                    ///< coarse qubits; 0 means m = n_x (no coarsening)
    std::vector<long long> rhos;  ///< scalars; each expands to (rho, 2rho, ..., (n-1)rho)
    std::vector<std::vector<long long>> rho_vecs;  ///< explicit offset vectors
    TauUnit tau_unit = TauUnit::Grid;
    int n_seeds = 1;  ///< flatness: independent initial-condition draws
};

struct EnsembleConfig {
    int n_en = 1;                 ///< superposed members; power of two
    std::uint64_t base_seed = 0;  ///< member seeds split off this
};

struct OutputConfig {
    std::string directory = ".";
    std::vector<std::string> formats{"csv"};  ///< subset of {csv, json}
};

struct RunConfig {
    GridSpec grid = GridSpec::make(7, 1.0);
    PhysicsParams physics;  ///< nu; tau field unused here (per-run lists instead)
    IcConfig ic;
    PipelineConfig pipeline;
    ReadoutNoise readout;
    EnsembleConfig ensemble;
    OutputConfig output;
    int max_qubits = kDefaultQubitCeiling;

    /// The offset vectors a command iterates for order n: explicit
    /// rho_vecs of matching length first, then scalar rhos expanded to
    /// arithmetic progressions.  Empty result means "just the zero
    /// offset" (callers still measure the denominator).
    std::vector<std::vector<long long>> sweep_for_order(int n) const;

    /// Coarse qubit count actually used: pipeline.m, or n_x when m = 0.
    int effective_m() const { return pipeline.m == 0 ? grid.n_x : pipeline.m; }

    /// taus converted to the propagator's grid unit.
    std::vector<double> taus_grid() const;
    /// taus converted to the domain unit nu*t/L^2.
    std::vector<double> taus_domain() const;
};

/// Parses and validates a config file; format is detected from content
/// (a leading '{' selects JSON).  Throws ConfigError with the offending
/// key or line on any violation.
RunConfig load_config(const std::string& path);

/// Builds a RunConfig from an already-parsed JSON tree (the INI reader
/// funnels through this too).
RunConfig config_from_json(const nlohmann::json& j);

/// Replaces every stored seed with a substream of `master` (ic.random
/// 1, readout 2, ensemble 3) so one flag reseeds the whole run
/// reproducibly.
void apply_seed_override(RunConfig& cfg, std::uint64_t master);

/// Canonical JSON image of everything that determines the outputs;
/// output.directory is deliberately excluded so identical experiments
/// hash identically wherever they land.
nlohmann::json effective_json(const RunConfig& cfg);

/// FNV-1a over the canonical JSON dump, rendered as 16 hex digits.
std::string config_hash(const RunConfig& cfg);

} // namespace qburgers
