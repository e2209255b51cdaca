#pragma once

// Experiment orchestration: each command consumes a validated RunConfig,
// runs one pipeline, and writes CSV/JSON files into output.directory.
// Every file starts with (CSV) or embeds (JSON) the canonical config
// hash, and all randomness flows from the configured seeds, so a rerun
// with the same effective config is byte-identical.

#include "qburgers/config.hpp"

namespace qburgers {

/// Heat-evolved Cole-Hopf snapshots: evolve.csv with columns tau, x, psi
/// (tau echoed in the configured unit).
void cmd_evolve(const RunConfig& cfg);

/// Full statevector pipeline (encode, propagate, coarse-grain, tensor
/// arrangement, correlator readout): one correlations_tau<k>.csv per tau
/// plus provenance.json.
void cmd_correlate(const RunConfig& cfg);

/// Flatness-vs-time curves from the exact and linear-readout inversions,
/// seed-median across pipeline.n_seeds draws: flatness.csv plus
/// summary.json.
void cmd_flatness(const RunConfig& cfg);

/// Query/gate cost tables and the quantum-vs-classical crossover scan,
/// with the norm amplification factor measured on the configured initial
/// condition: cost_table.csv, crossover.csv.
void cmd_resources(const RunConfig& cfg);

/// Superposed-ensemble pipeline over ensemble.n_en members with derived
/// member seeds: ensemble.csv, ensemble_check.csv (quantum vs per-member
/// mean), provenance.json.
void cmd_ensemble(const RunConfig& cfg);

} // namespace qburgers
