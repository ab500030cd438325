#pragma once

#include <string>

#include "qbath/config.hpp"

namespace qbath {

/// Execute a run-type experiment (pure-decoherence / spin-boson / anneal):
/// one trajectory per sweep point, dispatched to a worker pool sized by the
/// QBATH_WORKERS environment variable (default: hardware concurrency).  Writes
/// one CSV per point plus <prefix>_summary.json into the output directory and
/// returns the summary JSON text.  CSV bytes depend only on the config and
/// seed, never on worker scheduling.
std::string run_experiment(const ExperimentConfig& cfg);

/// Execute an oracle-table config: one CSV of closed-form values on the
/// requested grid.  Returns the summary JSON text (also written next to the CSV).
std::string run_oracle_table(const ExperimentConfig& cfg);

/// Dry run for `validate`: expands the sweep, reports per-point basis
/// dimensions from the counting recurrence (nothing is enumerated), and throws
/// resource_error if any point would exceed the amplitude cap.  Returns the
/// report as JSON text; writes nothing.
std::string describe_config(const ExperimentConfig& cfg);

}  // namespace qbath
