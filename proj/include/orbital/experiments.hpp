#pragma once
#include "orbital/config.hpp"
#include "orbital/estimators.hpp"
#include "orbital/results.hpp"

namespace orbital {

// Builds the model described by the config ("model.family" selects among the
// orbital, deformed block-Gaussian and band families where applicable).
ModelSpec model_from_config(const ExperimentConfig& cfg);

// Runs the configured experiment and packages its outputs.  Pure function of
// the config (including the seed): reruns produce identical records.
ResultRecord run_experiment(const ExperimentConfig& cfg);

// Fast invariant suite used by the `selftest` subcommand; returns the number
// of failed checks and prints one line per check.
int run_selftest();

}  // namespace orbital
