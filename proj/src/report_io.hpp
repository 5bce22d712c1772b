// Copyright 2026 The beamctl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Deterministic JSON / CSV renderings of every report type. Extended
// precision values are written as full-precision decimal strings, doubles in
// shortest round-trip form; field order is fixed.

#include <string>

#include "condensation.hpp"
#include "verification.hpp"

namespace beamctl {

std::string format_double(double x);

std::string config_json(const BeamConfig& config);

std::string spectrum_csv(const BeamConfig& config);
std::string spectrum_json(const BeamConfig& config);

std::string moment_system_json(const MomentSystem& system);

std::string synthesis_json(const SynthesisReport& report, const BeamConfig& config);
/// t, f, f', f'' at samples+1 equally spaced times in [0, T].
std::string control_csv(const ControlSignal& control, int samples);

/// Single line, suitable for JSON-lines batches.
std::string experiment_json(const ExperimentResult& result);

std::string sweep_csv(const CostSweep& sweep);
std::string sweep_json(const CostSweep& sweep, const BeamConfig& config);

std::string condensation_csv(const CondensationReport& report);
std::string condensation_json(const CondensationReport& report);

std::string trajectory_csv(const Trajectory& traj);

std::string crosscheck_json(const CrosscheckReport& report, const BeamConfig& config);

}  // namespace beamctl
