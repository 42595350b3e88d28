#pragma once

#include "json.hpp"
#include "nphase/beamline.hpp"
#include "nphase/fitters.hpp"
#include "nphase/phases.hpp"

namespace nphase {

nlohmann::json config_json(const BeamConfig& config, Beam beam);
BeamConfig config_from_json(const nlohmann::json& j, Beam* beam = nullptr);

nlohmann::json fit_json(const SinusoidFit& fit);
nlohmann::json phase_result_json(const PhaseResult& r);

}  // namespace nphase
