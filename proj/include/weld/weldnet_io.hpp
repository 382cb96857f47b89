#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "weld/weldnet.hpp"

namespace weld {

nlohmann::json train_config_to_json(const TrainConfig& cfg);
TrainConfig train_config_from_json(const nlohmann::json& j);

// A model persists as a directory: manifest.json (layout, dims, Δt, resolved
// config, seeds, loss traces, checkpoint names) plus one checkpoint file per
// network in the shared container format.
void save_weld_model(const std::string& dir, const WeldModel& model);
WeldModel load_weld_model(const std::string& dir);

}  // namespace weld
