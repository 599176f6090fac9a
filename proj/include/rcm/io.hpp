#pragma once

#include <json.hpp>

#include <string>

#include "rcm/controlled_path.hpp"
#include "rcm/invariance.hpp"
#include "rcm/rough_path.hpp"

namespace rcm {

/// Reads a system description
///   {gamma, q, noise_dim, Ac, As, Fc: [{i,j,c}], Fs: [...], Gc: [[{i,j,c}], ...], Gs: [...],
///    override_assumptions?, name?}
/// Coefficients are JSON numbers (read exactly from their decimal text) or strings like "1/2".
SystemSpec parse_system(const nlohmann::json& j);
SystemSpec load_system(const std::string& path);

nlohmann::json to_json(const SystemSpec& sys);
nlohmann::json to_json(const CoefficientSystem& cs);

/// {gamma, t0, t1, n, d, W, WW, geometric}; WW holds one d × d matrix per cell.
nlohmann::json to_json(const RoughPath& rp);
RoughPath rough_path_from_json(const nlohmann::json& j);

/// Rough path fields plus {Y, Yp}.
nlohmann::json to_json(const ControlledPath& cp);

}  // namespace rcm
