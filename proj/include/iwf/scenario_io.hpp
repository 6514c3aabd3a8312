#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "iwf/core_model.hpp"

namespace iwf {

/// Raised for unreadable files, malformed JSON, shape mismatches, and
/// scenarios that fail validation. The message always carries the file
/// path (or caller-supplied context) and what went wrong.
struct ScenarioParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Build a scenario from its JSON object form.
///
/// Required: num_users, num_channels, gain, noise, power_budget.
/// Optional: mask (absent = unbounded everywhere).
/// Scalars broadcast: a scalar gain g means direct gains 1 and all cross
/// gains g; scalar noise and power_budget fill every slot; a scalar mask
/// caps every entry; a mask entry of null is unbounded. Full forms:
/// gain[j][i][k] (transmitter j, receiver i), noise[i][k],
/// power_budget[i], mask as [i][k] or a per-channel [k] shared by all
/// users. The result is validated; any violation is reported.
Scenario scenario_from_json(const nlohmann::json& j, const std::string& context);

/// Full-form JSON for the scenario; unbounded mask entries become null,
/// and the mask key is dropped when every entry is unbounded.
nlohmann::json scenario_to_json(const Scenario& s);

Scenario load_scenario(const std::filesystem::path& file);
void save_scenario(const Scenario& s, const std::filesystem::path& file);

/// Power profile from JSON: a full [i][k] matrix (values checked against
/// the expected shape).
PowerProfile profile_from_json(const nlohmann::json& j, int num_users, int num_channels,
                               const std::string& context);
PowerProfile load_profile(const std::filesystem::path& file, int num_users, int num_channels);

} // namespace iwf
