#include "iwf/scenario_io.hpp"

#include <fstream>

namespace iwf {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& context, const std::string& what) {
    throw ScenarioParseError(context + ": " + what);
}

double number_at(const json& j, const std::string& context, const std::string& where) {
    if (!j.is_number())
        fail(context, where + " must be a number");
    return j.get<double>();
}

int positive_int(const json& j, const std::string& context, const char* key) {
    if (!j.contains(key))
        fail(context, std::string("missing required key '") + key + "'");
    const json& v = j.at(key);
    if (!v.is_number_integer() || v.get<long long>() <= 0)
        fail(context, std::string("'") + key + "' must be a positive integer");
    return static_cast<int>(v.get<long long>());
}

void parse_gain(const json& j, const std::string& context, Scenario& s) {
    const json& g = j.at("gain");
    const int n = s.num_users;
    const int kc = s.num_channels;
    if (g.is_number()) {
        // Symmetric shorthand: unit direct gains, one common cross gain.
        const double cross = g.get<double>();
        for (int tx = 0; tx < n; ++tx)
            for (int rx = 0; rx < n; ++rx)
                for (int k = 0; k < kc; ++k)
                    s.gain_at(tx, rx, k) = tx == rx ? 1.0 : cross;
        return;
    }
    if (!g.is_array() || g.size() != static_cast<std::size_t>(n))
        fail(context, "'gain' must be a number or an [num_users][num_users][num_channels] array");
    for (int tx = 0; tx < n; ++tx) {
        const json& row = g[static_cast<std::size_t>(tx)];
        if (!row.is_array() || row.size() != static_cast<std::size_t>(n))
            fail(context, "'gain' rows must have num_users entries");
        for (int rx = 0; rx < n; ++rx) {
            const json& chans = row[static_cast<std::size_t>(rx)];
            if (!chans.is_array() || chans.size() != static_cast<std::size_t>(kc))
                fail(context, "'gain' innermost arrays must have num_channels entries");
            for (int k = 0; k < kc; ++k)
                s.gain_at(tx, rx, k) = number_at(chans[static_cast<std::size_t>(k)], context,
                                                 "'gain' entry");
        }
    }
}

void parse_noise(const json& j, const std::string& context, Scenario& s) {
    const json& nz = j.at("noise");
    if (nz.is_number()) {
        const double v = nz.get<double>();
        for (double& slot : s.noise)
            slot = v;
        return;
    }
    if (!nz.is_array() || nz.size() != static_cast<std::size_t>(s.num_users))
        fail(context, "'noise' must be a number or an [num_users][num_channels] array");
    for (int i = 0; i < s.num_users; ++i) {
        const json& row = nz[static_cast<std::size_t>(i)];
        if (!row.is_array() || row.size() != static_cast<std::size_t>(s.num_channels))
            fail(context, "'noise' rows must have num_channels entries");
        for (int k = 0; k < s.num_channels; ++k)
            s.noise_at(i, k) = number_at(row[static_cast<std::size_t>(k)], context,
                                         "'noise' entry");
    }
}

void parse_budget(const json& j, const std::string& context, Scenario& s) {
    const json& b = j.at("power_budget");
    if (b.is_number()) {
        const double v = b.get<double>();
        for (double& slot : s.power_budget)
            slot = v;
        return;
    }
    if (!b.is_array() || b.size() != static_cast<std::size_t>(s.num_users))
        fail(context, "'power_budget' must be a number or an array with num_users entries");
    for (int i = 0; i < s.num_users; ++i)
        s.power_budget[static_cast<std::size_t>(i)] =
            number_at(b[static_cast<std::size_t>(i)], context, "'power_budget' entry");
}

double mask_entry(const json& v, const std::string& context) {
    if (v.is_null())
        return unbounded_mask();
    if (!v.is_number())
        fail(context, "'mask' entries must be numbers or null");
    return v.get<double>();
}

void parse_mask(const json& j, const std::string& context, Scenario& s) {
    if (!j.contains("mask"))
        return; // construction default: unbounded
    const json& m = j.at("mask");
    if (m.is_null())
        return;
    if (m.is_number()) {
        const double v = m.get<double>();
        for (double& slot : s.mask)
            slot = v;
        return;
    }
    if (!m.is_array())
        fail(context, "'mask' must be a number, null, a [num_channels] array, or an "
                      "[num_users][num_channels] array");
    if (m.size() == static_cast<std::size_t>(s.num_channels) &&
        (m.empty() || !m[0].is_array())) {
        // One row shared by every user.
        for (int i = 0; i < s.num_users; ++i)
            for (int k = 0; k < s.num_channels; ++k)
                s.mask_at(i, k) = mask_entry(m[static_cast<std::size_t>(k)], context);
        return;
    }
    if (m.size() != static_cast<std::size_t>(s.num_users))
        fail(context, "'mask' array must have num_users rows or num_channels entries");
    for (int i = 0; i < s.num_users; ++i) {
        const json& row = m[static_cast<std::size_t>(i)];
        if (!row.is_array() || row.size() != static_cast<std::size_t>(s.num_channels))
            fail(context, "'mask' rows must have num_channels entries");
        for (int k = 0; k < s.num_channels; ++k)
            s.mask_at(i, k) = mask_entry(row[static_cast<std::size_t>(k)], context);
    }
}

} // namespace

Scenario scenario_from_json(const nlohmann::json& j, const std::string& context) {
    if (!j.is_object())
        fail(context, "top level must be a JSON object");
    const int n = positive_int(j, context, "num_users");
    const int kc = positive_int(j, context, "num_channels");
    for (const char* key : {"gain", "noise", "power_budget"})
        if (!j.contains(key))
            fail(context, std::string("missing required key '") + key + "'");

    Scenario s(n, kc);
    parse_gain(j, context, s);
    parse_noise(j, context, s);
    parse_budget(j, context, s);
    parse_mask(j, context, s);

    const auto violations = validate_scenario(s);
    if (!violations.empty()) {
        std::string what = "scenario fails validation:";
        for (const auto& v : violations)
            what += "\n  " + v;
        fail(context, what);
    }
    return s;
}

nlohmann::json scenario_to_json(const Scenario& s) {
    json j;
    j["num_users"] = s.num_users;
    j["num_channels"] = s.num_channels;

    json gain = json::array();
    for (int tx = 0; tx < s.num_users; ++tx) {
        json row = json::array();
        for (int rx = 0; rx < s.num_users; ++rx) {
            json chans = json::array();
            for (int k = 0; k < s.num_channels; ++k)
                chans.push_back(s.gain_at(tx, rx, k));
            row.push_back(std::move(chans));
        }
        gain.push_back(std::move(row));
    }
    j["gain"] = std::move(gain);

    json noise = json::array();
    for (int i = 0; i < s.num_users; ++i) {
        json row = json::array();
        for (int k = 0; k < s.num_channels; ++k)
            row.push_back(s.noise_at(i, k));
        noise.push_back(std::move(row));
    }
    j["noise"] = std::move(noise);

    j["power_budget"] = s.power_budget;

    bool any_bounded = false;
    for (double m : s.mask)
        if (std::isfinite(m))
            any_bounded = true;
    if (any_bounded) {
        json mask = json::array();
        for (int i = 0; i < s.num_users; ++i) {
            json row = json::array();
            for (int k = 0; k < s.num_channels; ++k) {
                const double m = s.mask_at(i, k);
                if (std::isfinite(m))
                    row.push_back(m);
                else
                    row.push_back(nullptr);
            }
            mask.push_back(std::move(row));
        }
        j["mask"] = std::move(mask);
    }
    return j;
}

Scenario load_scenario(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in)
        throw ScenarioParseError(file.string() + ": cannot open file");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ScenarioParseError(file.string() + ": " + e.what());
    }
    return scenario_from_json(j, file.string());
}

void save_scenario(const Scenario& s, const std::filesystem::path& file) {
    std::ofstream out(file);
    if (!out)
        throw ScenarioParseError(file.string() + ": cannot open file for writing");
    out << scenario_to_json(s).dump(2) << '\n';
}

PowerProfile profile_from_json(const nlohmann::json& j, int num_users, int num_channels,
                               const std::string& context) {
    if (!j.is_array() || j.size() != static_cast<std::size_t>(num_users))
        fail(context, "profile must be an [num_users][num_channels] array");
    PowerProfile p(num_users, num_channels);
    for (int i = 0; i < num_users; ++i) {
        const json& row = j[static_cast<std::size_t>(i)];
        if (!row.is_array() || row.size() != static_cast<std::size_t>(num_channels))
            fail(context, "profile rows must have num_channels entries");
        for (int k = 0; k < num_channels; ++k)
            p.at(i, k) = number_at(row[static_cast<std::size_t>(k)], context, "profile entry");
    }
    return p;
}

PowerProfile load_profile(const std::filesystem::path& file, int num_users, int num_channels) {
    std::ifstream in(file);
    if (!in)
        throw ScenarioParseError(file.string() + ": cannot open file");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ScenarioParseError(file.string() + ": " + e.what());
    }
    return profile_from_json(j, num_users, num_channels, file.string());
}

} // namespace iwf
