#pragma once

#include <span>
#include <string>
#include <vector>

namespace iwf {

/// Tolerance for feasibility checks (mask and budget comparisons).
inline constexpr double kFeasibilityTol = 1e-9;

/// Sentinel for an unbounded spectral mask entry.
double unbounded_mask();

/// Static description of one interference game: N transmit/receive pairs
/// sharing K parallel channels. Gains are power gains (magnitude squared),
/// indexed [transmitter][receiver][channel].
struct Scenario {
    int num_users = 0;
    int num_channels = 0;
    std::vector<double> gain;         // [(j*N + i)*K + k], j = tx, i = rx
    std::vector<double> noise;        // [i*K + k], > 0
    std::vector<double> power_budget; // [i], >= 0
    std::vector<double> mask;         // [i*K + k], >= 0, infinity = unbounded

    Scenario() = default;
    Scenario(int users, int channels);

    double gain_at(int j, int i, int k) const;
    double& gain_at(int j, int i, int k);
    double noise_at(int i, int k) const;
    double& noise_at(int i, int k);
    double mask_at(int i, int k) const;
    double& mask_at(int i, int k);
    std::span<const double> mask_row(int i) const;
    std::span<const double> noise_row(int i) const;
};

/// A full power allocation, one row per user, one column per channel.
struct PowerProfile {
    int num_users = 0;
    int num_channels = 0;
    std::vector<double> p; // [i*K + k]

    PowerProfile() = default;
    PowerProfile(int users, int channels);

    double at(int i, int k) const;
    double& at(int i, int k);
    std::span<const double> row(int i) const;
    std::span<double> row(int i);
};

/// Scenario rewritten with unit direct gains: cross gains and noise are
/// divided by the receiver's direct gain per channel. SINR is invariant
/// under this rescaling, which is what the best-response solver consumes.
struct NormalizedView {
    int num_users = 0;
    int num_channels = 0;
    std::vector<double> xgain;  // [(j*N + i)*K + k], xgain[i][i][k] == 1
    std::vector<double> nnoise; // [i*K + k]

    double xgain_at(int j, int i, int k) const;
    double nnoise_at(int i, int k) const;
    std::span<const double> nnoise_row(int i) const;
};

/// Collects every constraint violation in the scenario data: nonpositive
/// direct gains, nonpositive or nonfinite noise, negative cross gains,
/// negative budgets or masks, and users whose whole mask is zero while
/// their budget is positive. Empty result means the scenario is usable.
std::vector<std::string> validate_scenario(const Scenario& s);

/// Throws std::invalid_argument if the scenario does not validate.
NormalizedView normalize(const Scenario& s);

/// SINR of user i on channel k under profile p, computed on raw gains.
double sinr(const Scenario& s, const PowerProfile& p, int i, int k);

/// Achievable rate of user i in nats: sum over channels of log(1 + SINR).
double rate(const Scenario& s, const PowerProfile& p, int i);

/// Max over users and channels of |a - b|.
double sup_distance(const PowerProfile& a, const PowerProfile& b);

/// True when p respects masks and budgets up to kFeasibilityTol.
bool is_feasible(const Scenario& s, const PowerProfile& p);

} // namespace iwf
