#include "iwf/core_model.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace iwf {

namespace {

void check_user(int n, int i) {
    if (i < 0 || i >= n)
        throw std::out_of_range("user index " + std::to_string(i) + " out of range [0, " +
                                std::to_string(n) + ")");
}

void check_channel(int k_count, int k) {
    if (k < 0 || k >= k_count)
        throw std::out_of_range("channel index " + std::to_string(k) + " out of range [0, " +
                                std::to_string(k_count) + ")");
}

std::string idx3(int j, int i, int k) {
    return "[" + std::to_string(j) + "][" + std::to_string(i) + "][" + std::to_string(k) + "]";
}

std::string idx2(int i, int k) {
    return "[" + std::to_string(i) + "][" + std::to_string(k) + "]";
}

} // namespace

double unbounded_mask() { return std::numeric_limits<double>::infinity(); }

Scenario::Scenario(int users, int channels) : num_users(users), num_channels(channels) {
    if (users <= 0 || channels <= 0)
        throw std::invalid_argument("scenario needs at least one user and one channel");
    const auto n = static_cast<std::size_t>(users);
    const auto k = static_cast<std::size_t>(channels);
    gain.assign(n * n * k, 0.0);
    noise.assign(n * k, 0.0);
    power_budget.assign(n, 0.0);
    mask.assign(n * k, unbounded_mask());
}

double Scenario::gain_at(int j, int i, int k) const {
    check_user(num_users, j);
    check_user(num_users, i);
    check_channel(num_channels, k);
    return gain[(static_cast<std::size_t>(j) * num_users + i) * num_channels + k];
}

double& Scenario::gain_at(int j, int i, int k) {
    check_user(num_users, j);
    check_user(num_users, i);
    check_channel(num_channels, k);
    return gain[(static_cast<std::size_t>(j) * num_users + i) * num_channels + k];
}

double Scenario::noise_at(int i, int k) const {
    check_user(num_users, i);
    check_channel(num_channels, k);
    return noise[static_cast<std::size_t>(i) * num_channels + k];
}

double& Scenario::noise_at(int i, int k) {
    check_user(num_users, i);
    check_channel(num_channels, k);
    return noise[static_cast<std::size_t>(i) * num_channels + k];
}

double Scenario::mask_at(int i, int k) const {
    check_user(num_users, i);
    check_channel(num_channels, k);
    return mask[static_cast<std::size_t>(i) * num_channels + k];
}

double& Scenario::mask_at(int i, int k) {
    check_user(num_users, i);
    check_channel(num_channels, k);
    return mask[static_cast<std::size_t>(i) * num_channels + k];
}

std::span<const double> Scenario::mask_row(int i) const {
    check_user(num_users, i);
    return {mask.data() + static_cast<std::size_t>(i) * num_channels,
            static_cast<std::size_t>(num_channels)};
}

std::span<const double> Scenario::noise_row(int i) const {
    check_user(num_users, i);
    return {noise.data() + static_cast<std::size_t>(i) * num_channels,
            static_cast<std::size_t>(num_channels)};
}

PowerProfile::PowerProfile(int users, int channels) : num_users(users), num_channels(channels) {
    if (users <= 0 || channels <= 0)
        throw std::invalid_argument("profile needs at least one user and one channel");
    p.assign(static_cast<std::size_t>(users) * channels, 0.0);
}

double PowerProfile::at(int i, int k) const {
    check_user(num_users, i);
    check_channel(num_channels, k);
    return p[static_cast<std::size_t>(i) * num_channels + k];
}

double& PowerProfile::at(int i, int k) {
    check_user(num_users, i);
    check_channel(num_channels, k);
    return p[static_cast<std::size_t>(i) * num_channels + k];
}

std::span<const double> PowerProfile::row(int i) const {
    check_user(num_users, i);
    return {p.data() + static_cast<std::size_t>(i) * num_channels,
            static_cast<std::size_t>(num_channels)};
}

std::span<double> PowerProfile::row(int i) {
    check_user(num_users, i);
    return {p.data() + static_cast<std::size_t>(i) * num_channels,
            static_cast<std::size_t>(num_channels)};
}

double NormalizedView::xgain_at(int j, int i, int k) const {
    check_user(num_users, j);
    check_user(num_users, i);
    check_channel(num_channels, k);
    return xgain[(static_cast<std::size_t>(j) * num_users + i) * num_channels + k];
}

double NormalizedView::nnoise_at(int i, int k) const {
    check_user(num_users, i);
    check_channel(num_channels, k);
    return nnoise[static_cast<std::size_t>(i) * num_channels + k];
}

std::span<const double> NormalizedView::nnoise_row(int i) const {
    check_user(num_users, i);
    return {nnoise.data() + static_cast<std::size_t>(i) * num_channels,
            static_cast<std::size_t>(num_channels)};
}

std::vector<std::string> validate_scenario(const Scenario& s) {
    std::vector<std::string> out;
    const int n = s.num_users;
    const int kc = s.num_channels;
    if (n <= 0 || kc <= 0) {
        out.push_back("scenario must have positive user and channel counts");
        return out;
    }
    const auto expect = [&](std::size_t got, std::size_t want, const char* what) {
        if (got != want)
            out.push_back(std::string(what) + " has " + std::to_string(got) + " entries, expected " +
                          std::to_string(want));
    };
    const auto nk = static_cast<std::size_t>(n) * kc;
    expect(s.gain.size(), static_cast<std::size_t>(n) * nk, "gain");
    expect(s.noise.size(), nk, "noise");
    expect(s.power_budget.size(), static_cast<std::size_t>(n), "power_budget");
    expect(s.mask.size(), nk, "mask");
    if (!out.empty())
        return out;

    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < kc; ++k) {
                const double g = s.gain_at(j, i, k);
                if (!std::isfinite(g))
                    out.push_back("gain" + idx3(j, i, k) + ": must be finite");
                else if (j == i && g <= 0.0)
                    out.push_back("gain" + idx3(j, i, k) + ": direct gain must be positive (got " +
                                  std::to_string(g) + ")");
                else if (j != i && g < 0.0)
                    out.push_back("gain" + idx3(j, i, k) + ": cross gain must be nonnegative (got " +
                                  std::to_string(g) + ")");
            }
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < kc; ++k) {
            const double nz = s.noise_at(i, k);
            if (!(nz > 0.0) || !std::isfinite(nz))
                out.push_back("noise" + idx2(i, k) + ": must be positive and finite (got " +
                              std::to_string(nz) + ")");
            const double m = s.mask_at(i, k);
            if (std::isnan(m) || m < 0.0)
                out.push_back("mask" + idx2(i, k) + ": must be nonnegative (got " +
                              std::to_string(m) + ")");
        }
    for (int i = 0; i < n; ++i) {
        const double b = s.power_budget[static_cast<std::size_t>(i)];
        if (!std::isfinite(b) || b < 0.0)
            out.push_back("power_budget[" + std::to_string(i) +
                          "]: must be nonnegative and finite (got " + std::to_string(b) + ")");
        if (b > 0.0) {
            double msum = 0.0;
            bool mask_ok = true;
            for (int k = 0; k < kc; ++k) {
                const double m = s.mask_at(i, k);
                if (std::isnan(m) || m < 0.0)
                    mask_ok = false;
                else
                    msum += m; // infinity propagates as intended
            }
            if (mask_ok && !(msum > 0.0))
                out.push_back("mask[" + std::to_string(i) +
                              "]: all entries zero but power_budget is positive");
        }
    }
    return out;
}

NormalizedView normalize(const Scenario& s) {
    auto violations = validate_scenario(s);
    if (!violations.empty())
        throw std::invalid_argument("cannot normalize invalid scenario: " + violations.front());

    NormalizedView v;
    v.num_users = s.num_users;
    v.num_channels = s.num_channels;
    v.xgain.resize(s.gain.size());
    v.nnoise.resize(s.noise.size());
    const int n = s.num_users;
    const int kc = s.num_channels;
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < kc; ++k) {
            const double direct = s.gain_at(i, i, k);
            v.nnoise[static_cast<std::size_t>(i) * kc + k] = s.noise_at(i, k) / direct;
            for (int j = 0; j < n; ++j)
                v.xgain[(static_cast<std::size_t>(j) * n + i) * kc + k] =
                    s.gain_at(j, i, k) / direct;
        }
    return v;
}

double sinr(const Scenario& s, const PowerProfile& p, int i, int k) {
    check_user(s.num_users, i);
    check_channel(s.num_channels, k);
    if (p.num_users != s.num_users || p.num_channels != s.num_channels)
        throw std::invalid_argument("profile shape does not match scenario");
    double denom = s.noise_at(i, k);
    for (int j = 0; j < s.num_users; ++j)
        if (j != i)
            denom += s.gain_at(j, i, k) * p.at(j, k);
    return s.gain_at(i, i, k) * p.at(i, k) / denom;
}

double rate(const Scenario& s, const PowerProfile& p, int i) {
    double sum = 0.0;
    for (int k = 0; k < s.num_channels; ++k)
        sum += std::log1p(sinr(s, p, i, k));
    return sum;
}

double sup_distance(const PowerProfile& a, const PowerProfile& b) {
    if (a.num_users != b.num_users || a.num_channels != b.num_channels)
        throw std::invalid_argument("profile shapes differ");
    double m = 0.0;
    for (std::size_t idx = 0; idx < a.p.size(); ++idx)
        m = std::max(m, std::abs(a.p[idx] - b.p[idx]));
    return m;
}

bool is_feasible(const Scenario& s, const PowerProfile& p) {
    if (p.num_users != s.num_users || p.num_channels != s.num_channels)
        return false;
    for (int i = 0; i < s.num_users; ++i) {
        double sum = 0.0;
        for (int k = 0; k < s.num_channels; ++k) {
            const double v = p.at(i, k);
            if (v < -kFeasibilityTol || v > s.mask_at(i, k) + kFeasibilityTol)
                return false;
            sum += v;
        }
        if (sum > s.power_budget[static_cast<std::size_t>(i)] + kFeasibilityTol)
            return false;
    }
    return true;
}

} // namespace iwf
