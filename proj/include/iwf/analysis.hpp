#pragma once

#include <optional>
#include <string>
#include <vector>

#include "iwf/core_model.hpp"
#include "iwf/engine.hpp"

namespace iwf {

/// Dense row-major matrix, just big enough for the desk-scale linear
/// algebra this library needs.
struct Mat {
    int rows = 0;
    int cols = 0;
    std::vector<double> a;

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0.0) {}

    double at(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }
    double& at(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
};

/// Worst-case interference coupling between users: entry (i, j), j != i,
/// is the largest over channels of user j's max-power interference at
/// receiver i relative to i's worst-case noise-plus-interference floor.
/// The diagonal is zero.
struct InterferenceMatrix {
    Mat m;
};

InterferenceMatrix build_hmax(const Scenario& s);

/// Spectral radius of a square nonnegative matrix via power iteration on
/// the aperiodic shift I + M / s (s = largest row sum), so periodic
/// couplings converge too. Deterministic start, eigenvalue tolerance
/// 1e-10.
double spectral_radius(const Mat& m);

/// Per-user row check: row i of the coupling matrix sums below one.
std::vector<bool> diagonal_dominance(const InterferenceMatrix& h);

struct JacobianResult {
    bool smooth = false;      // false when p sits on a clipping boundary
    std::string note;         // why the point was rejected, when !smooth
    Mat jacobian;             // (N*K) x (N*K), row = response coordinate
    double abs_spectral_radius = 0.0; // rho(|J|)
};

/// Central-difference Jacobian of the simultaneous best-response map at
/// profile p with step h. Coordinates are flattened user-major: index
/// i*K + k. Points within 10*h of a power bound or of a water-filling
/// clip corner are reported as non-smooth instead of differentiated.
JacobianResult numerical_jacobian(const Scenario& s, const PowerProfile& p, double h);

/// Largest late-stage ratio of consecutive sup-norm deltas: max over the
/// second half of the run of delta[t+1] / delta[t], skipping ratios whose
/// denominator is below 100 times the run's stop tolerance. Returns 0
/// when no ratio survives the filter.
double empirical_beta(const RunTrace& trace);

struct AnalysisReport {
    InterferenceMatrix hmax;
    double hmax_spectral_radius = 0.0;
    bool contraction_certified = false; // rho(hmax) < 1
    std::vector<bool> row_dominance;
    std::optional<double> measured_beta;    // from a reference run, if requested
    std::optional<double> jacobian_radius;  // rho(|J|) at the fixed point, if computed
};

/// Static analysis of a scenario: coupling matrix, spectral radius,
/// certification flag, and per-row dominance.
AnalysisReport analyze(const Scenario& s);

} // namespace iwf
