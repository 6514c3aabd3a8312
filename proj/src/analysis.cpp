#include "iwf/analysis.hpp"

#include <cmath>
#include <stdexcept>

#include "iwf/waterfill.hpp"

namespace iwf {

namespace {

std::string coord(int i, int k) {
    return "user " + std::to_string(i) + " channel " + std::to_string(k);
}

/// Plain simultaneous best-response map (no relaxation), with the same
/// per-row projection the engine applies.
PowerProfile plain_map(const Scenario& s, const NormalizedView& view, const PowerProfile& p) {
    ScheduleSpec spec;
    spec.kind = ScheduleKind::simultaneous;
    spec.alpha = 1.0;
    return step_simultaneous(s, view, p, spec);
}

} // namespace

InterferenceMatrix build_hmax(const Scenario& s) {
    auto violations = validate_scenario(s);
    if (!violations.empty())
        throw std::invalid_argument("cannot analyze invalid scenario: " + violations.front());
    const int n = s.num_users;
    InterferenceMatrix h;
    h.m = Mat(n, n);
    for (int k = 0; k < s.num_channels; ++k) {
        for (int i = 0; i < n; ++i) {
            double denom = s.noise_at(i, k);
            for (int m = 0; m < n; ++m)
                if (m != i)
                    denom += s.gain_at(m, i, k) * s.power_budget[static_cast<std::size_t>(m)];
            for (int j = 0; j < n; ++j) {
                if (j == i)
                    continue;
                const double num =
                    s.gain_at(j, i, k) * s.power_budget[static_cast<std::size_t>(j)];
                h.m.at(i, j) = std::max(h.m.at(i, j), num / denom);
            }
        }
    }
    return h;
}

double spectral_radius(const Mat& m) {
    if (m.rows != m.cols)
        throw std::invalid_argument("spectral_radius needs a square matrix");
    const int n = m.rows;
    if (n == 0)
        return 0.0;
    for (double v : m.a)
        if (std::isnan(v) || v < 0.0)
            throw std::invalid_argument("spectral_radius expects nonnegative entries");

    double s = 0.0;
    for (int r = 0; r < n; ++r) {
        double row = 0.0;
        for (int c = 0; c < n; ++c)
            row += m.at(r, c);
        s = std::max(s, row);
    }
    if (s == 0.0)
        return 0.0;

    // Power iteration on T = I + M/s. T is nonnegative with positive
    // diagonal, hence aperiodic, and rho(M) = s * (rho(T) - 1).
    std::vector<double> x(static_cast<std::size_t>(n), 1.0 / std::sqrt(double(n)));
    std::vector<double> y(static_cast<std::size_t>(n), 0.0);
    double est = 1.0;
    for (int it = 0; it < 100000; ++it) {
        for (int r = 0; r < n; ++r) {
            double acc = 0.0;
            for (int c = 0; c < n; ++c)
                acc += m.at(r, c) * x[static_cast<std::size_t>(c)];
            y[static_cast<std::size_t>(r)] = x[static_cast<std::size_t>(r)] + acc / s;
        }
        double norm = 0.0;
        for (double v : y)
            norm += v * v;
        norm = std::sqrt(norm);
        const double next = norm; // ||x|| == 1, so this is the growth ratio
        // Stop on the eigen-residual ||Tx - est*x||: successive growth
        // estimates can momentarily agree while complex subdominant modes
        // still oscillate, but the residual only vanishes at an eigenpair.
        double resid = 0.0;
        for (std::size_t r = 0; r < y.size(); ++r) {
            const double d = y[r] - next * x[r];
            resid += d * d;
        }
        for (std::size_t r = 0; r < y.size(); ++r)
            x[r] = y[r] / norm;
        est = next;
        if (std::sqrt(resid) <= 1e-10 * next)
            break;
    }
    return s * std::max(0.0, est - 1.0);
}

std::vector<bool> diagonal_dominance(const InterferenceMatrix& h) {
    const int n = h.m.rows;
    std::vector<bool> out(static_cast<std::size_t>(n), false);
    for (int i = 0; i < n; ++i) {
        double row = 0.0;
        for (int j = 0; j < n; ++j)
            if (j != i)
                row += h.m.at(i, j);
        out[static_cast<std::size_t>(i)] = row < 1.0;
    }
    return out;
}

JacobianResult numerical_jacobian(const Scenario& s, const PowerProfile& p, double h) {
    if (!(h > 0.0) || !std::isfinite(h))
        throw std::invalid_argument("step h must be positive and finite");
    const NormalizedView view = normalize(s);
    if (p.num_users != s.num_users || p.num_channels != s.num_channels)
        throw std::invalid_argument("profile shape does not match scenario");
    const int n = s.num_users;
    const int kc = s.num_channels;
    const double guard = 10.0 * h;

    JacobianResult res;

    // The map is differentiable only where no clamp is within reach of the
    // finite-difference stencil: check the input against its box bounds and
    // the best-response output against its clip corners.
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < kc; ++k) {
            const double v = p.at(i, k);
            if (v < guard) {
                res.note = "input power at " + coord(i, k) + " is within 10h of zero";
                return res;
            }
            const double m = s.mask_at(i, k);
            if (std::isfinite(m) && m - v < guard) {
                res.note = "input power at " + coord(i, k) + " is within 10h of its mask";
                return res;
            }
        }
    for (int i = 0; i < n; ++i) {
        const Floor floor = compose_floor(view, p, i);
        const WaterfillResult wf =
            best_response(floor, s.power_budget[static_cast<std::size_t>(i)], s.mask_row(i));
        for (int k = 0; k < kc; ++k) {
            const double pre = wf.water_level - floor.level[static_cast<std::size_t>(k)];
            if (std::abs(pre) < guard) {
                res.note = "best response clips at zero on " + coord(i, k);
                return res;
            }
            const double m = s.mask_at(i, k);
            if (std::isfinite(m) && std::abs(m - pre) < guard) {
                res.note = "best response clips at the mask on " + coord(i, k);
                return res;
            }
        }
    }

    const int dim = n * kc;
    res.jacobian = Mat(dim, dim);
    for (int j = 0; j < n; ++j)
        for (int l = 0; l < kc; ++l) {
            PowerProfile plus = p;
            PowerProfile minus = p;
            plus.at(j, l) += h;
            minus.at(j, l) -= h;
            const PowerProfile fplus = plain_map(s, view, project_to_feasible(s, plus));
            const PowerProfile fminus = plain_map(s, view, project_to_feasible(s, minus));
            const int col = j * kc + l;
            for (int i = 0; i < n; ++i)
                for (int k = 0; k < kc; ++k)
                    res.jacobian.at(i * kc + k, col) =
                        (fplus.at(i, k) - fminus.at(i, k)) / (2.0 * h);
        }

    Mat absj(dim, dim);
    for (std::size_t idx = 0; idx < absj.a.size(); ++idx)
        absj.a[idx] = std::abs(res.jacobian.a[idx]);
    res.abs_spectral_radius = spectral_radius(absj);
    res.smooth = true;
    return res;
}

double empirical_beta(const RunTrace& trace) {
    const std::size_t nd = trace.sup_deltas.size();
    if (trace.iterates.size() < 3 || nd < 2)
        throw std::invalid_argument("empirical_beta needs at least three iterates");
    if (!(trace.stop_tol > 0.0))
        throw std::invalid_argument("trace carries no stop tolerance");
    const double floor_cut = 1e2 * trace.stop_tol;
    const std::size_t start = nd / 2; // ratios from the second half of the run
    double beta = 0.0;
    bool any = false;
    for (std::size_t t = start; t + 1 < nd; ++t) {
        if (trace.sup_deltas[t] < floor_cut)
            continue;
        beta = std::max(beta, trace.sup_deltas[t + 1] / trace.sup_deltas[t]);
        any = true;
    }
    return any ? beta : 0.0;
}

AnalysisReport analyze(const Scenario& s) {
    AnalysisReport rep;
    rep.hmax = build_hmax(s);
    rep.hmax_spectral_radius = spectral_radius(rep.hmax.m);
    rep.contraction_certified = rep.hmax_spectral_radius < 1.0;
    rep.row_dominance = diagonal_dominance(rep.hmax);
    return rep;
}

} // namespace iwf
