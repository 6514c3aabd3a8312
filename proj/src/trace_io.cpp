#include "iwf/trace_io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace iwf {

std::string format_g12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void write_trace_csv(const RunTrace& trace, std::ostream& out) {
    out << "iter,user,channel,power,sup_delta,rate_user\n";
    for (std::size_t t = 0; t < trace.iterates.size(); ++t) {
        const PowerProfile& p = trace.iterates[t];
        const double delta = t == 0 ? 0.0 : trace.sup_deltas[t - 1];
        for (int i = 0; i < p.num_users; ++i)
            for (int k = 0; k < p.num_channels; ++k)
                out << t << ',' << i << ',' << k << ',' << format_g12(p.at(i, k)) << ','
                    << format_g12(delta) << ','
                    << format_g12(trace.per_user_rates[t][static_cast<std::size_t>(i)]) << '\n';
    }
}

void write_trace_csv(const RunTrace& trace, const std::filesystem::path& file) {
    std::ofstream out(file);
    if (!out)
        throw std::runtime_error(file.string() + ": cannot open file for writing");
    write_trace_csv(trace, out);
}

nlohmann::json analysis_report_to_json(const AnalysisReport& rep) {
    nlohmann::json j;
    const int n = rep.hmax.m.rows;
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < n; ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int c = 0; c < n; ++c)
            row.push_back(rep.hmax.m.at(i, c));
        rows.push_back(std::move(row));
    }
    j["hmax"] = std::move(rows);
    j["spectral_radius"] = rep.hmax_spectral_radius;
    j["contraction_certified"] = rep.contraction_certified;
    j["row_dominance"] = rep.row_dominance;
    if (rep.measured_beta)
        j["measured_beta"] = *rep.measured_beta;
    if (rep.jacobian_radius)
        j["jacobian_radius"] = *rep.jacobian_radius;
    return j;
}

void write_sweep_csv(std::span<const SweepRow> rows, std::ostream& out) {
    out << "param,value,schedule,rho_hmax,verdict,iterations,beta\n";
    for (const SweepRow& r : rows)
        out << r.param << ',' << format_g12(r.value) << ',' << r.schedule << ','
            << format_g12(r.rho_hmax) << ',' << to_string(r.verdict) << ',' << r.iterations
            << ',' << format_g12(r.beta) << '\n';
}

void write_sweep_csv(std::span<const SweepRow> rows, const std::filesystem::path& file) {
    std::ofstream out(file);
    if (!out)
        throw std::runtime_error(file.string() + ": cannot open file for writing");
    write_sweep_csv(rows, out);
}

} // namespace iwf
