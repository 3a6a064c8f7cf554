#include "specdec/report.hpp"

#include <json.hpp>

#include <cstdio>
#include <sstream>

namespace specdec {

std::string format_real(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", value);
    return buf;
}

std::string render_alpha_curve(const std::vector<AlphaCurveRow>& rows, ReportFormat format) {
    if (format == ReportFormat::Json) {
        nlohmann::json doc = nlohmann::json::array();
        for (const AlphaCurveRow& r : rows) {
            doc.push_back({{"k", r.k},
                           {"alpha", format_real(r.alpha)},
                           {"stderr", format_real(r.stderr_alpha)}});
        }
        return doc.dump(2) + "\n";
    }
    std::ostringstream os;
    os << "k,alpha,stderr\n";
    for (const AlphaCurveRow& r : rows) {
        os << r.k << ',' << format_real(r.alpha) << ',' << format_real(r.stderr_alpha) << '\n';
    }
    return os.str();
}

std::string render_sweep(const std::vector<SweepRow>& rows, ReportFormat format) {
    if (format == ReportFormat::Json) {
        nlohmann::json doc = nlohmann::json::array();
        for (const SweepRow& r : rows) {
            doc.push_back({{"k_config", r.k_config},
                           {"alpha", format_real(r.alpha)},
                           {"tau", format_real(r.tau)},
                           {"tokens_per_target_call", format_real(r.tokens_per_target_call)},
                           {"blocks", r.blocks},
                           {"stderr_tau", format_real(r.stderr_tau)}});
        }
        return doc.dump(2) + "\n";
    }
    std::ostringstream os;
    os << "k_config,alpha,tau,tokens_per_target_call,blocks,stderr_tau\n";
    for (const SweepRow& r : rows) {
        os << r.k_config << ',' << format_real(r.alpha) << ',' << format_real(r.tau) << ','
           << format_real(r.tokens_per_target_call) << ',' << r.blocks << ','
           << format_real(r.stderr_tau) << '\n';
    }
    return os.str();
}

} // namespace specdec
