#pragma once

#include <string>
#include <vector>

namespace specdec {

enum class ReportFormat { Csv, Json };

struct AlphaCurveRow {
    int k = 0;
    double alpha = 0.0;
    double stderr_alpha = 0.0;
};

struct SweepRow {
    std::string k_config;
    double alpha = 0.0;
    double tau = 0.0;
    double tokens_per_target_call = 0.0;
    long long blocks = 0;
    double stderr_tau = 0.0;
};

std::string render_alpha_curve(const std::vector<AlphaCurveRow>& rows, ReportFormat format);
std::string render_sweep(const std::vector<SweepRow>& rows, ReportFormat format);

/// Fixed-precision number formatting shared by all reports so identical runs
/// produce identical bytes.
std::string format_real(double value);

} // namespace specdec
