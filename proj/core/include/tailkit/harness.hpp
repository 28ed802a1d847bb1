#pragma once

#include "tailkit/config.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace tailkit {

inline constexpr const char* kCsvHeader = "u,log_u,formula,asym_value,method,estimate,std_error,ratio,n_samples,seed,error";

enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitAllFailed = 2, kExitValidation = 3 };

/// One CSV line. Optional columns print empty when absent.
struct ReportRow {
    double u = 0.0;
    double log_u = 0.0;
    std::string formula;
    std::optional<double> asym_value;
    std::optional<double> asym_log_value;
    std::string method;
    std::optional<Estimate> estimate;
    std::optional<double> ratio;
    std::string error;

    bool failed() const { return !error.empty(); }
};

struct CommandResult {
    std::string output;  // CSV (or validation report) text
    int exit_code = kExitOk;
    std::vector<ReportRow> rows;
};

/// Run-time settings that override the config: flags, then TAILKIT_WORKERS.
struct RunOverrides {
    std::optional<unsigned> workers;
    std::optional<std::uint64_t> seed;
};

/// Worker count from flag, environment, config, in that order; default 1.
unsigned resolve_workers(const ExperimentConfig& cfg, const RunOverrides& o);

std::string format_row(const ReportRow& r);
std::string format_number(double x);

CommandResult cmd_asym(const ExperimentConfig& cfg, const RunOverrides& o = {});
CommandResult cmd_simulate(const ExperimentConfig& cfg, const RunOverrides& o = {});
/// Throws ConfigError when no estimator or no applicable formula is configured.
CommandResult cmd_compare(const ExperimentConfig& cfg, const RunOverrides& o = {});
CommandResult cmd_validate(const ExperimentConfig& cfg, const RunOverrides& o = {});

/// Summary of one compared series, as reported in the `#` block.
struct TrendSummary {
    std::string series;
    std::vector<double> ratios;
    bool nonincreasing = false;       // |ratio - 1| nonincreasing along the grid
    bool strictly_decreasing = false;
    double final_deviation = 0.0;     // |ratio - 1| at the largest u
    double final_allowance = 0.0;     // max(tolerance, 3 std_error / asym_value)
    bool pass = false;                // final deviation within allowance and trend nonincreasing
};

TrendSummary summarize_trend(const std::string& series, const std::vector<ReportRow>& rows, double tolerance);

}  // namespace tailkit
