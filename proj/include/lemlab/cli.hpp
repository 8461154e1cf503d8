#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "lemlab/theorems.hpp"

namespace lemlab::cli {

enum ExitCode : int {
    kOk = 0,
    kFailure = 1,
    kBadInput = 2,
    kBudgetTooSmall = 3,
    kInconclusive = 4,
    kViolated = 5,
};

/// Exit status of `verify` for a verdict.
int exit_code(Verdict v) noexcept;

struct SweepConfig {
    std::uint64_t seed = 42;
    int cases = 200;
    int degree_max = 5;
    std::vector<StatementId> statements{std::begin(kAllStatements), std::end(kAllStatements)};
    std::uint64_t mc_samples = 1u << 18;
    double grid_h = 0.02;
    std::string output_path;   // empty: reports go to the command's output stream
};

/// Throws ParseError naming the offending field.
SweepConfig parse_sweep_config(const nlohmann::json& doc);

/// Fixed margin bins, upper edges exclusive.
inline constexpr double kMarginEdges[] = {-1.0, -0.1, -0.01, 0.0, 0.01, 0.1, 1.0};

struct SweepSummary {
    int cases = 0;
    std::map<Verdict, int> counts;
    int errors = 0;
    double min_margin = 0.0;
    std::vector<int> histogram;   // size(kMarginEdges) + 1 bins
};

/// Runs every case and writes one record block per case to `reports`.
SweepSummary run_sweep(const SweepConfig& config, std::ostream& reports);

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace lemlab::cli
