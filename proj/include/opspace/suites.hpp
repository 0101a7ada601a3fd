#pragma once

#include "opspace/check.hpp"
#include "opspace/report.hpp"

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace opspace {

inline constexpr int kExitPass = 0;
inline constexpr int kExitCheckFailure = 1;
inline constexpr int kExitInfeasible = 2;
inline constexpr int kExitUsage = 64;

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ExperimentConfig {
    std::uint64_t seed = 20240229;
    // "all", a module name, or "module.check"; the most specific key wins
    std::map<std::string, double> tolerances;
    std::string suite = "all";
    std::string output = "-";
    ReportFormat format = ReportFormat::Json;
};

const std::vector<std::string>& suite_names();
bool is_known_suite(const std::string& name);

// Parses "KEY=VAL"; throws UsageError on malformed input.
std::pair<std::string, double> parse_tolerance(const std::string& spec);

void apply_tolerances(std::vector<CheckRow>& rows, const std::map<std::string, double>& tolerances);

std::vector<CheckRow> suite_norms(std::uint64_t seed);
std::vector<CheckRow> suite_fock(std::uint64_t seed);
std::vector<CheckRow> suite_certify(std::uint64_t seed);
std::vector<CheckRow> suite_geometry(std::uint64_t seed);
std::vector<CheckRow> suite_strip(std::uint64_t seed);

struct SuiteOutcome {
    std::vector<CheckRow> rows;
    std::string text;  // emitted table
    int exit_code = kExitPass;
};

// Runs the suite, applies tolerance overrides and renders the table; the caller writes it.
// Throws UsageError for unknown suite names.
SuiteOutcome run_suite(const ExperimentConfig& config);

int exit_code_for(const std::vector<CheckRow>& rows);

}  // namespace opspace
