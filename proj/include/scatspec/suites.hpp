#pragma once

#include <string>
#include <vector>

#include "scatspec/config.hpp"
#include "scatspec/report.hpp"

namespace scatspec {

/// "all" expands to every suite; throws ConfigError for unknown names.
std::vector<std::string> expand_suites(const std::string& name);

/// Runs one suite. Errors raised by the computation are caught and recorded in the block
/// (error_kind "config" for parameter/resolution errors, "numerical" otherwise).
SuiteBlock run_suite(const ExperimentConfig& cfg, const std::string& suite);

/// Blocks are ordered by suite name.
VerificationReport run_suites(const ExperimentConfig& cfg, const std::vector<std::string>& suites);

/// 0 all pass, 1 any fail or inconclusive, 2 configuration error, 3 numerical failure.
int exit_code(const VerificationReport& report);

}  // namespace scatspec
