#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "evx/harness.hpp"

namespace evx {

enum class OutputFormat { Csv, Json, Both };

OutputFormat parse_output_format(const std::string& text);  // "csv"|"json"|"both"

/// Parses the JSON experiment config. Unknown keys are rejected so config
/// typos fail loudly. Throws std::invalid_argument with the offending key.
ExperimentConfig parse_config_json(const std::string& text);
ExperimentConfig load_config_file(const std::filesystem::path& path);

/// Rounds through a 12-significant-digit decimal representation; every
/// number in emitted files goes through this, so the files parse back
/// losslessly.
double round_to_12_digits(double x);

std::string config_to_json_string(const ExperimentConfig& config);
std::string report_to_json_string(const ExperimentReport& report);
std::string report_to_csv_string(const ExperimentReport& report);

/// Writes report.csv / report.json (per format) under dir; returns the
/// paths written. Directories are created as needed; I/O failures carry
/// the path in the message.
std::vector<std::filesystem::path> emit_report(const ExperimentReport& report,
                                               OutputFormat format,
                                               const std::filesystem::path& dir,
                                               const std::string& stem = "report");

/// Writes report_n<horizon>.{csv,json} per grid point plus convergence.json
/// with the distance trend and the expectation comparison.
std::vector<std::filesystem::path> emit_convergence_study(const ConvergenceStudy& study,
                                                          OutputFormat format,
                                                          const std::filesystem::path& dir);

} // namespace evx
