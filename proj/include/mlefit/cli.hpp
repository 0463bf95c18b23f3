#pragma once

#include "mlefit/harness.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace mlefit::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNoConvergence = 3;

/// Entry point shared by the `mlefit` binary and the tests. `args` excludes
/// the program name. Returns the process exit code.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err);

enum class OutputFormat { CSV, JSON, PrettyTable };

/// Experiment description read from a custom config file.
///
/// Grammar, one directive per line; blank lines and text after '#' ignored:
///
///     distribution     = ml | gml
///     replicates       = <positive integer>
///     seed             = <unsigned 64-bit integer>
///     estimators       = log, frac          (any non-empty subset)
///     psi_mode         = accurate | truncated
///     variance_divisor = n | n-1
///     cell             = <alpha>, <delta or beta>, <n>     (repeatable)
///
/// `distribution` and at least one `cell` are required.
struct ParsedExperiment {
    ExperimentConfig config;
    std::optional<std::uint64_t> seed;
    bool replicates_given = false;
};

/// Throws DomainError with a "line N: ..." message on malformed input.
ParsedExperiment parse_experiment(std::istream& in);

/// Wide format: one row per (cell, estimator), schema `# mlefit-mc v1`.
void write_mc_csv(std::ostream& out, const std::vector<CellReport>& reports);
void write_mc_json(std::ostream& out, const std::vector<CellReport>& reports);
void write_mc_table(std::ostream& out, const std::vector<CellReport>& reports, Distribution dist);

/// Long format for plotting: one row per (cell, estimator, parameter, statistic).
void write_mc_long_csv(std::ostream& out, const std::vector<CellReport>& reports,
                       Distribution dist);

/// printf("%.<digits>g") into a std::string.
std::string format_number(double value, int significant_digits);

} // namespace mlefit::cli
