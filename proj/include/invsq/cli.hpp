#pragma once

// Command-line front end: flow, bind, compare and wave subcommands with CSV
// or JSON output.

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "invsq/model.hpp"

namespace invsq::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 2,
    kExitMultiplicity = 3,
    kExitNumerical = 4,
};

enum class Format { Csv, Json };

struct LogRange {
    double min;
    double max;
    int points;
};

struct RunConfig {
    std::string command;
    std::vector<Scheme> schemes;
    std::optional<double> g;
    std::optional<double> nu;
    std::optional<double> c;
    double r0 = 1.0;
    std::vector<double> R_values;
    std::optional<LogRange> R_log;
    std::string method = "exact";
    std::optional<std::string> out;
    Format format = Format::Csv;
    bool meta = false;
    // oracle
    int n_steps = 20000;
    // wave
    std::string kind = "bound";
    std::optional<double> r_min;
    std::optional<double> r_max;
    int samples = 200;
    std::string spacing = "log";
};

/// Flat key = value file; '#' starts a comment. Keys are the long option
/// names without dashes. Throws UsageError on malformed lines.
std::map<std::string, std::string> read_config_file(const std::string& path);

/// Converts config entries into command-line tokens, skipping keys that
/// `cli_args` already sets (command-line flags win).
std::vector<std::string> config_to_args(const std::map<std::string, std::string>& entries,
                                        const std::vector<std::string>& cli_args);

/// The R grid of a config: explicit values, or log-spaced points from R_log.
std::vector<double> resolve_cutoffs(const RunConfig& config);

/// Checks the cross-field invariants (exactly one of g / nu, window, ranges).
void validate(const RunConfig& config);

Coupling coupling_of(const RunConfig& config);

using Cell = std::variant<std::monostate, double, long long, std::string, bool>;

struct Column {
    std::string name;
    std::string unit;
};

struct Table {
    std::string command;
    std::vector<Column> columns;
    std::vector<std::vector<Cell>> rows;
    /// Extra top-level fields for JSON output (status records, fitted orders).
    std::vector<std::pair<std::string, Cell>> fields;
};

/// "{:.17g}" for finite values, "nan" / "inf" / "-inf" otherwise.
std::string format_number(double v);

void write_csv(std::ostream& os, const Table& table, const std::vector<std::string>& meta = {});
void write_json(std::ostream& os, const Table& table, const std::vector<std::string>& meta = {});

struct CommandResult {
    Table table;
    int exit_code = kExitOk;
    std::vector<std::string> diagnostics; // written to stderr
};

CommandResult cmd_flow(const RunConfig& config);
CommandResult cmd_bind(const RunConfig& config);
CommandResult cmd_compare(const RunConfig& config);
CommandResult cmd_wave(const RunConfig& config);

/// Least-squares slope of log(dev) against log(R) over the positive entries.
std::optional<double> fitted_order(const std::vector<double>& R, const std::vector<double>& dev);

/// Parses `args` (without the program name), runs the command and writes
/// the table to `out` (or to --out). Returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace invsq::cli
