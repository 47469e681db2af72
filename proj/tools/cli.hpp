#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace alsr::cli {

struct TrainCommand {
    std::filesystem::path config;
    std::filesystem::path out;
    std::optional<std::uint64_t> seed;  ///< overrides trainer.seed
};

struct EvalCommand {
    std::filesystem::path checkpoint;
    std::filesystem::path config;
    std::filesystem::path out;
    std::optional<std::uint64_t> seed;
};

struct VarianceLabCommand {
    std::filesystem::path population;
    std::filesystem::path out;
    std::optional<int> resolution;
    std::uint64_t n = 1;
};

struct AblateCommand {
    std::filesystem::path config;
    std::filesystem::path out;
    unsigned threads = 1;
};

struct ReportCommand {
    std::vector<std::filesystem::path> run_dirs;
    std::filesystem::path out;
};

using Command = std::variant<TrainCommand, EvalCommand, VarianceLabCommand, AblateCommand, ReportCommand>;

/// Malformed command line. `exit_code` is what the process should return.
class UsageError : public std::runtime_error {
public:
    UsageError(const std::string& message, int exit_code) : std::runtime_error(message), exit_code_(exit_code) {}
    int exit_code() const noexcept { return exit_code_; }

private:
    int exit_code_;
};

/// `--help` was requested; what() holds the help text.
class HelpRequested : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitPartial = 3;

/// argv[0] is the program name.
Command parse_args(const std::vector<std::string>& argv);

struct ReportOutcome {
    std::size_t runs_ok = 0;
    std::vector<std::string> errors;  ///< one entry per unreadable run directory
};

/// Writes comparison.csv, heatmaps.csv, errors.csv (when needed), summary.md and
/// manifest.json into `out`. Runs are grouped by (alpha, kernel); alpha = 0 is
/// labelled baseline.
ReportOutcome assemble_report(const std::vector<std::filesystem::path>& run_dirs, const std::filesystem::path& out);

/// Executes a parsed command; returns the process exit code.
int execute(const Command& command, std::ostream& log);

/// parse_args + execute with error reporting.
int run_cli(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

}  // namespace alsr::cli
