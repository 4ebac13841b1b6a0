#pragma once

#include "qlienard/analysis.hpp"
#include "qlienard/config.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace qlienard {

inline constexpr std::string_view toolkit_version = "0.3.0";

/// Process exit codes of the command-line front end.
enum ExitCode : int {
    exit_ok = 0,
    exit_failure = 1,
    exit_config_error = 2,
    exit_blow_up = 3,
    exit_statistical_failure = 4,
};

struct RunOutcome {
    int exit_code = exit_ok;
    std::vector<std::filesystem::path> files;
    std::string diagnostics;
    std::vector<Trajectory> trajectories;
};

/// Integrates every ensemble member and writes, under config.output_dir:
/// trajectory_NNN.csv, cycles.txt, radial_stats.txt, radial_histogram.csv
/// and manifest.json. Blow-ups yield exit_blow_up with diagnostics rather
/// than an exception.
RunOutcome run(const RunConfig& config);

/// Re-runs the configuration recorded in a manifest, writing to `output_dir`
/// (or the recorded directory when empty).
RunOutcome replay(const std::filesystem::path& manifest, const std::filesystem::path& output_dir = {});

void write_trajectory_csv(std::ostream& out, const Trajectory& traj);
void write_cycle_report(std::ostream& out, const CycleReport& report);
void write_averaged_report(std::ostream& out, Family family, const std::vector<AveragedCycle>& cycles);
void write_radial_stats(std::ostream& out, const RadialStats& stats);
void write_balance_report(std::ostream& out, const BalanceComparison& cmp);

/// 17 significant digits.
std::string format_double(double x);

} // namespace qlienard
