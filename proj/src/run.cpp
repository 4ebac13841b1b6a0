#include "qlienard/run.hpp"

#include "qlienard/errors.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace qlienard {

namespace fs = std::filesystem;

std::string format_double(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj)
{
    if (traj.representation() == Representation::Phase) {
        out << "t,x,v\n";
        const auto& s = traj.phase();
        for (std::size_t i = 0; i < s.size(); ++i) {
            out << format_double(traj.time(i)) << ',' << format_double(s[i].x) << ',' << format_double(s[i].v) << '\n';
        }
    } else {
        out << "t,re_alpha,im_alpha,abs_alpha\n";
        const auto& s = traj.amplitude();
        for (std::size_t i = 0; i < s.size(); ++i) {
            out << format_double(traj.time(i)) << ',' << format_double(s[i].alpha.real()) << ','
                << format_double(s[i].alpha.imag()) << ',' << format_double(std::abs(s[i].alpha)) << '\n';
        }
    }
}

void write_cycle_report(std::ostream& out, const CycleReport& report)
{
    out << "# limit-cycle census\n";
    out << "family = " << to_string(report.family) << '\n';
    out << "count = " << report.cycles.size() << '\n';
    for (std::size_t i = 0; i < report.cycles.size(); ++i) {
        const auto& c = report.cycles[i];
        out << "[cycle." << i << "]\n";
        out << "u_root = " << format_double(c.u_root) << '\n';
        out << "radius = " << format_double(c.radius) << '\n';
        out << "amplitude = " << format_double(c.amplitude) << '\n';
        out << "stable = "
            << (c.stability == Stability::Degenerate ? "undetermined" : (c.stable() ? "true" : "false")) << '\n';
        out << "residual = " << format_double(c.residual) << '\n';
    }
}

void write_averaged_report(std::ostream& out, Family family, const std::vector<AveragedCycle>& cycles)
{
    out << "# averaged amplitude condition\n";
    out << "family = " << to_string(family) << '\n';
    out << "count = " << cycles.size() << '\n';
    for (std::size_t i = 0; i < cycles.size(); ++i) {
        out << "[cycle." << i << "]\n";
        out << "amplitude = " << format_double(cycles[i].amplitude) << '\n';
        out << "stable = " << (cycles[i].stability == Stability::Stable ? "true" : "false") << '\n';
    }
}

void write_radial_stats(std::ostream& out, const RadialStats& stats)
{
    out << "# radial statistics\n";
    out << "mean_r = " << format_double(stats.mean_r) << '\n';
    out << "var_r = " << format_double(stats.var_r) << '\n';
    out << "window_drift = " << format_double(stats.window_drift) << '\n';
    out << "samples = " << stats.samples << '\n';
    out << "modes =";
    const auto modes = stats.histogram.modes();
    for (std::size_t i = 0; i < modes.size(); ++i) out << (i ? ", " : " ") << format_double(modes[i]);
    out << '\n';
}

namespace {

void write_balance(std::ostream& out, std::string_view label, const EnsembleBalance& b)
{
    out << '[' << label << "]\n";
    out << "verdict = " << to_string(b.verdict) << '\n';
    out << "mean_r = " << format_double(b.mean_r) << '\n';
    out << "window_drift = " << format_double(b.window_drift) << '\n';
    out << "variance_slope = " << format_double(b.variance_slope) << '\n';
    out << "slope_stderr = " << format_double(b.slope_stderr) << '\n';
    out << "slope_consistent_with_zero = " << (b.slope_consistent_with_zero ? "true" : "false") << '\n';
}

void write_histogram_csv(std::ostream& out, const Histogram& h)
{
    out << "bin_lo,bin_hi,count\n";
    for (std::size_t b = 0; b < h.counts.size(); ++b) {
        out << format_double(h.edges[b]) << ',' << format_double(h.edges[b + 1]) << ',' << h.counts[b] << '\n';
    }
}

std::ofstream open_output(const fs::path& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    return out;
}

} // namespace

void write_balance_report(std::ostream& out, const BalanceComparison& cmp)
{
    out << "# balance diagnostic\n";
    write_balance(out, "first", cmp.first);
    write_balance(out, "second", cmp.second);
}

RunOutcome run(const RunConfig& config)
{
    RunOutcome outcome;
    const Oscillator osc(config.spec, config.params, config.noise, config.kappa);
    const fs::path dir(config.output_dir);
    fs::create_directories(dir);

    outcome.trajectories.reserve(config.ensemble_size);
    for (std::size_t i = 0; i < config.ensemble_size; ++i) {
        const PhaseState start = config.initial[i % config.initial.size()];
        try {
            outcome.trajectories.push_back(integrate(osc, config.scheme, start, config.representation, config.t_total,
                                                     member_seed(config.seed, i), config.sample_stride));
        } catch (const BlowUpError& e) {
            outcome.exit_code = exit_blow_up;
            outcome.diagnostics = "member " + std::to_string(i) + " from (" + format_double(start.x) + ", "
                                  + format_double(start.v) + "): " + e.what();
            return outcome;
        }
    }

    for (std::size_t i = 0; i < outcome.trajectories.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "trajectory_%03zu.csv", i);
        auto out = open_output(dir / name);
        write_trajectory_csv(out, outcome.trajectories[i]);
        outcome.files.push_back(dir / name);
    }

    {
        auto out = open_output(dir / "cycles.txt");
        write_cycle_report(out, limit_cycle_census(config.spec, config.params));
        outcome.files.push_back(dir / "cycles.txt");
    }

    {
        auto out = open_output(dir / "radial_stats.txt");
        try {
            const auto stats = radial_statistics(outcome.trajectories, config.burn_in);
            write_radial_stats(out, stats);
            auto hist = open_output(dir / "radial_histogram.csv");
            write_histogram_csv(hist, stats.histogram);
            outcome.files.push_back(dir / "radial_histogram.csv");
        } catch (const InsufficientDataError& e) {
            out << "# radial statistics\nunavailable = " << e.what() << '\n';
        }
        outcome.files.push_back(dir / "radial_stats.txt");
    }

    nlohmann::json manifest{
        {"toolkit", "qlienard"},
        {"version", std::string(toolkit_version)},
        {"seed", config.seed},
        {"config", config_to_json(config)},
        {"files", nlohmann::json::array()},
    };
    for (const auto& f : outcome.files) manifest["files"].push_back(f.filename().string());
    {
        auto out = open_output(dir / "manifest.json");
        out << manifest.dump(2) << '\n';
        outcome.files.push_back(dir / "manifest.json");
    }
    return outcome;
}

RunOutcome replay(const fs::path& manifest, const fs::path& output_dir)
{
    std::ifstream in(manifest);
    if (!in) throw Error("cannot read manifest " + manifest.string());
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("", std::string("malformed manifest: ") + e.what());
    }
    const auto it = doc.find("config");
    if (it == doc.end()) throw ConfigError("config", "manifest has no config record");
    RunConfig config = config_from_json(*it);
    if (!output_dir.empty()) config.output_dir = output_dir.string();
    return run(config);
}

} // namespace qlienard
