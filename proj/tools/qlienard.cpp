// Command-line front end: simulate, census, average, noise-check, bath,
// preset, replay.

#include "qlienard/analysis.hpp"
#include "qlienard/config.hpp"
#include "qlienard/errors.hpp"
#include "qlienard/reservoir.hpp"
#include "qlienard/run.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

using namespace qlienard;
using nlohmann::json;

namespace {

struct ConfigFlags {
    std::string config_file;
    std::optional<std::string> family, basis, noise, scheme, representation, out, name;
    std::vector<double> coeffs;
    std::optional<double> omega0, gamma, epsilon, theta, intensity, t_total, dt, kappa, burn_in;
    std::optional<std::uint64_t> seed, ensemble, stride;
    std::vector<double> initial;
    bool allow_coarse_dt = false;

    void attach(CLI::App& app, bool full)
    {
        app.add_option("-c,--config", config_file, "Run configuration (JSON or YAML)")->check(CLI::ExistingFile);
        app.add_option("--family", family, "position | velocity");
        app.add_option("--basis", basis, "a | m | beta");
        app.add_option("--coeffs", coeffs, "Damping coefficients, lowest degree first (comma separated)")
            ->delimiter(',');
        app.add_option("--omega0", omega0);
        app.add_option("--gamma", gamma, "Damping rate gamma_{n+1}");
        app.add_option("--epsilon", epsilon, "gamma / m_n, alternative to --gamma");
        app.add_option("--theta", theta, "Temperature K T");
        if (!full) return;
        app.add_option("--noise", noise, "internal | vacuum | external | none");
        app.add_option("--intensity", intensity, "External noise intensity");
        app.add_option("--scheme", scheme, "heun | euler-maruyama");
        app.add_option("--representation", representation, "amplitude | phase");
        app.add_option("--t-total", t_total);
        app.add_option("--dt", dt);
        app.add_flag("--allow-coarse-dt", allow_coarse_dt);
        app.add_option("--seed", seed);
        app.add_option("--ensemble", ensemble, "Ensemble size");
        app.add_option("--initial", initial, "Initial states x0,v0[,x1,v1,...]")->delimiter(',');
        app.add_option("--kappa", kappa, "Noise multiplier for the second-order form");
        app.add_option("--stride", stride, "Store every k-th step");
        app.add_option("--burn-in", burn_in, "Discarded fraction for statistics");
        app.add_option("-o,--out", out, "Output directory");
        app.add_option("--name", name);
    }

    json document(bool default_gamma) const
    {
        json doc = json::object();
        if (!config_file.empty()) {
            std::ifstream in(config_file);
            std::stringstream buf;
            buf << in.rdbuf();
            const std::string text = buf.str();
            const auto first = text.find_first_not_of(" \t\r\n");
            doc = (first != std::string::npos && text[first] == '{') ? json::parse(text) : yaml_to_json(text);
        }
        auto& spec = doc["spec"];
        if (family) spec["family"] = *family;
        if (basis) spec["basis"] = *basis;
        if (!coeffs.empty()) spec["coeffs"] = coeffs;
        auto& params = doc["params"];
        if (params.is_null()) params = json::object();
        if (omega0) params["omega0"] = *omega0;
        if (gamma) {
            params.erase("epsilon");
            params["gamma"] = *gamma;
        }
        if (epsilon) {
            params.erase("gamma");
            params["epsilon"] = *epsilon;
        }
        if (theta) params["theta"] = *theta;
        if (default_gamma && !params.contains("gamma") && !params.contains("epsilon")) params["gamma"] = 1.0;
        if (noise) {
            doc["noise"] = json{{"kind", *noise}};
            if (intensity) doc["noise"]["intensity"] = *intensity;
        } else if (intensity) {
            doc["noise"]["intensity"] = *intensity;
        }
        if (scheme) doc["scheme"] = *scheme;
        if (representation) doc["representation"] = *representation;
        if (t_total) doc["t_total"] = *t_total;
        if (dt) doc["dt"] = *dt;
        if (allow_coarse_dt) doc["allow_coarse_dt"] = true;
        if (seed) doc["seed"] = *seed;
        if (ensemble) doc["ensemble_size"] = *ensemble;
        if (!initial.empty()) {
            if (initial.size() % 2 != 0) throw ConfigError("initial", "expected an even number of values");
            json pairs = json::array();
            for (std::size_t i = 0; i < initial.size(); i += 2) pairs.push_back({initial[i], initial[i + 1]});
            doc["initial"] = pairs;
        }
        if (kappa) doc["kappa"] = *kappa;
        if (stride) doc["sample_stride"] = *stride;
        if (burn_in) doc["burn_in"] = *burn_in;
        if (out) doc["outputs"]["dir"] = *out;
        if (name) doc["name"] = *name;
        return doc;
    }
};

int report_run(const RunOutcome& outcome)
{
    if (outcome.exit_code != exit_ok) {
        std::cerr << "error: " << outcome.diagnostics << '\n';
        return outcome.exit_code;
    }
    for (const auto& f : outcome.files) std::cout << "wrote " << f.string() << '\n';
    return exit_ok;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Quantum Lienard oscillator toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(toolkit_version));

    ConfigFlags sim_flags;
    auto* simulate = app.add_subcommand("simulate", "Integrate an ensemble and write CSV, reports and a manifest");
    sim_flags.attach(*simulate, true);

    ConfigFlags census_flags;
    auto* census = app.add_subcommand("census", "Limit cycles from the roots of the radial polynomial");
    census_flags.attach(*census, false);

    ConfigFlags average_flags;
    auto* average = app.add_subcommand("average", "Krylov-Bogoliubov amplitudes of the second-order equation");
    average_flags.attach(*average, false);

    SystemParams bath_params;
    double tolerance = 0.15;
    std::string csv_path;
    FdrCheckOptions fdr;
    auto* noise_check = app.add_subcommand("noise-check", "Fluctuation-dissipation closure of synthesized bath noise");
    noise_check->add_option("--n", bath_params.n);
    noise_check->add_option("--omega0", bath_params.omega0);
    noise_check->add_option("--gamma", bath_params.gamma);
    noise_check->add_option("--theta", bath_params.theta);
    noise_check->add_option("--modes", fdr.modes);
    noise_check->add_option("--half-width", fdr.half_width);
    noise_check->add_option("--members", fdr.members);
    noise_check->add_option("--samples", fdr.samples);
    noise_check->add_option("--sample-dt", fdr.sample_dt);
    noise_check->add_option("--max-lag", fdr.max_lag);
    noise_check->add_option("--seed", fdr.seed);
    noise_check->add_option("--tolerance", tolerance, "Relative tolerance (exit 4 when exceeded)");
    noise_check->add_option("--csv", csv_path, "Write (lag, C) columns here");

    DecayFitOptions decay;
    double bath_tolerance = 0.10;
    double alpha0 = 10.0;
    std::string bath_csv;
    SystemParams decay_params{.omega0 = 1.0, .gamma = 2e-4, .n = 1, .theta = 0.0};
    auto* bath = app.add_subcommand("bath", "Explicit system + reservoir integration and decay-rate fit");
    bath->add_option("--n", decay_params.n);
    bath->add_option("--omega0", decay_params.omega0);
    bath->add_option("--gamma", decay_params.gamma, "Target damping rate of the flat bath");
    bath->add_option("--theta", decay_params.theta);
    bath->add_option("--modes", decay.modes);
    bath->add_option("--half-width", decay.half_width);
    bath->add_option("--members", decay.members);
    bath->add_option("--alpha0", alpha0, "Initial real amplitude");
    bath->add_option("--t-total", decay.t_total);
    bath->add_option("--dt", decay.dt);
    bath->add_option("--stride", decay.stride);
    bath->add_option("--skip", decay.skip);
    bath->add_option("--seed", decay.seed);
    bath->add_option("--tolerance", bath_tolerance);
    bath->add_option("--csv", bath_csv, "Write (t, mean |alpha|^2) columns here");

    std::string preset_name;
    std::string preset_out;
    bool preset_print = false;
    auto* preset_cmd = app.add_subcommand("preset", "Run a figure or table preset");
    preset_cmd->add_option("name", preset_name, "fig1a..fig5b, table1_1..table1_3")->required();
    preset_cmd->add_option("-o,--out", preset_out, "Output directory");
    preset_cmd->add_flag("--print", preset_print, "Print the configuration instead of running it");

    std::string manifest_path;
    std::string replay_out;
    auto* replay_cmd = app.add_subcommand("replay", "Re-run the configuration recorded in a manifest");
    replay_cmd->add_option("manifest", manifest_path)->required()->check(CLI::ExistingFile);
    replay_cmd->add_option("-o,--out", replay_out, "Output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*simulate) {
            return report_run(run(config_from_json(sim_flags.document(false))));
        }
        if (*census) {
            const RunConfig cfg = config_from_json(census_flags.document(true));
            write_cycle_report(std::cout, limit_cycle_census(cfg.spec, cfg.params));
            return exit_ok;
        }
        if (*average) {
            const RunConfig cfg = config_from_json(average_flags.document(true));
            write_averaged_report(std::cout, cfg.spec.family(), averaging_amplitude_condition(cfg.spec, cfg.params));
            return exit_ok;
        }
        if (*noise_check) {
            const auto result = fdr_closure_check(bath_params, fdr);
            std::cout << "gamma_bath = " << format_double(result.gamma_bath) << '\n'
                      << "predicted = " << format_double(result.predicted) << '\n'
                      << "measured = " << format_double(result.measured) << '\n'
                      << "relative_error = " << format_double(result.relative_error) << '\n';
            if (!csv_path.empty()) {
                std::ofstream out(csv_path);
                out << "lag,C\n";
                for (std::size_t l = 0; l < result.covariance.size(); ++l) {
                    out << format_double(static_cast<double>(l) * fdr.sample_dt) << ','
                        << format_double(result.covariance[l]) << '\n';
                }
            }
            const bool pass = result.relative_error <= tolerance;
            std::cout << "status = " << (pass ? "pass" : "fail") << '\n';
            return pass ? exit_ok : exit_statistical_failure;
        }
        if (*bath) {
            decay.alpha0 = {alpha0, 0.0};
            const auto result = bath_decay_fit(decay_params, decay);
            for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
            std::cout << "gamma_bath = " << format_double(result.gamma_bath) << '\n'
                      << "gamma_fitted = " << format_double(result.gamma_fitted) << '\n'
                      << "relative_error = " << format_double(result.relative_error) << '\n';
            if (!bath_csv.empty()) {
                std::ofstream out(bath_csv);
                out << "t,mean_abs_alpha_sq\n";
                for (std::size_t i = 0; i < result.times.size(); ++i) {
                    out << format_double(result.times[i]) << ',' << format_double(result.mean_norm[i]) << '\n';
                }
            }
            const bool pass = result.relative_error <= bath_tolerance;
            std::cout << "status = " << (pass ? "pass" : "fail") << '\n';
            return pass ? exit_ok : exit_statistical_failure;
        }
        if (*preset_cmd) {
            RunConfig cfg = preset(preset_name);
            if (!preset_out.empty()) cfg.output_dir = preset_out;
            if (preset_print) {
                std::cout << serialize_config(cfg) << '\n';
                return exit_ok;
            }
            return report_run(run(cfg));
        }
        if (*replay_cmd) {
            return report_run(replay(manifest_path, replay_out));
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config_error;
    } catch (const json::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config_error;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config_error;
    } catch (const BlowUpError& e) {
        std::cerr << "numerical blow-up: " << e.what() << '\n';
        return exit_blow_up;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_failure;
    }
    return exit_ok;
}
