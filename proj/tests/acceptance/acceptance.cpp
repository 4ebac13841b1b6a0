// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "qlienard/analysis.hpp"
#include "qlienard/config.hpp"
#include "qlienard/dynamics.hpp"
#include "qlienard/model.hpp"
#include "qlienard/reservoir.hpp"
#include "qlienard/run.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace qlienard;
namespace fs = std::filesystem;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

double rel(double measured, double expected) { return std::abs(measured - expected) / std::abs(expected); }

std::string fmt(const char* pattern, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, pattern, args...);
    return buf;
}

// ---------------------------------------------------------------------------

Verdict coefficient_maps()
{
    struct Row {
        std::vector<double> m, a;
    };
    // rows of the m -> f(x)/epsilon table, lowest degree first
    const std::vector<Row> rows = {
        {{-1, 1, 2}, {-1, 1, 1}},
        {{0, -1, 2}, {0, -1, 1}},
        {{-1, 0, 2}, {-1, 0, 1}},
    };
    bool ok = true;
    for (const auto& row : rows) ok = ok && a_from_m(row.m) == row.a;

    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> coeff(-5.0, 5.0);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::vector<double> m1 = {coeff(gen), coeff(gen) + 10.0};
        ok = ok && a_from_m(m1) == m1;
        const std::vector<double> m2 = {coeff(gen), coeff(gen), coeff(gen) + 10.0};
        const auto a2 = a_from_m(m2);
        ok = ok && a2[0] == m2[0] && a2[1] == m2[1];
        worst = std::max(worst, rel(a2[2], m2[2] / 2.0));
    }
    ok = ok && worst <= 1e-12;
    return {ok, fmt("3 table rows exact, n=1 identity exact, a_2 = m_2/2 max rel err %.1e", worst)};
}

// ---------------------------------------------------------------------------

// P(u) = lead * prod (u - r_i) * prod (u + s_k), with distinct positive r_i
// (simple cycles) and positive s_k (no further positive roots).
std::vector<double> random_radial_polynomial(std::mt19937_64& gen, int n)
{
    std::uniform_int_distribution<int> count(0, n);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const int positive = count(gen);
    std::vector<double> roots;
    while (static_cast<int>(roots.size()) < positive) {
        const double r = 0.1 * std::pow(100.0, unit(gen)); // 0.1 .. 10
        const bool separated = std::all_of(roots.begin(), roots.end(),
                                           [&](double q) { return std::abs(r - q) > 0.15 * std::max(r, q); });
        if (separated) roots.push_back(r);
    }
    std::vector<double> poly = {(unit(gen) < 0.8 ? 1.0 : -1.0) * (0.5 + 1.5 * unit(gen))};
    auto multiply = [&](double shift) { // poly *= (u - shift)
        std::vector<double> next(poly.size() + 1, 0.0);
        for (std::size_t i = 0; i < poly.size(); ++i) {
            next[i + 1] += poly[i];
            next[i] -= shift * poly[i];
        }
        poly = std::move(next);
    };
    for (double r : roots) multiply(r);
    for (int k = positive; k < n; ++k) multiply(-(0.1 + 5.0 * unit(gen)));
    return poly;
}

Verdict oracle_agreement()
{
    std::mt19937_64 gen(2024);
    std::uniform_int_distribution<int> degree(1, 4);
    int compared = 0, mismatched = 0, cycles = 0;
    double worst = 0.0;
    for (Family family : {Family::Position, Family::Velocity}) {
        for (int trial = 0; trial < 100; ++trial) {
            const DampingSpec spec(family, random_radial_polynomial(gen, degree(gen)));
            const SystemParams params{.omega0 = 1.0, .gamma = 0.1, .n = spec.n(), .theta = 0.0};
            const auto census = limit_cycle_census(spec, params);
            const auto averaged = averaging_amplitude_condition(spec, params);
            ++compared;
            if (census.cycles.size() != averaged.size()) {
                ++mismatched;
                continue;
            }
            for (std::size_t i = 0; i < averaged.size(); ++i) {
                ++cycles;
                worst = std::max(worst, rel(averaged[i].amplitude, census.cycles[i].amplitude));
                if (averaged[i].stability != census.cycles[i].stability) ++mismatched;
            }
        }
    }
    const bool ok = mismatched == 0 && worst <= 1e-6;
    return {ok, fmt("%d specs (%d cycles), %d count/stability mismatches, max amplitude rel err %.1e", compared,
                    cycles, mismatched, worst)};
}

// ---------------------------------------------------------------------------

Trajectory deterministic_phase_run(const DampingSpec& spec, double gamma, PhaseState start, double t_total,
                                   std::size_t stride = 1)
{
    const SystemParams params{.omega0 = 1.0, .gamma = gamma, .n = spec.n(), .theta = 0.0};
    const Oscillator osc(spec, params, NoiseSpec::none());
    const IntegratorScheme scheme{.kind = SchemeKind::Heun, .dt = default_dt(1.0)};
    return integrate(osc, scheme, start, Representation::Phase, t_total, 1, stride);
}

Verdict classical_amplitudes()
{
    const double eps = 0.05;
    const double period = 2.0 * std::numbers::pi;

    const std::vector<double> vdp_a = {-1.0, 1.0};
    const auto vdp_spec = DampingSpec::from_a(vdp_a);
    const auto vdp = deterministic_phase_run(vdp_spec, gamma_for_epsilon(eps, vdp_spec), {0.5, 0.0}, 300 * period);
    const double x_amp = 2.0 * poincare_radii(vdp).back();

    const std::vector<double> rayleigh_beta = {-1.0, 1.0};
    const auto ray_spec = DampingSpec::from_beta(rayleigh_beta);
    const auto ray =
        deterministic_phase_run(ray_spec, gamma_for_epsilon(eps, ray_spec), {0.5, 0.0}, 300 * period);
    const auto& states = ray.phase();
    const auto last_periods = static_cast<std::size_t>(5 * period / ray.dt);
    double vmax = 0.0;
    for (std::size_t i = states.size() - last_periods; i < states.size(); ++i) vmax = std::max(vmax, std::abs(states[i].v));

    const double e1 = rel(x_amp, 2.0);
    const double e2 = rel(vmax, 2.0 / std::sqrt(3.0));
    return {e1 <= 0.02 && e2 <= 0.02,
            fmt("Van der Pol x-amplitude %.5f (rel err %.2e), Rayleigh max|x'| %.5f vs 2/sqrt(3) (rel err %.2e)",
                x_amp, e1, vmax, e2)};
}

// ---------------------------------------------------------------------------

Verdict multi_cycle_structure()
{
    const std::vector<double> a = {-1.0, 1.0, -0.144, 0.005};
    const auto spec = DampingSpec::from_a(a);
    const double eps = 0.01;
    const SystemParams params{.omega0 = 1.0, .gamma = gamma_for_epsilon(eps, spec), .n = spec.n(), .theta = 0.0};
    const auto census = limit_cycle_census(spec, params);
    const bool pattern = census.cycles.size() == 3 && census.cycles[0].stability == Stability::Stable &&
                         census.cycles[1].stability == Stability::Unstable &&
                         census.cycles[2].stability == Stability::Stable;
    if (!pattern) return {false, fmt("census returned %zu cycles with the wrong pattern", census.cycles.size())};

    std::vector<double> finals;
    for (int i = 0; i < 20; ++i) {
        const double x0 = 0.5 + 0.33 * i; // 0.5 .. 6.77, straddling every cycle
        const auto traj = deterministic_phase_run(spec, params.gamma, {x0, 0.0}, 1000 * 2.0 * std::numbers::pi, 10);
        finals.push_back(2.0 * poincare_radii(traj).back());
    }
    std::vector<double> distinct;
    for (double f : finals) {
        if (std::none_of(distinct.begin(), distinct.end(), [&](double d) { return rel(f, d) <= 0.01; }))
            distinct.push_back(f);
    }
    std::sort(distinct.begin(), distinct.end());
    bool ok = distinct.size() == 2;
    double worst = 0.0;
    if (ok) {
        worst = std::max(rel(distinct[0], census.cycles[0].amplitude), rel(distinct[1], census.cycles[2].amplitude));
        ok = worst <= 0.01;
    }
    std::string radii;
    for (double d : distinct) radii += fmt("%.4f ", d);
    return {ok, fmt("census stable/unstable/stable at %.4f/%.4f/%.4f; 20 runs end on %zu radii [ %s] (max rel err %.2e)",
                    census.cycles[0].amplitude, census.cycles[1].amplitude, census.cycles[2].amplitude,
                    distinct.size(), radii.c_str(), worst)};
}

// ---------------------------------------------------------------------------

Verdict bath_closure()
{
    bool ok = true;
    std::string detail;
    for (double theta : {0.0, 1.0, 10.0}) {
        const SystemParams params{.omega0 = 1.0, .gamma = 0.01, .n = 1, .theta = theta};
        const auto r = fdr_closure_check(params);
        ok = ok && r.relative_error <= 0.15;
        detail += fmt("theta=%g: D %.4g vs %.4g (%.1f%%); ", theta, r.measured, r.predicted, 100 * r.relative_error);
    }
    const SystemParams decay_params{.omega0 = 1.0, .gamma = 2e-4, .n = 1, .theta = 0.0};
    const auto fit = bath_decay_fit(decay_params);
    ok = ok && fit.relative_error <= 0.10;
    detail += fmt("decay fit gamma %.4g vs %.4g (%.1f%%)", fit.gamma_fitted, fit.gamma_bath, 100 * fit.relative_error);
    return {ok, detail};
}

// ---------------------------------------------------------------------------

EnsembleBalance preset_balance(const std::string& name, std::size_t members)
{
    const RunConfig cfg = preset(name);
    const Oscillator osc(cfg.spec, cfg.params, cfg.noise, cfg.kappa);
    std::vector<Trajectory> ensemble;
    for (std::size_t i = 0; i < members; ++i) {
        const PhaseState start = cfg.initial[i % cfg.initial.size()];
        ensemble.push_back(integrate(osc, cfg.scheme, start, cfg.representation, cfg.t_total,
                                     member_seed(cfg.seed, i), cfg.sample_stride));
    }
    return ensemble_balance(ensemble, cfg.burn_in);
}

Verdict vacuum_cycles()
{
    bool ok = true;
    std::string detail;
    for (const char* name : {"fig2b", "fig4b"}) {
        const auto b = preset_balance(name, 32);
        const bool pass = b.window_drift < drift_tolerance && b.slope_consistent_with_zero;
        ok = ok && pass;
        detail += fmt("%s: mean_r %.4f, drift %.2f%%, var slope %.2e +/- %.2e (t crit %.2f) %s; ", name, b.mean_r,
                      100 * b.window_drift, b.variance_slope, b.slope_stderr, b.slope_critical,
                      pass ? "stationary" : "not stationary");
    }
    detail.resize(detail.size() - 2);
    return {ok, detail};
}

// ---------------------------------------------------------------------------

double representation_gap(double gamma)
{
    const std::vector<double> a = {-1.0, 1.0};
    const auto spec = DampingSpec::from_a(a);
    const SystemParams params{.omega0 = 1.0, .gamma = gamma, .n = 1, .theta = 0.0};
    const Oscillator osc(spec, params, NoiseSpec::none());
    const IntegratorScheme scheme{.kind = SchemeKind::Heun, .dt = default_dt(1.0)};
    const double t_total = 10 * 2.0 * std::numbers::pi;
    // start on the cycle: alpha = 1 <-> (x, x') = (2, 0)
    const auto amp = integrate(osc, scheme, AmplitudeState{{1.0, 0.0}}, Representation::Amplitude, t_total, 1);
    const auto phs = integrate(osc, scheme, PhaseState{2.0, 0.0}, Representation::Phase, t_total, 1);
    double gap = 0.0;
    for (std::size_t i = 0; i < amp.size(); ++i) {
        const auto mapped = amplitude_to_phase(amp.amplitude()[i].alpha, amp.time(i), 1.0, Family::Position);
        const auto& direct = phs.phase()[i];
        gap = std::max(gap, std::hypot(mapped.x - direct.x, mapped.v - direct.v));
    }
    return gap / 2.0; // relative to the cycle amplitude
}

Verdict representation_consistency()
{
    const double coarse = representation_gap(0.01);
    const double fine = representation_gap(0.001);
    return {coarse < 0.05 && fine < 0.01,
            fmt("sup-norm gap over 10 periods: %.3e at gamma=0.01, %.3e at gamma=0.001", coarse, fine)};
}

// ---------------------------------------------------------------------------

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

Verdict replay_determinism()
{
    const fs::path root = fs::temp_directory_path() / "qlienard-acceptance-replay";
    fs::remove_all(root);
    std::size_t compared = 0;
    bool ok = true;
    for (const char* name : {"fig1b", "fig2b", "fig4a"}) {
        RunConfig cfg = preset(name);
        cfg.output_dir = (root / name / "original").string();
        const auto first = run(cfg);
        const auto again = replay(fs::path(cfg.output_dir) / "manifest.json", root / name / "replayed");
        ok = ok && first.exit_code == exit_ok && again.exit_code == exit_ok;
        for (const auto& entry : fs::directory_iterator(cfg.output_dir)) {
            if (entry.path().extension() != ".csv") continue;
            const auto twin = root / name / "replayed" / entry.path().filename();
            ok = ok && fs::exists(twin) && slurp(entry.path()) == slurp(twin);
            ++compared;
        }
    }
    fs::remove_all(root);
    return {ok && compared > 0, fmt("%zu CSV files replayed from manifests, byte-identical: %s", compared,
                                    ok ? "yes" : "no")};
}

} // namespace

int main()
{
    struct Criterion {
        int id;
        const char* title;
        std::function<Verdict()> check;
    };
    const std::vector<Criterion> criteria = {
        {1, "coefficient-map fidelity", coefficient_maps},
        {2, "census vs averaging oracle", oracle_agreement},
        {3, "Van der Pol and Rayleigh amplitudes", classical_amplitudes},
        {4, "three-cycle structure", multi_cycle_structure},
        {5, "fluctuation-dissipation closure", bath_closure},
        {6, "vacuum limit cycles stationary", vacuum_cycles},
        {7, "amplitude vs second-order consistency", representation_consistency},
        {8, "manifest replay determinism", replay_determinism},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = c.check();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (!v.pass) ++failures;
        std::printf("[%s] criterion %d: %s (%.1f s) -- %s\n", v.pass ? "PASS" : "FAIL", c.id, c.title, secs,
                    v.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
