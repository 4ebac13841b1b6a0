#include "qlienard/noise.hpp"

#include "qlienard/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qlienard {

std::string_view to_string(NoiseKind kind)
{
    switch (kind) {
    case NoiseKind::Internal: return "internal";
    case NoiseKind::Vacuum: return "vacuum";
    case NoiseKind::External: return "external";
    case NoiseKind::None: return "none";
    }
    return "?";
}

NoiseKind noise_kind_from_string(std::string_view text)
{
    if (text == "internal") return NoiseKind::Internal;
    if (text == "vacuum") return NoiseKind::Vacuum;
    if (text == "external") return NoiseKind::External;
    if (text == "none") return NoiseKind::None;
    throw std::invalid_argument("unknown noise kind '" + std::string(text)
                                + "' (expected internal|vacuum|external|none)");
}

NoiseSpec::NoiseSpec(NoiseKind kind, std::optional<double> intensity_override)
    : kind_(kind), intensity_(intensity_override)
{
    if (kind_ == NoiseKind::External) {
        if (!intensity_) throw std::invalid_argument("external noise requires an intensity");
        if (!(std::isfinite(*intensity_) && *intensity_ >= 0.0)) {
            throw std::invalid_argument("external noise intensity must be finite and >= 0");
        }
    } else if (intensity_) {
        throw std::invalid_argument("noise intensity is only allowed for kind 'external'");
    }
}

double coth_factor(double omega, double theta)
{
    if (theta == 0.0) return 1.0;
    return 1.0 / std::tanh(omega / (2.0 * theta));
}

double bose_occupation(double omega, double theta)
{
    if (theta == 0.0) return 0.0;
    return 1.0 / std::expm1(omega / theta);
}

double noise_intensity(const SystemParams& params, const NoiseSpec& spec)
{
    const double order = params.n + 1;
    switch (spec.kind()) {
    case NoiseKind::Internal:
        return 2.0 * order * params.gamma * coth_factor(order * params.omega0, params.theta);
    case NoiseKind::Vacuum:
        return 2.0 * order * params.gamma;
    case NoiseKind::External:
        return *spec.intensity_override();
    case NoiseKind::None:
        return 0.0;
    }
    return 0.0;
}

NoiseGenerator::NoiseGenerator(std::uint64_t seed) : seed_(seed), engine_(seed) {}

double NoiseGenerator::standard_normal()
{
    return normal_(engine_);
}

double NoiseGenerator::real_increment(double intensity, double dt)
{
    if (intensity == 0.0) return 0.0;
    return std::sqrt(intensity * dt) * standard_normal();
}

Complex NoiseGenerator::complex_increment(double intensity, double dt)
{
    if (intensity == 0.0) return {0.0, 0.0};
    const double scale = std::sqrt(intensity * dt / 4.0);
    const double re = standard_normal();
    const double im = standard_normal();
    return {scale * re, scale * im};
}

std::uint64_t member_seed(std::uint64_t base, std::uint64_t index) noexcept
{
    // splitmix64 finalizer over the combined key
    std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::vector<double> sample_noise_increments(double intensity, double dt, std::size_t count, std::uint64_t seed)
{
    if (!(intensity >= 0.0) || !(dt > 0.0)) throw std::invalid_argument("need intensity >= 0 and dt > 0");
    NoiseGenerator gen(seed);
    std::vector<double> out(count);
    for (auto& x : out) x = gen.real_increment(intensity, dt);
    return out;
}

std::vector<Complex> sample_complex_noise_increments(double intensity, double dt, std::size_t count,
                                                     std::uint64_t seed)
{
    if (!(intensity >= 0.0) || !(dt > 0.0)) throw std::invalid_argument("need intensity >= 0 and dt > 0");
    NoiseGenerator gen(seed);
    std::vector<Complex> out(count);
    for (auto& z : out) z = gen.complex_increment(intensity, dt);
    return out;
}

void BathConfig::validate(const SystemParams& params) const
{
    if (modes < 1) throw std::invalid_argument("bath needs at least one mode");
    if (!coupling) throw std::invalid_argument("bath coupling g(omega) is not set");
    const double resonance = (params.n + 1) * params.omega0;
    if (!(omega_min < resonance && resonance < omega_max)) {
        throw std::invalid_argument("bath window [" + std::to_string(omega_min) + ", " + std::to_string(omega_max)
                                    + "] does not contain the resonance (n+1) omega0 = "
                                    + std::to_string(resonance));
    }
    for (double g : couplings()) {
        if (!(std::isfinite(g) && g >= 0.0)) throw std::invalid_argument("bath coupling must be finite and >= 0");
    }
}

double BathConfig::spacing() const noexcept
{
    return (omega_max - omega_min) / static_cast<double>(modes);
}

std::vector<double> BathConfig::frequencies() const
{
    std::vector<double> w(modes);
    const double dw = spacing();
    for (std::size_t k = 0; k < modes; ++k) w[k] = omega_min + (static_cast<double>(k) + 0.5) * dw;
    return w;
}

std::vector<double> BathConfig::couplings() const
{
    std::vector<double> g;
    g.reserve(modes);
    for (double w : frequencies()) g.push_back(coupling(w));
    return g;
}

double BathConfig::density_at(double omega) const
{
    if (density) return density(omega);
    return 1.0 / spacing();
}

BathConfig flat_bath(const SystemParams& params, std::size_t modes, double half_width)
{
    params.validate();
    if (modes < 1 || !(half_width > 0.0)) throw std::invalid_argument("flat_bath: need modes >= 1, half_width > 0");
    const double resonance = (params.n + 1) * params.omega0;
    BathConfig config;
    config.modes = modes;
    config.omega_min = resonance - half_width;
    config.omega_max = resonance + half_width;
    const double rho = static_cast<double>(modes) / (2.0 * half_width);
    const double g = std::sqrt(params.gamma / ((params.n + 1) * std::numbers::pi * rho));
    config.coupling = [g](double) { return g; };
    return config;
}

std::function<double(double)> tabulated(std::vector<double> xs, std::vector<double> ys)
{
    if (xs.empty() || xs.size() != ys.size()) throw std::invalid_argument("tabulated: size mismatch");
    if (!std::is_sorted(xs.begin(), xs.end())) throw std::invalid_argument("tabulated: abscissae must be sorted");
    return [xs = std::move(xs), ys = std::move(ys)](double x) {
        if (x <= xs.front()) return ys.front();
        if (x >= xs.back()) return ys.back();
        const auto hi = static_cast<std::size_t>(std::upper_bound(xs.begin(), xs.end(), x) - xs.begin());
        const std::size_t lo = hi - 1;
        const double w = (x - xs[lo]) / (xs[hi] - xs[lo]);
        return (1.0 - w) * ys[lo] + w * ys[hi];
    };
}

BathSample sample_wigner_bath(const BathConfig& config, double theta, std::uint64_t seed)
{
    if (!(theta >= 0.0)) throw std::invalid_argument("theta must be >= 0");
    NoiseGenerator gen(seed);
    BathSample sample;
    sample.mu.reserve(config.modes);
    for (double w : config.frequencies()) {
        // each quadrature carries coth / 4, so <|mu|^2> = coth / 2 = nbar + 1/2
        const double scale = std::sqrt(coth_factor(w, theta) / 4.0);
        const double re = gen.standard_normal();
        const double im = gen.standard_normal();
        sample.mu.emplace_back(scale * re, scale * im);
    }
    return sample;
}

std::vector<Complex> synthesize_bath_noise(const BathSample& sample, const BathConfig& config,
                                           const SystemParams& params, const TimeGrid& grid)
{
    if (sample.mu.empty() || config.modes == 0) throw std::invalid_argument("synthesize_bath_noise: empty mode list");
    if (sample.mu.size() != config.modes) throw std::invalid_argument("synthesize_bath_noise: sample/config size mismatch");
    const double order = params.n + 1;
    const double resonance = order * params.omega0;
    const auto w = config.frequencies();
    const auto g = config.couplings();

    std::vector<Complex> out(grid.count, Complex{});
    if (grid.count == 0) return out;

    // Per-mode phasor advanced by a fixed rotation each step; re-anchored
    // periodically to keep the accumulated rounding bounded.
    constexpr std::size_t reanchor = 1024;
    for (std::size_t k = 0; k < config.modes; ++k) {
        const double detuning = w[k] - resonance;
        const Complex weight = order * g[k] * sample.mu[k];
        const Complex rotation = std::polar(1.0, -detuning * grid.dt);
        Complex phasor;
        for (std::size_t i = 0; i < grid.count; ++i) {
            if (i % reanchor == 0) phasor = std::polar(1.0, -detuning * grid.at(i));
            out[i] += weight * phasor;
            phasor *= rotation;
        }
    }
    return out;
}

std::vector<double> estimate_autocorrelation(std::span<const std::vector<double>> ensemble, std::size_t max_lag)
{
    if (ensemble.size() < min_members) {
        throw InsufficientDataError("estimate_autocorrelation: need at least " + std::to_string(min_members)
                                    + " ensemble members, got " + std::to_string(ensemble.size()));
    }
    const std::size_t length = ensemble.front().size();
    for (const auto& s : ensemble) {
        if (s.size() != length) throw std::invalid_argument("estimate_autocorrelation: members differ in length");
    }
    if (length <= max_lag) throw InsufficientDataError("estimate_autocorrelation: series shorter than max_lag + 1");

    double mean = 0.0;
    for (const auto& s : ensemble)
        for (double x : s) mean += x;
    mean /= static_cast<double>(length * ensemble.size());

    std::vector<double> cov(max_lag + 1, 0.0);
    for (const auto& s : ensemble) {
        for (std::size_t lag = 0; lag <= max_lag; ++lag) {
            double acc = 0.0;
            for (std::size_t t = 0; t + lag < length; ++t) acc += (s[t] - mean) * (s[t + lag] - mean);
            cov[lag] += acc;
        }
    }
    for (std::size_t lag = 0; lag <= max_lag; ++lag) {
        cov[lag] /= static_cast<double>(ensemble.size() * (length - lag));
    }
    return cov;
}

double integrate_autocorrelation(std::span<const double> covariance, double dt)
{
    if (covariance.empty()) return 0.0;
    if (covariance.size() == 1) return 0.0;
    double sum = covariance.front();
    for (std::size_t l = 1; l + 1 < covariance.size(); ++l) sum += 2.0 * covariance[l];
    sum += covariance.back();
    return sum * dt;
}

double gamma_from_bath(const BathConfig& config, const SystemParams& params)
{
    config.validate(params);
    const double resonance = (params.n + 1) * params.omega0;
    const double g = config.coupling(resonance);
    return (params.n + 1) * std::numbers::pi * g * g * config.density_at(resonance);
}

} // namespace qlienard
