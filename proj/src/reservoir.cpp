#include "qlienard/reservoir.hpp"

#include "qlienard/errors.hpp"

#include <cmath>
#include <stdexcept>

namespace qlienard {

FdrCheckResult fdr_closure_check(const SystemParams& params, const FdrCheckOptions& options)
{
    params.validate();
    const BathConfig config = flat_bath(params, options.modes, options.half_width);
    const TimeGrid grid{.t0 = 0.0, .dt = options.sample_dt, .count = options.samples};

    std::vector<std::vector<double>> ensemble;
    ensemble.reserve(options.members);
    for (std::size_t m = 0; m < options.members; ++m) {
        const BathSample sample = sample_wigner_bath(config, params.theta, member_seed(options.seed, m));
        const auto f = synthesize_bath_noise(sample, config, params, grid);
        std::vector<double> xi(f.size());
        for (std::size_t i = 0; i < f.size(); ++i) xi[i] = 2.0 * f[i].real();
        ensemble.push_back(std::move(xi));
    }

    FdrCheckResult result;
    result.gamma_bath = gamma_from_bath(config, params);
    SystemParams matched = params;
    matched.gamma = result.gamma_bath;
    result.predicted = noise_intensity(matched, NoiseSpec::internal());
    result.covariance = estimate_autocorrelation(ensemble, options.max_lag);
    result.measured = integrate_autocorrelation(result.covariance, options.sample_dt);
    result.relative_error = std::abs(result.measured - result.predicted) / result.predicted;
    return result;
}

DecayFitResult bath_decay_fit(const SystemParams& params, const DecayFitOptions& options)
{
    params.validate();
    if (options.members == 0) throw std::invalid_argument("bath_decay_fit: need at least one member");
    const BathConfig config = flat_bath(params, options.modes, options.half_width);

    DecayFitResult result;
    result.gamma_bath = gamma_from_bath(config, params);
    for (std::size_t m = 0; m < options.members; ++m) {
        const BathSample sample = sample_wigner_bath(config, params.theta, member_seed(options.seed, m));
        const BathRun run = integrate_bath_system(sample, config, params, options.alpha0, options.t_total, options.dt,
                                                  options.stride);
        if (m == 0) {
            result.warnings = run.warnings;
            result.times.resize(run.system.size());
            result.mean_norm.assign(run.system.size(), 0.0);
            for (std::size_t i = 0; i < run.system.size(); ++i) result.times[i] = run.system.time(i);
        }
        const auto& s = run.system.amplitude();
        for (std::size_t i = 0; i < s.size(); ++i) result.mean_norm[i] += std::norm(s[i].alpha);
    }
    for (double& u : result.mean_norm) u /= static_cast<double>(options.members);

    // least squares of u^{-n} against t
    double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < result.times.size(); ++i) {
        if (result.times[i] < options.skip) continue;
        const double y = std::pow(result.mean_norm[i], -params.n);
        const double t = result.times[i];
        st += t;
        sy += y;
        stt += t * t;
        sty += t * y;
        ++count;
    }
    if (count < 3) throw InsufficientDataError("bath_decay_fit: fewer than 3 samples after the skip time");
    const double c = static_cast<double>(count);
    const double slope = (c * sty - st * sy) / (c * stt - st * st);
    result.gamma_fitted = slope / (2.0 * params.n);
    result.relative_error = std::abs(result.gamma_fitted - result.gamma_bath) / result.gamma_bath;
    return result;
}

} // namespace qlienard
