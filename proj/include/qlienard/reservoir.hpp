#pragma once

#include "qlienard/dynamics.hpp"
#include "qlienard/noise.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace qlienard {

struct FdrCheckOptions {
    std::size_t modes = 4096;
    double half_width = 1.0;  ///< bath window (n+1) omega0 -/+ half_width
    std::size_t members = 256;
    std::size_t samples = 2048;
    double sample_dt = 0.25;
    std::size_t max_lag = 160;
    std::uint64_t seed = 1;
};

struct FdrCheckResult {
    double gamma_bath = 0.0;  ///< continuum damping rate of the bath
    double predicted = 0.0;   ///< 2 (n+1) gamma coth((n+1) omega0 / (2 theta))
    double measured = 0.0;    ///< integrated ensemble autocovariance of xi = f + f*
    double relative_error = 0.0;
    std::vector<double> covariance; ///< C(l sample_dt), l = 0..max_lag
};

/// Synthesizes xi(t) from an ensemble of Wigner-sampled flat baths and
/// compares the delta weight of its autocovariance with the damping-matched
/// intensity.
FdrCheckResult fdr_closure_check(const SystemParams& params, const FdrCheckOptions& options = {});

struct DecayFitOptions {
    std::size_t modes = 4096;
    double half_width = 1.0;
    std::size_t members = 16;
    Complex alpha0{10.0, 0.0};
    double t_total = 100.0;
    double dt = 0.03;
    std::size_t stride = 10;
    double skip = 5.0;        ///< fit only t >= skip (bath memory transient)
    std::uint64_t seed = 1;
};

struct DecayFitResult {
    double gamma_bath = 0.0;
    double gamma_fitted = 0.0;
    double relative_error = 0.0;
    std::vector<double> times;
    std::vector<double> mean_norm; ///< ensemble mean |alpha|^2
    std::vector<std::string> warnings;
};

/// Runs the explicit system + bath equations from Wigner-sampled baths at
/// params.theta and fits <|alpha|^2>^{-n} = u0^{-n} + 2 n gamma t, the
/// Markov-limit decay law of d alpha/dt = -gamma |alpha|^{2n} alpha.
DecayFitResult bath_decay_fit(const SystemParams& params, const DecayFitOptions& options = {});

} // namespace qlienard
