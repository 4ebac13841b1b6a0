#pragma once

#include "qlienard/dynamics.hpp"
#include "qlienard/model.hpp"

#include <span>
#include <string_view>
#include <vector>

namespace qlienard {

enum class Stability { Stable, Unstable, Degenerate };

std::string_view to_string(Stability s);

struct LimitCycle {
    double u_root = 0.0;    ///< root of P(u), u = |alpha|^2
    double radius = 0.0;    ///< sqrt(u_root)
    double amplitude = 0.0; ///< 2 radius: x-amplitude (Position) or x'-amplitude (Velocity)
    Stability stability = Stability::Degenerate;
    double residual = 0.0;  ///< |P(u_root)|

    bool stable() const noexcept { return stability == Stability::Stable; }
};

struct CycleReport {
    Family family = Family::Position;
    std::vector<LimitCycle> cycles; ///< increasing u_root
};

/// All positive real roots of P(u) = sum m_j u^j, isolated between the
/// critical points of P and polished by Newton. A root is stable iff
/// (gamma/m_n) P'(u) > 0; multiple roots are reported as Degenerate.
CycleReport limit_cycle_census(const DampingSpec& spec, const SystemParams& params);

struct AveragedCycle {
    double amplitude = 0.0;
    Stability stability = Stability::Degenerate;
};

/// Krylov-Bogoliubov amplitudes of the second-order equation, computed from
/// the physical coefficients alone: roots R > 0 of
///   Position: int_0^{2pi} f(R cos phi) sin^2 phi dphi
///   Velocity: int_0^{2pi} F(R sin phi) sin^2 phi dphi
/// with an N-point trapezoid rule. Stable where epsilon times the integral
/// crosses zero upwards.
std::vector<AveragedCycle> averaging_amplitude_condition(const DampingSpec& spec, const SystemParams& params,
                                                         std::size_t quadrature_points = 2048);

/// The averaged energy-balance integral used by averaging_amplitude_condition.
double averaging_integral(Family family, std::span<const double> physical, double amplitude,
                          std::size_t quadrature_points = 2048);

struct Histogram {
    std::vector<double> edges; ///< bins + 1 increasing edges
    std::vector<std::size_t> counts;

    std::size_t total() const noexcept;
    /// Centres of bins that are strict local maxima holding at least
    /// `min_fraction` of the total count.
    std::vector<double> modes(double min_fraction = 0.01) const;
};

struct RadialStats {
    double mean_r = 0.0;
    double var_r = 0.0;
    Histogram histogram;
    double window_drift = 0.0; ///< |mean(second half) - mean(first half)| / mean(first half)
    std::size_t samples = 0;
};

inline constexpr double default_burn_in = 0.3;

/// Statistics of r(t) = |alpha| after discarding `burn_in_fraction` of the
/// run. Throws InsufficientDataError if fewer than 100 periods remain.
RadialStats radial_statistics(const Trajectory& traj, double burn_in_fraction = default_burn_in,
                              std::size_t bins = 60);

/// Pooled over ensemble members of equal length.
RadialStats radial_statistics(std::span<const Trajectory> ensemble, double burn_in_fraction = default_burn_in,
                              std::size_t bins = 60);

enum class BalanceVerdict { Preserved, Destroyed };

std::string_view to_string(BalanceVerdict v);

struct EnsembleBalance {
    double mean_r = 0.0;
    double window_drift = 0.0;
    std::vector<double> window_times;
    std::vector<double> window_variances;
    double variance_slope = 0.0;  ///< OLS slope of var_r against window centre time
    double slope_stderr = 0.0;
    double slope_critical = 0.0;  ///< two-sided 95% Student-t critical value
    bool slope_consistent_with_zero = false;
    BalanceVerdict verdict = BalanceVerdict::Destroyed;
};

struct BalanceComparison {
    EnsembleBalance first;
    EnsembleBalance second;
};

inline constexpr double drift_tolerance = 0.05;

/// Windowed stationarity analysis of one ensemble: the post-burn-in span is
/// cut into `windows` windows, var_r is regressed on time, and the run is
/// Preserved when the drift is below 5% and the slope is statistically zero
/// (or its total change is below 1e-3 of mean_r^2).
EnsembleBalance ensemble_balance(std::span<const Trajectory> ensemble, double burn_in_fraction = default_burn_in,
                                 std::size_t windows = 10);

/// Compares two ensembles with matching damping law, constants and run
/// length. Throws std::invalid_argument on mismatched configurations.
BalanceComparison balance_diagnostic(std::span<const Trajectory> first, std::span<const Trajectory> second,
                                     double burn_in_fraction = default_burn_in, std::size_t windows = 10);

/// r at successive crossings of the ray at angle `section_phase` in the
/// (x, -x'/omega0) plane (Position) or (omega0 x, -x') plane (Velocity),
/// in the direction of motion. Default: positive x axis. Linear
/// interpolation between samples. Throws InsufficientDataError without
/// crossings, std::logic_error for amplitude trajectories.
std::vector<double> poincare_radii(const Trajectory& traj, double section_phase = 0.0);

} // namespace qlienard
