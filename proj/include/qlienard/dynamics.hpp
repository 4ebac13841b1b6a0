#pragma once

#include "qlienard/model.hpp"
#include "qlienard/noise.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace qlienard {

/// Slowly varying (rotating-frame) amplitude alpha(t).
struct AmplitudeState {
    Complex alpha;
    friend bool operator==(const AmplitudeState&, const AmplitudeState&) = default;
};

/// Phase-space point (x, x').
struct PhaseState {
    double x = 0.0;
    double v = 0.0;
    friend bool operator==(const PhaseState&, const PhaseState&) = default;
};

enum class Representation { Amplitude, Phase };
enum class SchemeKind { EulerMaruyama, Heun };

std::string_view to_string(Representation rep);
std::string_view to_string(SchemeKind scheme);
Representation representation_from_string(std::string_view text);
SchemeKind scheme_from_string(std::string_view text);

/// Default step 1e-3 of the natural period.
double default_dt(double omega0);

struct IntegratorScheme {
    SchemeKind kind = SchemeKind::Heun;
    double dt = 0.0;
    /// Permit dt above 1% of the period.
    bool allow_coarse_dt = false;

    /// Throws std::invalid_argument unless 0 < dt and, without the override,
    /// dt <= 0.01 * 2 pi / omega0.
    void validate(double omega0) const;
};

/// Threshold on |alpha| or |(x, v)| past which integration aborts.
inline constexpr double blow_up_threshold = 1e12;

/// A fully specified oscillator: damping law, constants, and noise channel.
/// Caches the derived coefficients used by the steppers. Immutable.
class Oscillator {
public:
    /// kappa scales the additive noise intensity of the second-order form.
    Oscillator(DampingSpec spec, SystemParams params, NoiseSpec noise, double kappa = 1.0);

    const DampingSpec& spec() const noexcept { return spec_; }
    const SystemParams& params() const noexcept { return params_; }
    const NoiseSpec& noise() const noexcept { return noise_; }
    double kappa() const noexcept { return kappa_; }

    double epsilon() const noexcept { return epsilon_; }
    double intensity() const noexcept { return intensity_; }

    /// -(gamma/m_n) P(|alpha|^2) alpha
    Complex amplitude_drift(Complex alpha) const noexcept;
    /// (alpha*)^n for Internal/Vacuum noise, 1 for External, 0 for None.
    Complex amplitude_diffusion(Complex alpha) const noexcept;

    /// Deterministic part of v' = -omega0^2 x - epsilon F v.
    double phase_acceleration(double x, double v) const noexcept;
    /// F(x) for the Position family, F(v) for Velocity.
    double damping_polynomial(double x, double v) const noexcept;

private:
    DampingSpec spec_;
    SystemParams params_;
    NoiseSpec noise_;
    double kappa_;
    double epsilon_;
    double intensity_;
    std::vector<double> physical_;
};

Complex drift_amplitude(Complex alpha, const SystemParams& params, const DampingSpec& spec);

/// One step of d alpha = drift dt + g(alpha) dW with dW circular, intensity D.
AmplitudeState step_amplitude(const AmplitudeState& state, const Oscillator& osc, const IntegratorScheme& scheme,
                              NoiseGenerator& rng);

/// One step of x' = v, v' = -omega0^2 x - epsilon F v + eta, eta real white
/// with intensity kappa D entering the velocity equation only.
PhaseState step_phase(const PhaseState& state, const Oscillator& osc, const IntegratorScheme& scheme,
                      NoiseGenerator& rng);

/// Maps the rotating-frame amplitude to phase space:
/// Position: x - i x'/omega0 = 2 alpha e^{i omega0 t}
/// Velocity: omega0 x - i x' = 2 alpha e^{i omega0 t}
PhaseState amplitude_to_phase(Complex alpha, double t, double omega0, Family family);
AmplitudeState phase_to_amplitude(const PhaseState& state, double t, double omega0, Family family);

/// |alpha| implied by a phase-space point.
double phase_radius(const PhaseState& state, double omega0, Family family);

struct TrajectoryMeta {
    std::uint64_t seed = 0;
    std::string scheme;
    Representation representation = Representation::Amplitude;
    double step_dt = 0.0;
    std::size_t stride = 1;
    DampingSpec spec;
    SystemParams params;
    NoiseSpec noise;
    double kappa = 1.0;
};

/// Uniformly sampled time series, t_i = t0 + i dt.
struct Trajectory {
    double t0 = 0.0;
    double dt = 0.0; ///< sample spacing = step_dt * stride
    std::variant<std::vector<AmplitudeState>, std::vector<PhaseState>> samples;
    TrajectoryMeta meta;

    std::size_t size() const noexcept;
    double time(std::size_t i) const noexcept { return t0 + static_cast<double>(i) * dt; }
    Representation representation() const noexcept;

    /// Throws std::logic_error for the other representation.
    const std::vector<AmplitudeState>& amplitude() const;
    const std::vector<PhaseState>& phase() const;

    /// |alpha(t_i)| for either representation.
    std::vector<double> radii() const;
};

using InitialState = std::variant<AmplitudeState, PhaseState>;

/// Integrates from t = 0 for round(t_total / dt) steps, storing every
/// `stride`-th state. An initial state in the other representation is
/// converted at t = 0. Identical inputs yield bit-identical trajectories.
/// Throws BlowUpError naming the failing step.
Trajectory integrate(const Oscillator& osc, const IntegratorScheme& scheme, const InitialState& initial,
                     Representation representation, double t_total, std::uint64_t seed, std::size_t stride = 1);

/// Result of a joint system + reservoir integration.
struct BathRun {
    /// Lab-frame system amplitude a(t) (free evolution a0 e^{-i omega0 t}).
    Trajectory system;
    /// Rotating-frame bath force (n+1) sum_k g_k mu_k(t) e^{i (n+1) omega0 t},
    /// sampled alongside `system`. With alpha = 0 it equals the synthesized f(t).
    std::vector<Complex> force;
    std::vector<std::string> warnings;
};

/// Deterministic RK4 integration of
///   a'    = -i omega0 a + (n+1) sum_k g_k (a*)^n mu_k
///   mu_k' = -i omega_k mu_k - g_k a^{n+1}
/// from the sampled bath initial conditions. Requires dt <= 0.1 / omega_max;
/// warns when t_total exceeds the recurrence time 2 pi / spacing.
BathRun integrate_bath_system(const BathSample& sample, const BathConfig& config, const SystemParams& params,
                              Complex alpha0, double t_total, double dt, std::size_t stride = 1);

} // namespace qlienard
