#pragma once

#include "qlienard/model.hpp"

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace qlienard {

using Complex = std::complex<double>;

enum class NoiseKind {
    Internal, ///< fluctuation-dissipation matched, multiplies (alpha*)^n
    Vacuum,   ///< Internal at theta = 0
    External, ///< additive, intensity decoupled from gamma and theta
    None,
};

std::string_view to_string(NoiseKind kind);
NoiseKind noise_kind_from_string(std::string_view text);

/// Which noise channel drives a run. External carries its own intensity;
/// the other kinds derive it from SystemParams.
class NoiseSpec {
public:
    NoiseSpec() = default;

    /// Throws std::invalid_argument if an intensity is given for a kind other
    /// than External, if External has none, or if it is negative.
    NoiseSpec(NoiseKind kind, std::optional<double> intensity_override = std::nullopt);

    static NoiseSpec internal() { return NoiseSpec(NoiseKind::Internal); }
    static NoiseSpec vacuum() { return NoiseSpec(NoiseKind::Vacuum); }
    static NoiseSpec external(double intensity) { return NoiseSpec(NoiseKind::External, intensity); }
    static NoiseSpec none() { return NoiseSpec(NoiseKind::None); }

    NoiseKind kind() const noexcept { return kind_; }
    const std::optional<double>& intensity_override() const noexcept { return intensity_; }

    friend bool operator==(const NoiseSpec&, const NoiseSpec&) = default;

private:
    NoiseKind kind_ = NoiseKind::None;
    std::optional<double> intensity_;
};

/// coth(omega / (2 theta)) = 2 nbar + 1; exactly 1 at theta = 0.
double coth_factor(double omega, double theta);

/// 1 / (exp(omega / theta) - 1); 0 at theta = 0.
double bose_occupation(double omega, double theta);

/// Delta-weight D of the real noise xi = f + f*:
/// 2 (n+1) gamma coth((n+1) omega0 / (2 theta)) for Internal (coth -> 1 for
/// Vacuum or theta = 0), the override for External, 0 for None.
double noise_intensity(const SystemParams& params, const NoiseSpec& spec);

/// Seed-owning Gaussian source. Not thread-safe; give each worker its own.
class NoiseGenerator {
public:
    explicit NoiseGenerator(std::uint64_t seed);

    /// N(0, 1)
    double standard_normal();

    /// Real increment with variance D dt. Consumes no randomness when D == 0.
    double real_increment(double intensity, double dt);

    /// Circular complex increment, <dW dW*> = (D/2) dt, <dW dW> = 0.
    Complex complex_increment(double intensity, double dt);

    std::uint64_t seed() const noexcept { return seed_; }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Derives an independent stream seed for ensemble member `index`.
std::uint64_t member_seed(std::uint64_t base, std::uint64_t index) noexcept;

std::vector<double> sample_noise_increments(double intensity, double dt, std::size_t count, std::uint64_t seed);
std::vector<Complex> sample_complex_noise_increments(double intensity, double dt, std::size_t count,
                                                     std::uint64_t seed);

/// A discretized reservoir: `modes` oscillators on the uniform midpoint grid
/// of [omega_min, omega_max], coupled with strengths g(omega).
struct BathConfig {
    std::size_t modes = 1;
    double omega_min = 0.0;
    double omega_max = 0.0;
    std::function<double(double)> coupling;
    /// Density of states for the continuum damping formula. Defaults to the
    /// grid density modes / (omega_max - omega_min) when empty.
    std::function<double(double)> density;

    /// Throws std::invalid_argument unless the window contains (n+1) omega0
    /// and g is finite and non-negative on every mode.
    void validate(const SystemParams& params) const;

    double spacing() const noexcept;
    std::vector<double> frequencies() const;
    std::vector<double> couplings() const;
    double density_at(double omega) const;
};

/// Bath with constant g chosen so that gamma_from_bath returns `gamma`, on a
/// window of half-width `half_width` centred at (n+1) omega0.
BathConfig flat_bath(const SystemParams& params, std::size_t modes, double half_width);

/// Piecewise-linear interpolant through (xs, ys), held constant outside.
std::function<double(double)> tabulated(std::vector<double> xs, std::vector<double> ys);

/// Initial bath c-numbers mu_k(0).
struct BathSample {
    std::vector<Complex> mu;
};

/// Draws each mu_k from the Gaussian Wigner distribution of mode k:
/// <mu_k> = 0, <|mu_k|^2> = coth(omega_k / (2 theta)) / 2.
BathSample sample_wigner_bath(const BathConfig& config, double theta, std::uint64_t seed);

/// Uniform time grid t_i = t0 + i dt, i < count.
struct TimeGrid {
    double t0 = 0.0;
    double dt = 1.0;
    std::size_t count = 0;

    double at(std::size_t i) const noexcept { return t0 + static_cast<double>(i) * dt; }
};

/// f(t) = (n+1) sum_k g_k mu_k(0) exp(-i (omega_k - (n+1) omega0) t).
/// The real noise is xi = f + f* = 2 Re f.
std::vector<Complex> synthesize_bath_noise(const BathSample& sample, const BathConfig& config,
                                           const SystemParams& params, const TimeGrid& grid);

/// Ensemble lag covariance C(l) for l = 0..max_lag of equally sampled real
/// series. Requires at least `min_members` members of equal length >
/// max_lag. Each lag is normalized by its own pair count.
std::vector<double> estimate_autocorrelation(std::span<const std::vector<double>> ensemble, std::size_t max_lag);

inline constexpr std::size_t min_members = 100;

/// Trapezoid integral of the symmetric covariance over [-L dt, L dt].
double integrate_autocorrelation(std::span<const double> covariance, double dt);

/// Continuum damping rate (n+1) pi g(w)^2 rho(w) at w = (n+1) omega0.
double gamma_from_bath(const BathConfig& config, const SystemParams& params);

} // namespace qlienard
