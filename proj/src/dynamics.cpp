#include "qlienard/dynamics.hpp"

#include "qlienard/errors.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace qlienard {

namespace {

Complex ipow(Complex z, int n) noexcept
{
    Complex result{1.0, 0.0};
    for (int i = 0; i < n; ++i) result *= z;
    return result;
}

bool escaped(Complex alpha) noexcept
{
    return !(std::isfinite(alpha.real()) && std::isfinite(alpha.imag())) || std::abs(alpha) > blow_up_threshold;
}

bool escaped(const PhaseState& s) noexcept
{
    return !(std::isfinite(s.x) && std::isfinite(s.v)) || std::hypot(s.x, s.v) > blow_up_threshold;
}

[[noreturn]] void throw_blow_up(std::size_t step, double t, std::string_view what)
{
    std::ostringstream msg;
    msg.precision(17);
    msg << "integration blew up at step " << step << " (t = " << t << "): " << what
        << " exceeded " << blow_up_threshold << " or became non-finite";
    throw BlowUpError(step, t, msg.str());
}

} // namespace

std::string_view to_string(Representation rep)
{
    return rep == Representation::Amplitude ? "amplitude" : "phase";
}

std::string_view to_string(SchemeKind scheme)
{
    return scheme == SchemeKind::Heun ? "heun" : "euler-maruyama";
}

Representation representation_from_string(std::string_view text)
{
    if (text == "amplitude") return Representation::Amplitude;
    if (text == "phase") return Representation::Phase;
    throw std::invalid_argument("unknown representation '" + std::string(text) + "' (expected amplitude|phase)");
}

SchemeKind scheme_from_string(std::string_view text)
{
    if (text == "heun") return SchemeKind::Heun;
    if (text == "euler-maruyama") return SchemeKind::EulerMaruyama;
    throw std::invalid_argument("unknown scheme '" + std::string(text) + "' (expected heun|euler-maruyama)");
}

double default_dt(double omega0)
{
    return 1e-3 * 2.0 * std::numbers::pi / omega0;
}

void IntegratorScheme::validate(double omega0) const
{
    if (!(std::isfinite(dt) && dt > 0.0)) throw std::invalid_argument("dt must be > 0");
    const double limit = 0.01 * 2.0 * std::numbers::pi / omega0;
    if (!allow_coarse_dt && dt > limit) {
        throw std::invalid_argument("dt = " + std::to_string(dt) + " exceeds 1% of the period ("
                                    + std::to_string(limit) + "); set allow_coarse_dt to override");
    }
}

Oscillator::Oscillator(DampingSpec spec, SystemParams params, NoiseSpec noise, double kappa)
    : spec_(std::move(spec)), params_(params), noise_(noise), kappa_(kappa)
{
    params_.validate_against(spec_);
    if (!(std::isfinite(kappa_) && kappa_ >= 0.0)) throw std::invalid_argument("kappa must be >= 0");
    epsilon_ = epsilon_of(params_, spec_);
    intensity_ = noise_intensity(params_, noise_);
    physical_ = spec_.physical();
}

Complex Oscillator::amplitude_drift(Complex alpha) const noexcept
{
    return -epsilon_ * horner(spec_.m(), std::norm(alpha)) * alpha;
}

Complex Oscillator::amplitude_diffusion(Complex alpha) const noexcept
{
    switch (noise_.kind()) {
    case NoiseKind::Internal:
    case NoiseKind::Vacuum: return ipow(std::conj(alpha), params_.n);
    case NoiseKind::External: return {1.0, 0.0};
    case NoiseKind::None: return {0.0, 0.0};
    }
    return {0.0, 0.0};
}

double Oscillator::damping_polynomial(double x, double v) const noexcept
{
    const double y = spec_.family() == Family::Position ? x : v;
    return horner(physical_, y * y);
}

double Oscillator::phase_acceleration(double x, double v) const noexcept
{
    return -params_.omega0 * params_.omega0 * x - epsilon_ * damping_polynomial(x, v) * v;
}

Complex drift_amplitude(Complex alpha, const SystemParams& params, const DampingSpec& spec)
{
    return -epsilon_of(params, spec) * horner(spec.m(), std::norm(alpha)) * alpha;
}

namespace {

// Explicit steps lose stability once the local Lipschitz constant times the
// step exceeds O(1). Strong multiplicative noise can throw the state into
// that region, so a rejected step is split in two along a Brownian bridge
// that keeps the sampled increment. Typical steps are never refined.
constexpr double stiffness_limit = 0.5;
constexpr int max_refinement_depth = 12;

struct AmplitudeTrial {
    Complex next;
    bool accepted;
};

AmplitudeTrial try_amplitude(Complex a, const Oscillator& osc, SchemeKind kind, double dt, Complex dw)
{
    const Complex drift = osc.amplitude_drift(a);
    const Complex diffusion = osc.amplitude_diffusion(a);
    const Complex predicted = a + drift * dt + diffusion * dw;
    const Complex drift_p = osc.amplitude_drift(predicted);
    const Complex diffusion_p = osc.amplitude_diffusion(predicted);
    const double jump = std::abs(predicted - a);
    const double lipschitz = std::abs(drift_p - drift) * dt + std::abs(diffusion_p - diffusion) * std::abs(dw);
    const bool accepted = std::isfinite(lipschitz) && lipschitz <= stiffness_limit * jump;
    if (kind == SchemeKind::EulerMaruyama) return {predicted, accepted};
    return {a + 0.5 * (drift + drift_p) * dt + 0.5 * (diffusion + diffusion_p) * dw, accepted};
}

Complex advance_amplitude(Complex a, const Oscillator& osc, SchemeKind kind, double dt, Complex dw,
                          NoiseGenerator& rng, int depth)
{
    const auto trial = try_amplitude(a, osc, kind, dt, dw);
    if (trial.accepted || depth >= max_refinement_depth) return trial.next;
    const double half = 0.5 * dt;
    const Complex first = 0.5 * dw + rng.complex_increment(osc.intensity(), half * 0.5);
    const Complex mid = advance_amplitude(a, osc, kind, half, first, rng, depth + 1);
    return advance_amplitude(mid, osc, kind, half, dw - first, rng, depth + 1);
}

struct PhaseTrial {
    PhaseState next;
    bool accepted;
};

PhaseTrial try_phase(const PhaseState& s, const Oscillator& osc, SchemeKind kind, double dt, double deta)
{
    const double acc = osc.phase_acceleration(s.x, s.v);
    const PhaseState predicted{s.x + s.v * dt, s.v + acc * dt + deta};
    const double acc_p = osc.phase_acceleration(predicted.x, predicted.v);
    const double jump = std::hypot(predicted.x - s.x, predicted.v - s.v);
    const double lipschitz = std::hypot(predicted.v - s.v, acc_p - acc) * dt;
    const bool accepted = std::isfinite(lipschitz) && lipschitz <= stiffness_limit * jump;
    if (kind == SchemeKind::EulerMaruyama) return {predicted, accepted};
    return {{s.x + 0.5 * (s.v + predicted.v) * dt, s.v + 0.5 * (acc + acc_p) * dt + deta}, accepted};
}

PhaseState advance_phase(const PhaseState& s, const Oscillator& osc, SchemeKind kind, double dt, double deta,
                         NoiseGenerator& rng, int depth)
{
    const auto trial = try_phase(s, osc, kind, dt, deta);
    if (trial.accepted || depth >= max_refinement_depth) return trial.next;
    const double half = 0.5 * dt;
    const double first = 0.5 * deta + rng.real_increment(osc.kappa() * osc.intensity(), half * 0.5);
    const PhaseState mid = advance_phase(s, osc, kind, half, first, rng, depth + 1);
    return advance_phase(mid, osc, kind, half, deta - first, rng, depth + 1);
}

} // namespace

AmplitudeState step_amplitude(const AmplitudeState& state, const Oscillator& osc, const IntegratorScheme& scheme,
                              NoiseGenerator& rng)
{
    const Complex dw = rng.complex_increment(osc.intensity(), scheme.dt);
    return {advance_amplitude(state.alpha, osc, scheme.kind, scheme.dt, dw, rng, 0)};
}

PhaseState step_phase(const PhaseState& state, const Oscillator& osc, const IntegratorScheme& scheme,
                      NoiseGenerator& rng)
{
    const double deta = rng.real_increment(osc.kappa() * osc.intensity(), scheme.dt);
    return advance_phase(state, osc, scheme.kind, scheme.dt, deta, rng, 0);
}

PhaseState amplitude_to_phase(Complex alpha, double t, double omega0, Family family)
{
    const Complex z = 2.0 * alpha * std::polar(1.0, omega0 * t);
    if (family == Family::Position) return {z.real(), -omega0 * z.imag()};
    return {z.real() / omega0, -z.imag()};
}

AmplitudeState phase_to_amplitude(const PhaseState& state, double t, double omega0, Family family)
{
    const Complex z = family == Family::Position ? Complex{state.x, -state.v / omega0}
                                                 : Complex{omega0 * state.x, -state.v};
    return {0.5 * z * std::polar(1.0, -omega0 * t)};
}

double phase_radius(const PhaseState& state, double omega0, Family family)
{
    if (family == Family::Position) return 0.5 * std::hypot(state.x, state.v / omega0);
    return 0.5 * std::hypot(omega0 * state.x, state.v);
}

std::size_t Trajectory::size() const noexcept
{
    return std::visit([](const auto& s) { return s.size(); }, samples);
}

Representation Trajectory::representation() const noexcept
{
    return std::holds_alternative<std::vector<AmplitudeState>>(samples) ? Representation::Amplitude
                                                                         : Representation::Phase;
}

const std::vector<AmplitudeState>& Trajectory::amplitude() const
{
    if (const auto* s = std::get_if<std::vector<AmplitudeState>>(&samples)) return *s;
    throw std::logic_error("trajectory holds phase-space samples");
}

const std::vector<PhaseState>& Trajectory::phase() const
{
    if (const auto* s = std::get_if<std::vector<PhaseState>>(&samples)) return *s;
    throw std::logic_error("trajectory holds amplitude samples");
}

std::vector<double> Trajectory::radii() const
{
    std::vector<double> r;
    r.reserve(size());
    if (representation() == Representation::Amplitude) {
        for (const auto& s : amplitude()) r.push_back(std::abs(s.alpha));
    } else {
        for (const auto& s : phase()) r.push_back(phase_radius(s, meta.params.omega0, meta.spec.family()));
    }
    return r;
}

Trajectory integrate(const Oscillator& osc, const IntegratorScheme& scheme, const InitialState& initial,
                     Representation representation, double t_total, std::uint64_t seed, std::size_t stride)
{
    scheme.validate(osc.params().omega0);
    if (!(std::isfinite(t_total) && t_total > 0.0)) throw std::invalid_argument("t_total must be > 0");
    if (stride == 0) throw std::invalid_argument("stride must be >= 1");

    const double omega0 = osc.params().omega0;
    const Family family = osc.spec().family();
    const auto steps = static_cast<std::size_t>(std::llround(t_total / scheme.dt));
    NoiseGenerator rng(seed);

    Trajectory traj{
        .t0 = 0.0,
        .dt = scheme.dt * static_cast<double>(stride),
        .samples = {},
        .meta = {.seed = seed,
                 .scheme = std::string(to_string(scheme.kind)),
                 .representation = representation,
                 .step_dt = scheme.dt,
                 .stride = stride,
                 .spec = osc.spec(),
                 .params = osc.params(),
                 .noise = osc.noise(),
                 .kappa = osc.kappa()},
    };

    if (representation == Representation::Amplitude) {
        AmplitudeState state = std::holds_alternative<AmplitudeState>(initial)
                                   ? std::get<AmplitudeState>(initial)
                                   : phase_to_amplitude(std::get<PhaseState>(initial), 0.0, omega0, family);
        if (escaped(state.alpha)) throw_blow_up(0, 0.0, "initial |alpha|");
        std::vector<AmplitudeState> out;
        out.reserve(steps / stride + 1);
        out.push_back(state);
        for (std::size_t i = 1; i <= steps; ++i) {
            state = step_amplitude(state, osc, scheme, rng);
            if (escaped(state.alpha)) throw_blow_up(i, static_cast<double>(i) * scheme.dt, "|alpha|");
            if (i % stride == 0) out.push_back(state);
        }
        traj.samples = std::move(out);
    } else {
        PhaseState state = std::holds_alternative<PhaseState>(initial)
                               ? std::get<PhaseState>(initial)
                               : amplitude_to_phase(std::get<AmplitudeState>(initial).alpha, 0.0, omega0, family);
        if (escaped(state)) throw_blow_up(0, 0.0, "initial |(x, v)|");
        std::vector<PhaseState> out;
        out.reserve(steps / stride + 1);
        out.push_back(state);
        for (std::size_t i = 1; i <= steps; ++i) {
            state = step_phase(state, osc, scheme, rng);
            if (escaped(state)) throw_blow_up(i, static_cast<double>(i) * scheme.dt, "|(x, v)|");
            if (i % stride == 0) out.push_back(state);
        }
        traj.samples = std::move(out);
    }
    return traj;
}

namespace {

struct BathDerivative {
    Complex alpha;
    std::vector<Complex> mu;
};

class BathSystem {
public:
    BathSystem(const BathConfig& config, const SystemParams& params)
        : omega0_(params.omega0), n_(params.n), w_(config.frequencies()), g_(config.couplings())
    {
    }

    std::size_t modes() const noexcept { return w_.size(); }

    // (n+1) sum_k g_k mu_k
    Complex force(const std::vector<Complex>& mu) const noexcept
    {
        Complex acc{};
        for (std::size_t k = 0; k < mu.size(); ++k) acc += g_[k] * mu[k];
        return static_cast<double>(n_ + 1) * acc;
    }

    void derivative(Complex alpha, const std::vector<Complex>& mu, BathDerivative& out) const
    {
        const Complex i{0.0, 1.0};
        out.alpha = -i * omega0_ * alpha + ipow(std::conj(alpha), n_) * force(mu);
        const Complex source = ipow(alpha, n_ + 1);
        for (std::size_t k = 0; k < mu.size(); ++k) out.mu[k] = -i * w_[k] * mu[k] - g_[k] * source;
    }

private:
    double omega0_;
    int n_;
    std::vector<double> w_;
    std::vector<double> g_;
};

} // namespace

BathRun integrate_bath_system(const BathSample& sample, const BathConfig& config, const SystemParams& params,
                              Complex alpha0, double t_total, double dt, std::size_t stride)
{
    params.validate();
    config.validate(params);
    if (sample.mu.size() != config.modes) throw std::invalid_argument("bath sample does not match bath config");
    if (!(std::isfinite(t_total) && t_total > 0.0)) throw std::invalid_argument("t_total must be > 0");
    if (!(dt > 0.0 && dt <= 0.1 / config.omega_max)) {
        throw std::invalid_argument("dt must satisfy 0 < dt <= 0.1 / omega_max = " + std::to_string(0.1 / config.omega_max));
    }
    if (stride == 0) throw std::invalid_argument("stride must be >= 1");

    BathRun run{
        .system = {.t0 = 0.0,
                   .dt = dt * static_cast<double>(stride),
                   .samples = {},
                   .meta = {.seed = 0,
                            .scheme = "rk4",
                            .representation = Representation::Amplitude,
                            .step_dt = dt,
                            .stride = stride,
                            .spec = DampingSpec(Family::Position, [&] {
                                std::vector<double> m(static_cast<std::size_t>(params.n) + 1, 0.0);
                                m.back() = 1.0;
                                return m;
                            }()),
                            .params = params,
                            .noise = NoiseSpec::internal(),
                            .kappa = 1.0}},
        .force = {},
        .warnings = {},
    };

    const double recurrence = 2.0 * std::numbers::pi / config.spacing();
    if (t_total > recurrence) {
        run.warnings.push_back("t_total = " + std::to_string(t_total) + " exceeds the bath recurrence time "
                               + std::to_string(recurrence) + "; reduced dynamics will show revivals");
    }

    const BathSystem system(config, params);
    const auto steps = static_cast<std::size_t>(std::llround(t_total / dt));
    const double resonance = (params.n + 1) * params.omega0;
    const std::size_t n_modes = system.modes();

    Complex alpha = alpha0;
    std::vector<Complex> mu = sample.mu;
    std::vector<Complex> stage(n_modes);
    BathDerivative k1{{}, std::vector<Complex>(n_modes)}, k2 = k1, k3 = k1, k4 = k1;

    std::vector<AmplitudeState> out;
    out.reserve(steps / stride + 1);
    out.push_back({alpha});
    run.force.push_back(system.force(mu));

    for (std::size_t i = 1; i <= steps; ++i) {
        system.derivative(alpha, mu, k1);
        for (std::size_t k = 0; k < n_modes; ++k) stage[k] = mu[k] + 0.5 * dt * k1.mu[k];
        system.derivative(alpha + 0.5 * dt * k1.alpha, stage, k2);
        for (std::size_t k = 0; k < n_modes; ++k) stage[k] = mu[k] + 0.5 * dt * k2.mu[k];
        system.derivative(alpha + 0.5 * dt * k2.alpha, stage, k3);
        for (std::size_t k = 0; k < n_modes; ++k) stage[k] = mu[k] + dt * k3.mu[k];
        system.derivative(alpha + dt * k3.alpha, stage, k4);

        alpha += dt / 6.0 * (k1.alpha + 2.0 * k2.alpha + 2.0 * k3.alpha + k4.alpha);
        for (std::size_t k = 0; k < n_modes; ++k) {
            mu[k] += dt / 6.0 * (k1.mu[k] + 2.0 * k2.mu[k] + 2.0 * k3.mu[k] + k4.mu[k]);
        }
        const double t = static_cast<double>(i) * dt;
        if (escaped(alpha)) throw_blow_up(i, t, "|alpha|");
        if (i % stride == 0) {
            out.push_back({alpha});
            run.force.push_back(system.force(mu) * std::polar(1.0, resonance * t));
        }
    }
    run.system.samples = std::move(out);
    return run;
}

} // namespace qlienard
