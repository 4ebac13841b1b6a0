#include "qlienard/dynamics.hpp"
#include "qlienard/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

using namespace qlienard;

namespace {

const DampingSpec van_der_pol(Family::Position, {-1.0, 1.0});
constexpr double period = 2.0 * std::numbers::pi;

IntegratorScheme heun(double dt = default_dt(1.0))
{
    return {.kind = SchemeKind::Heun, .dt = dt, .allow_coarse_dt = true};
}

} // namespace

TEST_CASE("the limit cycle is invariant for the amplitude equation")
{
    const Oscillator osc(van_der_pol, {.gamma = 0.1}, NoiseSpec::none());
    const auto traj = integrate(osc, heun(), AmplitudeState{{0.6, 0.8}}, Representation::Amplitude, 50.0, 1, 100);
    for (double r : traj.radii()) CHECK(r == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("positive definite damping decays monotonically")
{
    const Oscillator osc(DampingSpec(Family::Position, {1.0, 1.0}), {.gamma = 0.5}, NoiseSpec::none());
    const auto r = integrate(osc, heun(), AmplitudeState{{2.0, 0.0}}, Representation::Amplitude, 20.0, 1, 10).radii();
    for (std::size_t i = 1; i < r.size(); ++i) CHECK(r[i] < r[i - 1]);
    CHECK(r.back() < 0.01);
}

TEST_CASE("zero intensity reproduces the deterministic run bit for bit")
{
    const SystemParams p{.gamma = 0.2};
    const Oscillator quiet(van_der_pol, p, NoiseSpec::external(0.0));
    const Oscillator none(van_der_pol, p, NoiseSpec::none());
    for (auto rep : {Representation::Amplitude, Representation::Phase}) {
        const auto a = integrate(quiet, heun(), PhaseState{0.3, 0.0}, rep, 30.0, 1);
        const auto b = integrate(none, heun(), PhaseState{0.3, 0.0}, rep, 30.0, 99);
        CHECK(a.radii() == b.radii());
    }
}

TEST_CASE("seeded noisy runs are reproducible")
{
    const Oscillator osc(van_der_pol, {.gamma = 0.1, .theta = 2.0}, NoiseSpec::internal());
    const auto a = integrate(osc, heun(), PhaseState{1.0, 0.0}, Representation::Amplitude, 20.0, 5);
    const auto b = integrate(osc, heun(), PhaseState{1.0, 0.0}, Representation::Amplitude, 20.0, 5);
    const auto c = integrate(osc, heun(), PhaseState{1.0, 0.0}, Representation::Amplitude, 20.0, 6);
    CHECK(a.amplitude() == b.amplitude());
    CHECK(a.amplitude() != c.amplitude());
    CHECK(a.meta.seed == 5);
    CHECK(a.meta.scheme == "heun");
}

TEST_CASE("weakly damped harmonic motion keeps its energy")
{
    const Oscillator osc(DampingSpec(Family::Position, {0.0, 1.0}), {.omega0 = 2.0, .gamma = 1e-12},
                         NoiseSpec::none());
    const auto traj = integrate(osc, heun(default_dt(2.0)), PhaseState{1.0, 0.0}, Representation::Phase, 10.0, 1);
    for (const auto& s : traj.phase()) CHECK(4.0 * s.x * s.x + s.v * s.v == doctest::Approx(4.0).epsilon(1e-6));
    // x(t) = cos(2t)
    const auto& last = traj.phase().back();
    CHECK(std::abs(last.x - std::cos(2.0 * traj.time(traj.size() - 1))) < 1e-3);
}

TEST_CASE("Heun converges at second order on smooth problems")
{
    const Oscillator osc(van_der_pol, {.gamma = 0.5}, NoiseSpec::none());
    auto end_state = [&](double dt) {
        return integrate(osc, heun(dt), PhaseState{1.0, 0.5}, Representation::Phase, 5.0, 1).phase().back();
    };
    const auto coarse = end_state(0.02), mid = end_state(0.01), fine = end_state(0.005);
    const double e1 = std::hypot(coarse.x - mid.x, coarse.v - mid.v);
    const double e2 = std::hypot(mid.x - fine.x, mid.v - fine.v);
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.1));

    const Oscillator amp(van_der_pol, {.gamma = 0.5}, NoiseSpec::none());
    auto end_alpha = [&](SchemeKind kind, double dt) {
        const IntegratorScheme s{.kind = kind, .dt = dt, .allow_coarse_dt = true};
        return integrate(amp, s, AmplitudeState{{0.2, 0.0}}, Representation::Amplitude, 4.0, 1).amplitude().back().alpha;
    };
    const double em1 = std::abs(end_alpha(SchemeKind::EulerMaruyama, 0.02) - end_alpha(SchemeKind::EulerMaruyama, 0.01));
    const double em2 = std::abs(end_alpha(SchemeKind::EulerMaruyama, 0.01) - end_alpha(SchemeKind::EulerMaruyama, 0.005));
    CHECK(em1 / em2 == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("representation maps invert each other")
{
    for (Family family : {Family::Position, Family::Velocity}) {
        const PhaseState s{0.7, -1.3};
        const auto a = phase_to_amplitude(s, 0.4, 1.7, family);
        const auto back = amplitude_to_phase(a.alpha, 0.4, 1.7, family);
        CHECK(back.x == doctest::Approx(s.x).epsilon(1e-14));
        CHECK(back.v == doctest::Approx(s.v).epsilon(1e-14));
        CHECK(phase_radius(s, 1.7, family) == doctest::Approx(std::abs(a.alpha)).epsilon(1e-14));
    }
    const auto p = amplitude_to_phase({1.0, 0.0}, 0.0, 2.0, Family::Position);
    CHECK(p.x == 2.0);
    CHECK(p.v == doctest::Approx(0.0));
    const auto q = amplitude_to_phase({1.0, 0.0}, 0.0, 2.0, Family::Velocity);
    CHECK(q.x == 1.0);
    // a quarter period later the point has moved to negative velocity
    const auto r = amplitude_to_phase({1.0, 0.0}, period / 4.0, 1.0, Family::Position);
    CHECK(r.x == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(r.v == doctest::Approx(-2.0));
}

TEST_CASE("integration guards")
{
    const Oscillator vdp(van_der_pol, {.gamma = 1.0}, NoiseSpec::none());
    CHECK_THROWS_AS(integrate(vdp, heun(), AmplitudeState{{2e12, 0.0}}, Representation::Amplitude, 10.0, 1),
                    BlowUpError);
    CHECK_THROWS_AS(integrate(vdp, heun(), PhaseState{0.0, 2e12}, Representation::Phase, 10.0, 1), BlowUpError);

    const IntegratorScheme coarse{.kind = SchemeKind::Heun, .dt = 0.1};
    CHECK_THROWS_AS(coarse.validate(1.0), std::invalid_argument);
    const Oscillator osc(van_der_pol, {}, NoiseSpec::none());
    CHECK_THROWS_AS(integrate(osc, heun(), PhaseState{}, Representation::Phase, 1.0, 1, 0), std::invalid_argument);
    CHECK_THROWS_AS(integrate(osc, heun(), PhaseState{}, Representation::Phase, -1.0, 1), std::invalid_argument);
}

TEST_CASE("strong multiplicative noise is refined rather than diverging")
{
    const Oscillator osc(DampingSpec(Family::Velocity, {-1.0, 3.0}), {.gamma = 3.0, .theta = 10.0},
                         NoiseSpec::internal());
    CHECK_NOTHROW(integrate(osc, heun(), PhaseState{0.1, 0.0}, Representation::Amplitude, 200.0, 1));
}

TEST_CASE("uncoupled bath leaves the system in free rotation")
{
    const SystemParams params{.omega0 = 1.0, .gamma = 0.01, .n = 1};
    BathConfig bath = flat_bath(params, 32, 0.5);
    bath.coupling = [](double) { return 0.0; };
    const auto sample = sample_wigner_bath(bath, 0.0, 1);
    const auto run = integrate_bath_system(sample, bath, params, {1.0, 0.0}, 10.0, 0.01, 10);
    const auto& a = run.system.amplitude();
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(std::abs(a[i].alpha - std::polar(1.0, -run.system.time(i))) < 1e-9);
        CHECK(std::abs(run.force[i]) == 0.0);
    }
}

TEST_CASE("bath force at rest equals the synthesized noise")
{
    const SystemParams params{.omega0 = 1.0, .gamma = 0.01, .n = 1, .theta = 1.0};
    const auto bath = flat_bath(params, 64, 0.5);
    const auto sample = sample_wigner_bath(bath, params.theta, 4);
    const auto run = integrate_bath_system(sample, bath, params, {0.0, 0.0}, 20.0, 0.01, 10);
    const auto f = synthesize_bath_noise(sample, bath, params, {.t0 = 0.0, .dt = run.system.dt, .count = run.force.size()});
    for (std::size_t i = 0; i < f.size(); ++i) CHECK(std::abs(run.force[i] - f[i]) < 1e-8 * (1.0 + std::abs(f[i])));

    CHECK_THROWS_AS(integrate_bath_system(sample, bath, params, {}, 1.0, 1.0), std::invalid_argument);
    const auto long_run = integrate_bath_system(sample, bath, params, {}, 500.0, 0.02, 100);
    CHECK_FALSE(long_run.warnings.empty());
}
