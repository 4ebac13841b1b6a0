#include "qlienard/analysis.hpp"
#include "qlienard/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

using namespace qlienard;

namespace {

// Real roots of c3 u^3 + c2 u^2 + c1 u + c0 by the trigonometric method
// (three real roots assumed), ascending.
std::vector<double> cubic_roots(double c3, double c2, double c1, double c0)
{
    const double b = c2 / c3, c = c1 / c3, d = c0 / c3;
    const double p = c - b * b / 3.0;
    const double q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
    const double m = 2.0 * std::sqrt(-p / 3.0);
    const double phi = std::acos(3.0 * q / (p * m)) / 3.0;
    std::vector<double> r;
    for (int k = 2; k >= 0; --k) r.push_back(m * std::cos(phi - 2.0 * std::numbers::pi * k / 3.0) - b / 3.0);
    std::sort(r.begin(), r.end());
    return r;
}

Trajectory synthetic(std::vector<double> radii, double dt)
{
    std::vector<AmplitudeState> s;
    for (double r : radii) s.push_back({{r, 0.0}});
    Trajectory t{.t0 = 0.0, .dt = dt, .samples = std::move(s), .meta = {.spec = DampingSpec(Family::Position, {-1, 1})}};
    t.meta.representation = Representation::Amplitude;
    return t;
}

} // namespace

TEST_CASE("Van der Pol census")
{
    const auto report = limit_cycle_census(DampingSpec(Family::Position, {-1, 1}), {.gamma = 0.3});
    REQUIRE(report.cycles.size() == 1);
    CHECK(report.cycles[0].u_root == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(report.cycles[0].amplitude == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(report.cycles[0].stable());
}

TEST_CASE("sextic census matches the closed-form cubic roots")
{
    const auto spec = DampingSpec::from_a(std::vector<double>{-1, 1, -0.144, 0.005});
    const auto report = limit_cycle_census(spec, {.gamma = 2.5e-4, .n = 3});
    const auto roots = cubic_roots(0.025, -0.288, 1.0, -1.0);
    REQUIRE(report.cycles.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(report.cycles[i].u_root == doctest::Approx(roots[i]).epsilon(1e-12));
        CHECK(report.cycles[i].amplitude == doctest::Approx(2.0 * std::sqrt(roots[i])).epsilon(1e-12));
    }
    CHECK(report.cycles[0].stability == Stability::Stable);
    CHECK(report.cycles[1].stability == Stability::Unstable);
    CHECK(report.cycles[2].stability == Stability::Stable);
    CHECK(report.cycles[0].amplitude == doctest::Approx(2.639).epsilon(1e-3));
}

TEST_CASE("census edge cases")
{
    // double root
    const auto touching = limit_cycle_census(DampingSpec(Family::Position, {1, -2, 1}), {.gamma = 1.0, .n = 2});
    REQUIRE(touching.cycles.size() == 1);
    CHECK(touching.cycles[0].stability == Stability::Degenerate);
    CHECK(touching.cycles[0].u_root == doctest::Approx(1.0).epsilon(1e-6));

    CHECK(limit_cycle_census(DampingSpec(Family::Position, {1, 1}), {}).cycles.empty());

    // table row 2: the root at u = 0 is the fixed point, not a cycle
    const auto row2 = limit_cycle_census(DampingSpec(Family::Position, {0, -1, 2}), {.n = 2});
    REQUIRE(row2.cycles.size() == 1);
    CHECK(row2.cycles[0].u_root == doctest::Approx(0.5));
    CHECK(row2.cycles[0].stable());

    // gamma / m_n normalizes the leading sign away: P / m_n = u - 1 either way
    const auto flipped = limit_cycle_census(DampingSpec(Family::Position, {1, -1}), {});
    REQUIRE(flipped.cycles.size() == 1);
    CHECK(flipped.cycles[0].stability == Stability::Stable);
}

TEST_CASE("census is invariant under rescaling m and gamma together")
{
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> scale(0.1, 10.0);
    const DampingSpec base(Family::Position, {-1, 1, -0.288, 0.025});
    const auto ref = limit_cycle_census(base, {.gamma = 1.0, .n = 3});
    for (int i = 0; i < 10; ++i) {
        const double c = scale(gen);
        std::vector<double> m = base.m();
        for (auto& x : m) x *= c;
        const auto scaled = limit_cycle_census(DampingSpec(Family::Position, m), {.gamma = c, .n = 3});
        REQUIRE(scaled.cycles.size() == ref.cycles.size());
        for (std::size_t k = 0; k < ref.cycles.size(); ++k) {
            CHECK(scaled.cycles[k].u_root == doctest::Approx(ref.cycles[k].u_root).epsilon(1e-12));
            CHECK(scaled.cycles[k].stability == ref.cycles[k].stability);
        }
    }
}

TEST_CASE("averaging oracle on classical oscillators")
{
    const auto vdp = averaging_amplitude_condition(DampingSpec::from_a(std::vector<double>{-1, 1}), {});
    REQUIRE(vdp.size() == 1);
    CHECK(vdp[0].amplitude == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(vdp[0].stability == Stability::Stable);

    const auto ray = averaging_amplitude_condition(DampingSpec::from_beta(std::vector<double>{-1, 1}), {.gamma = 3.0});
    REQUIRE(ray.size() == 1);
    CHECK(ray[0].amplitude == doctest::Approx(2.0 / std::sqrt(3.0)).epsilon(1e-9));

    // f = x^2 - 1 averaged over a circle of radius 2: int (4cos^2 - 1) sin^2 = pi/4*4 - pi = 0
    const std::vector<double> a = {-1, 1};
    CHECK(std::abs(averaging_integral(Family::Position, a, 2.0)) < 1e-12);
    CHECK_THROWS_AS(averaging_integral(Family::Position, a, 1.0, 4), std::invalid_argument);
}

TEST_CASE("radial statistics of a bimodal series")
{
    std::mt19937_64 gen(9);
    std::normal_distribution<double> inner(1.0, 0.05), outer(3.0, 0.05);
    std::vector<double> r;
    for (int i = 0; i < 40000; ++i) r.push_back(i % 2 ? inner(gen) : outer(gen));
    const auto traj = synthetic(r, 0.1); // 4000 time units
    const auto stats = radial_statistics(traj);
    CHECK(stats.mean_r == doctest::Approx(2.0).epsilon(0.01));
    CHECK(stats.var_r == doctest::Approx(1.0025).epsilon(0.02));
    CHECK(stats.samples == 28000);
    CHECK(stats.window_drift < 0.01);
    CHECK(stats.histogram.total() == stats.samples);
    const auto modes = stats.histogram.modes(0.05);
    REQUIRE(modes.size() == 2);
    CHECK(modes[0] == doctest::Approx(1.0).epsilon(0.05));
    CHECK(modes[1] == doctest::Approx(3.0).epsilon(0.05));

    CHECK_THROWS_AS(radial_statistics(synthetic(std::vector<double>(100, 1.0), 0.1)), InsufficientDataError);
}

TEST_CASE("ensemble balance separates stationary from spreading ensembles")
{
    std::mt19937_64 gen(21);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::vector<Trajectory> steady, spreading;
    for (int m = 0; m < 20; ++m) {
        std::vector<double> a, b;
        double walk = 0.0;
        for (int i = 0; i < 20000; ++i) {
            a.push_back(2.0 + 0.1 * noise(gen));
            walk += 0.02 * noise(gen);
            b.push_back(2.0 + walk);
        }
        steady.push_back(synthetic(a, 0.1));
        spreading.push_back(synthetic(b, 0.1));
    }
    const auto ok = ensemble_balance(steady);
    CHECK(ok.verdict == BalanceVerdict::Preserved);
    CHECK(ok.window_times.size() == 10);
    const auto bad = ensemble_balance(spreading);
    CHECK(bad.verdict == BalanceVerdict::Destroyed);
    CHECK(bad.variance_slope > 0.0);

    const auto cmp = balance_diagnostic(steady, spreading);
    CHECK(cmp.first.verdict == BalanceVerdict::Preserved);
    CHECK(cmp.second.verdict == BalanceVerdict::Destroyed);

    std::vector<Trajectory> other = steady;
    for (auto& t : other) t.meta.params.gamma = 2.0;
    CHECK_THROWS_AS(balance_diagnostic(steady, other), std::invalid_argument);
}

TEST_CASE("Poincare section of circular motion")
{
    std::vector<PhaseState> s;
    const double dt = 0.01;
    for (int i = 0; i < 5000; ++i) s.push_back({3.0 * std::cos(i * dt), -3.0 * std::sin(i * dt)});
    Trajectory t{.t0 = 0.0, .dt = dt, .samples = s, .meta = {.spec = DampingSpec(Family::Position, {-1, 1})}};
    t.meta.representation = Representation::Phase;
    const auto radii = poincare_radii(t);
    CHECK(radii.size() == 7);
    for (double r : radii) CHECK(r == doctest::Approx(1.5).epsilon(1e-4));
    CHECK(poincare_radii(t, std::numbers::pi / 2).size() >= 7);

    CHECK_THROWS_AS(poincare_radii(synthetic({1.0, 1.0}, 0.1)), std::logic_error);
}
