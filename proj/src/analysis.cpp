#include "qlienard/analysis.hpp"

#include "qlienard/errors.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace qlienard {

namespace {

int sign_of(double x) noexcept
{
    return (x > 0.0) - (x < 0.0);
}

// Sum of |c_j| u^j: the scale against which P(u) counts as zero.
double magnitude(std::span<const double> c, double u) noexcept
{
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * u + std::abs(*it);
    return acc;
}

// Sign of P just above u = 0: the sign of the lowest nonzero coefficient.
int sign_near_zero(std::span<const double> c) noexcept
{
    for (double x : c)
        if (x != 0.0) return sign_of(x);
    return 0;
}

// Root of a polynomial with a sign change on [lo, hi]; lo_sign is the sign
// at lo (which may be a limiting sign when P(lo) == 0).
double bisect(const RadialPolynomial& p, double lo, double hi, int lo_sign)
{
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const int s = sign_of(p(mid));
        if (s == 0) return mid;
        if (s == lo_sign) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

double newton_polish(const RadialPolynomial& p, double u, double lo, double hi)
{
    for (int iter = 0; iter < 8; ++iter) {
        const double d = p.derivative(u);
        if (d == 0.0) break;
        const double next = u - p(u) / d;
        if (!(next > lo && next < hi)) break;
        if (std::abs(p(next)) >= std::abs(p(u))) break;
        u = next;
    }
    return u;
}

// Positive roots of p in (0, bound], found between consecutive critical
// points (Rolle). Touching roots at critical points are returned too.
std::vector<double> positive_roots(const RadialPolynomial& p, double bound)
{
    const auto& c = p.coeffs();
    if (p.degree() < 1) return {};
    if (p.degree() == 1) {
        const double u = -c[0] / c[1];
        return u > 0.0 ? std::vector<double>{u} : std::vector<double>{};
    }
    std::vector<double> breaks{0.0};
    for (double crit : positive_roots(p.derivative(), bound)) breaks.push_back(crit);
    breaks.push_back(bound);

    std::vector<double> roots;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const double lo = breaks[i];
        const double hi = breaks[i + 1];
        if (!(hi > lo)) continue;
        const int slo = i == 0 ? sign_near_zero(c) : sign_of(p(lo));
        const int shi = sign_of(p(hi));
        if (i > 0 && std::abs(p(lo)) <= 1e-12 * magnitude(c, lo)) {
            roots.push_back(lo);
            continue;
        }
        if (slo != 0 && shi != 0 && slo != shi) {
            roots.push_back(newton_polish(p, bisect(p, lo, hi, slo), lo, hi));
        }
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end(),
                            [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(a, b); }),
                roots.end());
    return roots;
}

double student_t_critical(std::size_t dof)
{
    const boost::math::students_t dist(static_cast<double>(dof));
    return boost::math::quantile(boost::math::complement(dist, 0.025));
}

std::vector<std::vector<double>> post_burn_in_radii(std::span<const Trajectory> ensemble, double burn_in_fraction,
                                                    std::size_t& first_index)
{
    if (ensemble.empty()) throw InsufficientDataError("empty ensemble");
    if (!(burn_in_fraction >= 0.0 && burn_in_fraction < 1.0)) {
        throw std::invalid_argument("burn_in_fraction must lie in [0, 1)");
    }
    const auto& ref = ensemble.front();
    for (const auto& t : ensemble) {
        if (t.size() != ref.size() || t.dt != ref.dt) throw std::invalid_argument("ensemble members differ in length");
    }
    first_index = static_cast<std::size_t>(std::floor(burn_in_fraction * static_cast<double>(ref.size())));
    const double period = 2.0 * std::numbers::pi / ref.meta.params.omega0;
    const double span = static_cast<double>(ref.size() - first_index) * ref.dt;
    if (ref.size() <= first_index + 1 || span < 100.0 * period) {
        throw InsufficientDataError("trajectory too short: " + std::to_string(span / period)
                                    + " periods after burn-in, need 100");
    }
    std::vector<std::vector<double>> out;
    out.reserve(ensemble.size());
    for (const auto& t : ensemble) {
        auto r = t.radii();
        out.emplace_back(r.begin() + static_cast<std::ptrdiff_t>(first_index), r.end());
    }
    return out;
}

} // namespace

std::string_view to_string(Stability s)
{
    switch (s) {
    case Stability::Stable: return "stable";
    case Stability::Unstable: return "unstable";
    case Stability::Degenerate: return "degenerate";
    }
    return "?";
}

std::string_view to_string(BalanceVerdict v)
{
    return v == BalanceVerdict::Preserved ? "preserved" : "destroyed";
}

CycleReport limit_cycle_census(const DampingSpec& spec, const SystemParams& params)
{
    params.validate_against(spec);
    const RadialPolynomial p = radial_polynomial(spec);
    const auto& m = spec.m();
    double bound = 0.0;
    for (std::size_t j = 0; j + 1 < m.size(); ++j) bound = std::max(bound, std::abs(m[j] / m.back()));
    bound = 2.0 * (1.0 + bound);

    const double epsilon = epsilon_of(params, spec);
    const RadialPolynomial dp = p.derivative();
    CycleReport report{.family = spec.family(), .cycles = {}};
    for (double u : positive_roots(p, bound)) {
        LimitCycle cycle;
        cycle.u_root = u;
        cycle.radius = std::sqrt(u);
        cycle.amplitude = 2.0 * cycle.radius;
        cycle.residual = std::abs(p(u));
        const double slope = dp(u);
        if (std::abs(slope) <= 1e-8 * magnitude(dp.coeffs(), u)) {
            cycle.stability = Stability::Degenerate;
        } else {
            cycle.stability = epsilon * slope > 0.0 ? Stability::Stable : Stability::Unstable;
        }
        report.cycles.push_back(cycle);
    }
    return report;
}

double averaging_integral(Family family, std::span<const double> physical, double amplitude,
                          std::size_t quadrature_points)
{
    if (quadrature_points < 8) throw std::invalid_argument("need at least 8 quadrature points");
    const double h = 2.0 * std::numbers::pi / static_cast<double>(quadrature_points);
    double acc = 0.0;
    for (std::size_t k = 0; k < quadrature_points; ++k) {
        const double phi = h * static_cast<double>(k);
        const double s = std::sin(phi);
        const double y = family == Family::Position ? amplitude * std::cos(phi) : amplitude * s;
        acc += horner(physical, y * y) * s * s;
    }
    if (!std::isfinite(acc)) throw std::runtime_error("averaging quadrature did not converge");
    return acc * h;
}

std::vector<AveragedCycle> averaging_amplitude_condition(const DampingSpec& spec, const SystemParams& params,
                                                         std::size_t quadrature_points)
{
    params.validate_against(spec);
    const auto coeffs = spec.physical();
    const Family family = spec.family();
    const double epsilon = epsilon_of(params, spec);
    if (quadrature_points < 8) throw std::invalid_argument("need at least 8 quadrature points");

    // The integrand is a polynomial in y^2 = (R w(phi))^2, so the quadrature
    // factors into per-power moments computed once.
    std::vector<double> moments(coeffs.size(), 0.0);
    const double h = 2.0 * std::numbers::pi / static_cast<double>(quadrature_points);
    for (std::size_t k = 0; k < quadrature_points; ++k) {
        const double phi = h * static_cast<double>(k);
        const double s = std::sin(phi);
        const double w = family == Family::Position ? std::cos(phi) : s;
        double power = s * s;
        for (auto& mom : moments) {
            mom += power;
            power *= w * w;
        }
    }
    std::vector<double> weighted(coeffs.size());
    for (std::size_t j = 0; j < coeffs.size(); ++j) weighted[j] = coeffs[j] * moments[j] * h;
    auto integral = [&](double r) { return horner(weighted, r * r); };

    constexpr double r_min = 1e-4;
    constexpr double r_max = 1e4;
    constexpr std::size_t grid = 1600;
    const double ratio = std::pow(r_max / r_min, 1.0 / static_cast<double>(grid - 1));

    std::vector<AveragedCycle> out;
    double r_prev = r_min;
    double i_prev = integral(r_prev);
    for (std::size_t k = 1; k < grid; ++k) {
        const double r = r_min * std::pow(ratio, static_cast<double>(k));
        const double i_cur = integral(r);
        if (sign_of(i_prev) != 0 && sign_of(i_cur) != 0 && sign_of(i_prev) != sign_of(i_cur)) {
            double lo = r_prev;
            double hi = r;
            const int slo = sign_of(i_prev);
            while (hi - lo > 1e-15 * hi) {
                const double mid = 0.5 * (lo + hi);
                if (mid <= lo || mid >= hi) break;
                const int s = sign_of(integral(mid));
                if (s == 0) {
                    lo = hi = mid;
                    break;
                }
                (s == slo ? lo : hi) = mid;
            }
            const bool rising = sign_of(i_cur) > 0;
            out.push_back({.amplitude = 0.5 * (lo + hi),
                           .stability = (epsilon > 0.0) == rising ? Stability::Stable : Stability::Unstable});
        }
        r_prev = r;
        i_prev = i_cur;
    }
    return out;
}

std::size_t Histogram::total() const noexcept
{
    return std::accumulate(counts.begin(), counts.end(), std::size_t{0});
}

std::vector<double> Histogram::modes(double min_fraction) const
{
    std::vector<double> out;
    const double floor = min_fraction * static_cast<double>(total());
    for (std::size_t b = 0; b < counts.size(); ++b) {
        const std::size_t left = b == 0 ? 0 : counts[b - 1];
        const std::size_t right = b + 1 == counts.size() ? 0 : counts[b + 1];
        if (counts[b] > left && counts[b] >= right && static_cast<double>(counts[b]) >= floor) {
            out.push_back(0.5 * (edges[b] + edges[b + 1]));
        }
    }
    return out;
}

RadialStats radial_statistics(const Trajectory& traj, double burn_in_fraction, std::size_t bins)
{
    return radial_statistics(std::span<const Trajectory>(&traj, 1), burn_in_fraction, bins);
}

RadialStats radial_statistics(std::span<const Trajectory> ensemble, double burn_in_fraction, std::size_t bins)
{
    if (bins == 0) throw std::invalid_argument("bins must be >= 1");
    std::size_t first = 0;
    const auto radii = post_burn_in_radii(ensemble, burn_in_fraction, first);

    RadialStats stats;
    double sum = 0.0;
    double r_max = 0.0;
    double first_half = 0.0;
    double second_half = 0.0;
    std::size_t n_first = 0;
    std::size_t n_second = 0;
    for (const auto& r : radii) {
        const std::size_t half = r.size() / 2;
        for (std::size_t i = 0; i < r.size(); ++i) {
            sum += r[i];
            r_max = std::max(r_max, r[i]);
            if (i < half) {
                first_half += r[i];
                ++n_first;
            } else {
                second_half += r[i];
                ++n_second;
            }
        }
        stats.samples += r.size();
    }
    stats.mean_r = sum / static_cast<double>(stats.samples);
    double ss = 0.0;
    for (const auto& r : radii)
        for (double x : r) ss += (x - stats.mean_r) * (x - stats.mean_r);
    stats.var_r = ss / static_cast<double>(stats.samples);
    first_half /= static_cast<double>(n_first);
    second_half /= static_cast<double>(n_second);
    stats.window_drift = first_half > 0.0 ? std::abs(second_half - first_half) / first_half : 0.0;

    const double top = r_max > 0.0 ? r_max * (1.0 + 1e-9) : 1.0;
    stats.histogram.edges.resize(bins + 1);
    for (std::size_t b = 0; b <= bins; ++b) stats.histogram.edges[b] = top * static_cast<double>(b) / static_cast<double>(bins);
    stats.histogram.counts.assign(bins, 0);
    for (const auto& r : radii) {
        for (double x : r) {
            auto b = static_cast<std::size_t>(x / top * static_cast<double>(bins));
            stats.histogram.counts[std::min(b, bins - 1)] += 1;
        }
    }
    return stats;
}

EnsembleBalance ensemble_balance(std::span<const Trajectory> ensemble, double burn_in_fraction, std::size_t windows)
{
    if (windows < 4) throw std::invalid_argument("need at least 4 windows");
    std::size_t first = 0;
    const auto radii = post_burn_in_radii(ensemble, burn_in_fraction, first);
    const std::size_t length = radii.front().size();
    if (length < windows) throw InsufficientDataError("fewer samples than windows");
    const Trajectory& ref = ensemble.front();

    EnsembleBalance out;
    std::vector<double> window_means;
    for (std::size_t w = 0; w < windows; ++w) {
        const std::size_t lo = w * length / windows;
        const std::size_t hi = (w + 1) * length / windows;
        double s = 0.0;
        double s2 = 0.0;
        std::size_t count = 0;
        for (const auto& r : radii) {
            for (std::size_t i = lo; i < hi; ++i) {
                s += r[i];
                s2 += r[i] * r[i];
                ++count;
            }
        }
        const double mean = s / static_cast<double>(count);
        window_means.push_back(mean);
        out.window_variances.push_back(std::max(0.0, s2 / static_cast<double>(count) - mean * mean));
        out.window_times.push_back(ref.time(first + (lo + hi) / 2));
    }

    double first_half = 0.0;
    double second_half = 0.0;
    for (std::size_t w = 0; w < windows; ++w) (2 * w < windows ? first_half : second_half) += window_means[w];
    first_half /= static_cast<double>((windows + 1) / 2);
    second_half /= static_cast<double>(windows / 2);
    out.mean_r = std::accumulate(window_means.begin(), window_means.end(), 0.0) / static_cast<double>(windows);
    out.window_drift = first_half > 0.0 ? std::abs(second_half - first_half) / first_half : 0.0;

    const auto& t = out.window_times;
    const auto& v = out.window_variances;
    const double t_mean = std::accumulate(t.begin(), t.end(), 0.0) / static_cast<double>(windows);
    const double v_mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(windows);
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t w = 0; w < windows; ++w) {
        sxx += (t[w] - t_mean) * (t[w] - t_mean);
        sxy += (t[w] - t_mean) * (v[w] - v_mean);
    }
    out.variance_slope = sxy / sxx;
    double sse = 0.0;
    for (std::size_t w = 0; w < windows; ++w) {
        const double fit = v_mean + out.variance_slope * (t[w] - t_mean);
        sse += (v[w] - fit) * (v[w] - fit);
    }
    out.slope_stderr = std::sqrt(sse / static_cast<double>(windows - 2) / sxx);
    out.slope_critical = student_t_critical(windows - 2);
    out.slope_consistent_with_zero = std::abs(out.variance_slope) <= out.slope_critical * out.slope_stderr;

    const double growth = std::abs(out.variance_slope) * (t.back() - t.front());
    const bool negligible = growth <= 1e-3 * out.mean_r * out.mean_r;
    out.verdict = out.window_drift < drift_tolerance && (out.slope_consistent_with_zero || negligible)
                      ? BalanceVerdict::Preserved
                      : BalanceVerdict::Destroyed;
    return out;
}

BalanceComparison balance_diagnostic(std::span<const Trajectory> first, std::span<const Trajectory> second,
                                     double burn_in_fraction, std::size_t windows)
{
    if (first.empty() || second.empty()) throw std::invalid_argument("balance_diagnostic: empty ensemble");
    const auto& a = first.front();
    const auto& b = second.front();
    if (!(a.meta.spec == b.meta.spec) || !(a.meta.params == b.meta.params)) {
        throw std::invalid_argument("balance_diagnostic: ensembles use different damping laws or constants");
    }
    if (a.size() != b.size() || a.dt != b.dt || a.representation() != b.representation()) {
        throw std::invalid_argument("balance_diagnostic: ensembles differ in run length or representation");
    }
    return {ensemble_balance(first, burn_in_fraction, windows), ensemble_balance(second, burn_in_fraction, windows)};
}

std::vector<double> poincare_radii(const Trajectory& traj, double section_phase)
{
    const auto& s = traj.phase();
    const double omega0 = traj.meta.params.omega0;
    const Family family = traj.meta.spec.family();
    auto angle = [&](const PhaseState& p) {
        const double a = family == Family::Position ? std::atan2(-p.v / omega0, p.x) : std::atan2(-p.v, omega0 * p.x);
        return std::remainder(a - section_phase, 2.0 * std::numbers::pi);
    };
    std::vector<double> out;
    for (std::size_t i = 1; i < s.size(); ++i) {
        const double a0 = angle(s[i - 1]);
        const double a1 = angle(s[i]);
        if (a0 < 0.0 && a1 >= 0.0 && a1 - a0 < std::numbers::pi) {
            const double w = -a0 / (a1 - a0);
            const PhaseState p{(1.0 - w) * s[i - 1].x + w * s[i].x, (1.0 - w) * s[i - 1].v + w * s[i].v};
            out.push_back(phase_radius(p, omega0, family));
        }
    }
    if (out.empty()) throw InsufficientDataError("trajectory never crosses the Poincare section");
    return out;
}

} // namespace qlienard
