#include "qlienard/model.hpp"

#include "qlienard/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qlienard {

namespace {

void check_leading(std::span<const double> coeffs, std::string_view what)
{
    if (coeffs.size() < 2) {
        throw DegenerateDegreeError(std::string(what) + ": need at least two coefficients (n >= 1)");
    }
    if (coeffs.size() - 1 > static_cast<std::size_t>(max_order)) {
        throw DegenerateDegreeError(std::string(what) + ": nonlinearity order exceeds "
                                    + std::to_string(max_order));
    }
    if (coeffs.back() == 0.0) {
        throw DegenerateDegreeError(std::string(what) + ": leading coefficient is zero");
    }
    for (double c : coeffs) {
        if (!std::isfinite(c)) {
            throw std::invalid_argument(std::string(what) + ": non-finite coefficient");
        }
    }
}

} // namespace

std::string_view to_string(Family family)
{
    return family == Family::Position ? "position" : "velocity";
}

std::string_view to_string(Basis basis)
{
    switch (basis) {
    case Basis::A: return "a";
    case Basis::M: return "m";
    case Basis::Beta: return "beta";
    }
    return "?";
}

Family family_from_string(std::string_view text)
{
    if (text == "position") return Family::Position;
    if (text == "velocity") return Family::Velocity;
    throw std::invalid_argument("unknown family '" + std::string(text) + "' (expected position|velocity)");
}

Basis basis_from_string(std::string_view text)
{
    if (text == "a") return Basis::A;
    if (text == "m") return Basis::M;
    if (text == "beta") return Basis::Beta;
    throw std::invalid_argument("unknown basis '" + std::string(text) + "' (expected a|m|beta)");
}

std::int64_t binomial(int n, int k)
{
    if (n < 0 || n > 2 * max_order) {
        throw DegenerateDegreeError("binomial: n = " + std::to_string(n) + " outside exact range");
    }
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    std::int64_t result = 1;
    for (int i = 1; i <= k; ++i) {
        // exact at every step: result * (n - k + i) is divisible by i
        result = result * (n - k + i) / i;
    }
    return result;
}

std::vector<double> a_from_m(std::span<const double> m)
{
    check_leading(m, "a_from_m");
    std::vector<double> a(m.size());
    a[0] = m[0];
    for (std::size_t j = 1; j < m.size(); ++j) {
        const int jj = static_cast<int>(j);
        a[j] = m[j] * jj / static_cast<double>(binomial(2 * jj, jj + 1));
    }
    return a;
}

std::vector<double> m_from_a(std::span<const double> a)
{
    check_leading(a, "m_from_a");
    std::vector<double> m(a.size());
    m[0] = a[0];
    for (std::size_t j = 1; j < a.size(); ++j) {
        const int jj = static_cast<int>(j);
        m[j] = a[j] * static_cast<double>(binomial(2 * jj, jj + 1)) / jj;
    }
    return m;
}

std::vector<double> beta_from_m(std::span<const double> m)
{
    check_leading(m, "beta_from_m");
    std::vector<double> beta(m.size());
    beta[0] = m[0];
    for (std::size_t j = 1; j < m.size(); ++j) {
        const int jj = static_cast<int>(j);
        beta[j] = m[j] * jj / (static_cast<double>(binomial(2 * jj, jj + 1)) * (2 * jj + 1));
    }
    return beta;
}

std::vector<double> m_from_beta(std::span<const double> beta)
{
    check_leading(beta, "m_from_beta");
    std::vector<double> m(beta.size());
    m[0] = beta[0];
    for (std::size_t j = 1; j < beta.size(); ++j) {
        const int jj = static_cast<int>(j);
        m[j] = beta[j] * static_cast<double>(binomial(2 * jj, jj + 1)) * (2 * jj + 1) / jj;
    }
    return m;
}

DampingSpec::DampingSpec(Family family, std::vector<double> m) : family_(family), m_(std::move(m))
{
    check_leading(m_, "DampingSpec");
}

DampingSpec DampingSpec::from_basis(Family family, Basis basis, std::span<const double> coeffs)
{
    switch (basis) {
    case Basis::M:
        return DampingSpec(family, std::vector<double>(coeffs.begin(), coeffs.end()));
    case Basis::A:
        if (family != Family::Position) {
            throw std::invalid_argument("basis 'a' describes f(x); use family 'position'");
        }
        return from_a(coeffs);
    case Basis::Beta:
        if (family != Family::Velocity) {
            throw std::invalid_argument("basis 'beta' describes F(x'); use family 'velocity'");
        }
        return from_beta(coeffs);
    }
    throw std::invalid_argument("unknown basis");
}

DampingSpec DampingSpec::from_a(std::span<const double> a)
{
    return DampingSpec(Family::Position, m_from_a(a));
}

DampingSpec DampingSpec::from_beta(std::span<const double> beta)
{
    return DampingSpec(Family::Velocity, m_from_beta(beta));
}

std::vector<double> DampingSpec::physical() const
{
    return family_ == Family::Position ? a_from_m(m_) : beta_from_m(m_);
}

void SystemParams::validate() const
{
    if (!(std::isfinite(omega0) && omega0 > 0.0)) throw std::invalid_argument("omega0 must be > 0");
    if (!(std::isfinite(gamma) && gamma > 0.0)) throw std::invalid_argument("gamma must be > 0");
    if (n < 1 || n > max_order) throw std::invalid_argument("n must be in [1, 15]");
    if (!(std::isfinite(theta) && theta >= 0.0)) throw std::invalid_argument("theta must be >= 0");
}

void SystemParams::validate_against(const DampingSpec& spec) const
{
    validate();
    if (n != spec.n()) {
        throw std::invalid_argument("params.n = " + std::to_string(n) + " does not match damping order "
                                    + std::to_string(spec.n()));
    }
}

double horner(std::span<const double> coeffs, double y) noexcept
{
    double acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * y + *it;
    return acc;
}

RadialPolynomial::RadialPolynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs))
{
    if (coeffs_.empty()) coeffs_.push_back(0.0);
}

double RadialPolynomial::operator()(double u) const noexcept
{
    return horner(coeffs_, u);
}

double RadialPolynomial::derivative(double u) const noexcept
{
    double acc = 0.0;
    for (std::size_t j = coeffs_.size() - 1; j >= 1; --j) acc = acc * u + static_cast<double>(j) * coeffs_[j];
    return acc;
}

RadialPolynomial RadialPolynomial::derivative() const
{
    std::vector<double> d;
    for (std::size_t j = 1; j < coeffs_.size(); ++j) d.push_back(static_cast<double>(j) * coeffs_[j]);
    return RadialPolynomial(std::move(d));
}

RadialPolynomial radial_polynomial(const DampingSpec& spec)
{
    return RadialPolynomial(spec.m());
}

double epsilon_of(const SystemParams& params, const DampingSpec& spec)
{
    return params.gamma / spec.leading();
}

double gamma_for_epsilon(double epsilon, const DampingSpec& spec)
{
    return epsilon * spec.leading();
}

} // namespace qlienard
