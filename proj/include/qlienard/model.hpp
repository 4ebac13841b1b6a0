#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qlienard {

/// Which phase-space variable the damping polynomial is written in.
enum class Family {
    Position, ///< f(x) x', Lienard / Van der Pol type
    Velocity, ///< F(x') x', Rayleigh type
};

/// Coefficient basis of a damping polynomial, lowest degree first.
enum class Basis {
    A,    ///< physical coefficients of f(x) = sum a_j x^{2j}
    M,    ///< microscopic coefficients of the amplitude equation
    Beta, ///< physical coefficients of F(x') = sum beta_j x'^{2j}
};

std::string_view to_string(Family family);
std::string_view to_string(Basis basis);
Family family_from_string(std::string_view text);
Basis basis_from_string(std::string_view text);

/// Largest nonlinearity order for which the binomial factors are exact.
inline constexpr int max_order = 15;

/// Exact binomial coefficient C(n, k) for 0 <= n <= 2 * max_order.
std::int64_t binomial(int n, int k);

/// a_j = m_j * j / C(2j, j+1) for j >= 1, a_0 = m_0.
std::vector<double> a_from_m(std::span<const double> m);
std::vector<double> m_from_a(std::span<const double> a);

/// beta_j = m_j * j / (C(2j, j+1) * (2j+1)) for j >= 1, beta_0 = m_0.
std::vector<double> beta_from_m(std::span<const double> m);
std::vector<double> m_from_beta(std::span<const double> beta);

/// A polynomial damping law, normalized to the microscopic m basis.
///
/// Immutable after construction. The degree in the phase-space variable is
/// 2n, and the amplitude-space polynomial P(u) = sum m_j u^j has degree n.
class DampingSpec {
public:
    /// Throws DegenerateDegreeError if m.size() < 2, m.back() == 0 or
    /// n > max_order; std::invalid_argument on non-finite entries.
    DampingSpec(Family family, std::vector<double> m);

    static DampingSpec from_basis(Family family, Basis basis, std::span<const double> coeffs);
    static DampingSpec from_a(std::span<const double> a);
    static DampingSpec from_beta(std::span<const double> beta);

    Family family() const noexcept { return family_; }
    int n() const noexcept { return static_cast<int>(m_.size()) - 1; }
    const std::vector<double>& m() const noexcept { return m_; }
    double leading() const noexcept { return m_.back(); }

    /// a for the Position family, beta for the Velocity family.
    std::vector<double> physical() const;

    friend bool operator==(const DampingSpec&, const DampingSpec&) = default;

private:
    Family family_;
    std::vector<double> m_;
};

/// Physical constants of a run, with hbar = K = 1.
struct SystemParams {
    double omega0 = 1.0;
    double gamma = 1.0; ///< damping rate gamma_{n+1}
    int n = 1;
    double theta = 0.0; ///< K T

    /// Throws std::invalid_argument unless omega0 > 0, gamma > 0, n >= 1,
    /// theta >= 0 (all finite).
    void validate() const;

    /// validate(), plus n must match spec.n().
    void validate_against(const DampingSpec& spec) const;

    friend bool operator==(const SystemParams&, const SystemParams&) = default;
};

/// P(u) = sum p_j u^j with u = |alpha|^2.
class RadialPolynomial {
public:
    explicit RadialPolynomial(std::vector<double> coeffs);

    const std::vector<double>& coeffs() const noexcept { return coeffs_; }
    int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }

    double operator()(double u) const noexcept;
    double derivative(double u) const noexcept;
    RadialPolynomial derivative() const;

private:
    std::vector<double> coeffs_;
};

RadialPolynomial radial_polynomial(const DampingSpec& spec);

/// gamma_{n+1} / m_n, the prefactor epsilon of the second-order equation.
double epsilon_of(const SystemParams& params, const DampingSpec& spec);

/// Inverse of epsilon_of: the gamma that yields the requested epsilon.
double gamma_for_epsilon(double epsilon, const DampingSpec& spec);

/// Evaluates sum c_j y^j by Horner's rule.
double horner(std::span<const double> coeffs, double y) noexcept;

} // namespace qlienard
