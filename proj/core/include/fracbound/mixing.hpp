#pragma once

#include "fracbound/quadrature.hpp"

#include <complex>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

namespace fracbound {

/// Point mass of the mixing measure at order `beta`.
struct Atom {
    double beta = 0.5;
    double weight = 1.0;
};

/// Absolutely continuous part p(beta) d(beta) of the mixing measure,
/// supported on [beta0, beta1].
class DensityComponent {
public:
    enum class Form { Tabulated, Constant, Polynomial };

    /// Piecewise-linear interpolation through (beta, p) nodes. Support is
    /// [first node, last node].
    static DensityComponent tabulated(std::vector<std::pair<double, double>> nodes);
    static DensityComponent constant(double beta0, double beta1, double value);
    /// p(beta) = sum_k coeffs[k] * beta^k on [beta0, beta1].
    static DensityComponent polynomial(double beta0, double beta1, std::vector<double> coeffs);

    double operator()(double beta) const;

    double beta0() const noexcept { return beta0_; }
    double beta1() const noexcept { return beta1_; }
    Form form() const noexcept { return form_; }
    const std::vector<std::pair<double, double>>& nodes() const noexcept { return nodes_; }
    const std::vector<double>& coefficients() const noexcept { return coeffs_; }

    /// Panel boundaries for quadrature (kinks of the tabulated form).
    std::vector<double> breakpoints() const;

    bool identically_zero() const;

private:
    DensityComponent() = default;

    Form form_ = Form::Constant;
    double beta0_ = 0.0;
    double beta1_ = 0.0;
    std::vector<std::pair<double, double>> nodes_;
    std::vector<double> coeffs_;
};

/// Discrete rule in beta for nu(d beta) = Gamma(1 - beta) mu(d beta): atoms
/// exactly, the density part by fixed Gauss-Legendre nodes.
struct OrderGrid {
    std::vector<double> beta;
    std::vector<double> nu;

    double psi(double s) const;
    long double psi(long double s) const;
    std::complex<double> psi(std::complex<double> s) const;
    std::size_t size() const noexcept { return beta.size(); }
};

/// Mixing measure mu(d beta) on (0, 1): finitely many atoms plus an optional
/// density. Immutable after construction.
class MixingMeasure {
public:
    /// Orders closer than this to 0 or 1 are rejected.
    static constexpr double kBoundaryGuard = 1e-6;

    explicit MixingMeasure(std::vector<Atom> atoms,
                           std::optional<DensityComponent> density = std::nullopt,
                           QuadratureOptions quadrature = {});

    static MixingMeasure single_atom(double beta, double weight = 1.0) {
        return MixingMeasure({Atom{beta, weight}});
    }

    const std::vector<Atom>& atoms() const noexcept { return atoms_; }
    const std::optional<DensityComponent>& density() const noexcept { return density_; }
    const QuadratureOptions& quadrature() const noexcept { return quadrature_; }

    bool has_density() const noexcept { return density_.has_value(); }
    bool atoms_only() const noexcept { return !density_.has_value(); }
    bool density_only() const noexcept { return atoms_.empty() && density_.has_value(); }

    double total_mass() const;
    /// int (1 - beta)^{-1} mu(d beta); finite for every accepted measure.
    double admissibility_integral() const;

    /// int F(beta) p(beta) d(beta) over the density support by adaptive
    /// quadrature (0 when there is no density).
    QuadratureResult integrate_density(const std::function<double(double)>& f) const;

    /// Sum over atoms of F(beta_j) w_j plus the density integral.
    double integrate(const std::function<double(double)>& f) const;

    /// Fixed rule for nu; `density_nodes` Gauss points spread over the
    /// density panels (at least 4 per panel).
    OrderGrid order_grid(std::size_t density_nodes = 64) const;

private:
    std::vector<Atom> atoms_;
    std::optional<DensityComponent> density_;
    QuadratureOptions quadrature_;
};

/// Laplace exponent psi_W(s) = int s^beta Gamma(1 - beta) mu(d beta).
double psi_w(const MixingMeasure& m, double s);

/// Levy tail phi_W(t, inf) = int t^{-beta} mu(d beta).
double levy_tail(const MixingMeasure& m, double t);

/// C = int sin(beta pi) Gamma(1 - beta) p(beta) d(beta) over the density.
double constant_c(const MixingMeasure& m);

/// Bounds of the form |d/dt h(t, lambda)| <= b(lambda) k(t), b(lambda) = lambda.
class DerivativeBounds {
public:
    enum class Kind { Density, Atom };

    explicit DerivativeBounds(const MixingMeasure& m);

    Kind kind() const noexcept { return kind_; }
    /// The density-case constant; 0 in the atom case.
    double c() const noexcept { return c_; }

    double k(double t) const;
    double b(double lambda) const noexcept { return lambda; }

private:
    Kind kind_;
    double c_ = 0.0;
    double beta0_ = 0.0;
    double beta1_ = 0.0;
    // (beta_j, c_j^{beta_j}) for each atom
    std::vector<std::pair<double, double>> atom_terms_;
};

/// k(t) from DerivativeBounds: the density formula
///   [C pi]^{-1} [Gamma(1-beta1) t^{beta1-1} + Gamma(1-beta0) t^{beta0-1}],
/// or for atoms min_j (c_j^{beta_j} sin(beta_j pi))^{-1} t^{beta_j - 1}.
double k_bound(const MixingMeasure& m, double t);

}  // namespace fracbound
