#pragma once

// Reference values computed independently of the library's own routes.

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/binomial.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>

namespace oracle {

using mp300 = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<300>>;
using mp50 = boost::multiprecision::cpp_bin_float_50;

/// E_beta(-x) by its power series in 300-digit arithmetic. Valid while the
/// largest term stays far below 10^250.
inline double ml_series(double beta, double x) {
    const mp300 b(beta);
    const mp300 z = -mp300(x);
    mp300 sum = 0;
    mp300 zk = 1;
    for (int k = 0; k < 5000; ++k) {
        const mp300 term = zk / boost::math::tgamma(b * k + 1);
        sum += term;
        if (k > 10 && abs(term) < mp300("1e-60")) break;
        zk *= z;
    }
    return static_cast<double>(sum);
}

/// e^{x^2} erfc(x) = E_{1/2}(-x).
inline double erfcx(double x) {
    const mp50 v(x);
    return static_cast<double>(exp(v * v) * boost::math::erfc(v));
}

/// h(t, lambda) for psi(s) = a s^beta from the Bromwich integral collapsed onto
/// the negative real axis:
///   (1/pi) int_0^inf e^{-rt} lambda a r^{beta-1} sin(beta pi) / |lambda + a r^beta e^{i beta pi}|^2 dr.
inline double h_single_atom_cut(double beta, double a, double t, double lambda) {
    if (t == 0.0 || lambda == 0.0) return 1.0;
    const double sb = std::sin(beta * std::numbers::pi);
    const double cb = std::cos(beta * std::numbers::pi);
    auto f = [&](double r) {
        if (r == 0.0) return 0.0;
        const double rb = a * std::pow(r, beta);
        return std::exp(-r * t) * lambda * rb / r * sb / (lambda * lambda + 2.0 * lambda * rb * cb + rb * rb);
    };
    boost::math::quadrature::exp_sinh<double> integrator;
    return integrator.integrate(f, 0.0, std::numeric_limits<double>::infinity()) / std::numbers::pi;
}

/// Abate-Whitt Fourier-series inversion with Euler summation, in long double.
/// Discretization error ~ e^{-A}.
inline double invert_euler(const std::function<std::complex<long double>(std::complex<long double>)>& F, double t,
                           int n = 60, int m = 20, long double A = 28.0L) {
    const long double pi = boost::math::constants::pi<long double>();
    const long double tt = t;
    auto term = [&](int k) {
        const std::complex<long double> s((A / (2 * tt)), k * pi / tt);
        return std::real(F(s));
    };
    std::vector<long double> partial(n + m + 1);
    long double acc = term(0) / 2;
    partial[0] = acc;
    for (int k = 1; k <= n + m; ++k) {
        acc += (k % 2 ? -1.0L : 1.0L) * term(k);
        partial[k] = acc;
    }
    long double euler = 0.0L;
    for (int j = 0; j <= m; ++j) {
        euler += boost::math::binomial_coefficient<long double>(m, j) * partial[n + j];
    }
    euler /= std::pow(2.0L, m);
    return static_cast<double>(std::exp(A / 2) / tt * euler);
}

/// Laplace exponent on the complex plane for atoms (beta_j, nu_j) plus a
/// density nu(beta) on [b0, b1], integrated by a 30-point Gauss rule per panel.
struct Exponent {
    std::vector<std::pair<double, double>> atoms;  // (beta, w Gamma(1-beta))
    std::function<double(double)> density_nu;      // Gamma(1-beta) p(beta), may be empty
    double b0 = 0.0;
    double b1 = 0.0;
    int panels = 8;

    std::complex<long double> operator()(std::complex<long double> s) const {
        std::complex<long double> out = 0.0L;
        const auto ls = std::log(s);
        for (auto [b, nu] : atoms) out += static_cast<long double>(nu) * std::exp(static_cast<long double>(b) * ls);
        if (density_nu) {
            const double w = (b1 - b0) / panels;
            for (int p = 0; p < panels; ++p) {
                const double lo = b0 + p * w;
                auto re = [&](long double b) {
                    return static_cast<long double>(density_nu(static_cast<double>(b))) * std::real(std::exp(b * ls));
                };
                auto im = [&](long double b) {
                    return static_cast<long double>(density_nu(static_cast<double>(b))) * std::imag(std::exp(b * ls));
                };
                using G = boost::math::quadrature::gauss<long double, 30>;
                out += std::complex<long double>(G::integrate(re, lo, lo + w), G::integrate(im, lo, lo + w));
            }
        }
        return out;
    }
};

/// h(t, lambda) from the transform psi / (s (lambda + psi)) by Euler inversion.
inline double h_by_euler(const Exponent& psi, double t, double lambda) {
    if (t == 0.0 || lambda == 0.0) return 1.0;
    return invert_euler(
        [&](std::complex<long double> s) {
            const auto p = psi(s);
            return p / (s * (static_cast<long double>(lambda) + p));
        },
        t);
}

/// Composite trapezoid rule with n intervals.
inline double trapezoid(const std::function<double(double)>& f, double a, double b, std::size_t n) {
    const double h = (b - a) / static_cast<double>(n);
    long double s = 0.5L * (f(a) + f(b));
    for (std::size_t i = 1; i < n; ++i) s += f(a + h * static_cast<double>(i));
    return static_cast<double>(s * h);
}

}  // namespace oracle
