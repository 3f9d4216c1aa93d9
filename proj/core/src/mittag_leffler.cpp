#include "fracbound/mittag_leffler.hpp"

#include "fracbound/error.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

namespace fracbound {

namespace {

constexpr double kMaxSeriesTerm = 1e3;
constexpr int kMaxSeriesTerms = 2000;

struct SeriesResult {
    long double sum = 0.0L;
    long double max_term = 0.0L;
    bool converged = false;
};

SeriesResult power_series(double beta, double z) {
    SeriesResult r;
    const long double zl = z;
    long double zk = 1.0L;  // z^k
    for (int k = 0; k < kMaxSeriesTerms; ++k) {
        const long double term = zk / std::tgamma(static_cast<long double>(beta) * k + 1.0L);
        r.sum += term;
        r.max_term = std::max(r.max_term, std::abs(term));
        if (r.max_term > kMaxSeriesTerm) return r;
        if (k > 2 && std::abs(term) < 1e-21L * std::max(1.0L, std::abs(r.sum))) {
            r.converged = true;
            return r;
        }
        zk *= zl;
    }
    return r;
}

std::optional<double> asymptotic(double beta, double x) {
    // E_beta(-x) ~ sum_{k>=1} (-1)^{k+1} x^{-k} / Gamma(1 - beta k)
    double sum = 0.0;
    double prev = std::numeric_limits<double>::infinity();
    double xk = 1.0;
    for (int k = 1; k <= 40; ++k) {
        xk /= x;
        const double arg = 1.0 - beta * k;
        double inv_gamma = 0.0;
        if (!(arg <= 0.0 && arg == std::floor(arg))) inv_gamma = 1.0 / std::tgamma(arg);
        const double term = ((k % 2 == 1) ? 1.0 : -1.0) * xk * inv_gamma;
        if (std::abs(term) > prev && term != 0.0) break;  // divergent tail starts
        sum += term;
        if (term != 0.0) prev = std::abs(term);
        if (term != 0.0 && std::abs(term) < 1e-17 * std::abs(sum)) return sum;
    }
    return std::nullopt;
}

double integral(double beta, double x) {
    const double c = std::pow(x, 1.0 / beta);
    const double cb = std::cos(beta * std::numbers::pi);
    const double inv_beta = 1.0 / beta;
    auto f = [&](double v) {
        const double denom = 1.0 + 2.0 * v * cb + v * v;
        const double lower = std::exp(-c * std::pow(v, inv_beta));
        const double upper = v > 0.0 ? std::exp(-c * std::pow(v, -inv_beta)) : 0.0;
        return (lower + upper) / denom;
    };
    double error = 0.0;
    const double value =
        boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, 0.0, 1.0, 15, 1e-13, &error);
    return std::sin(beta * std::numbers::pi) / (std::numbers::pi * beta) * value;
}

void check_args(double beta, double z) {
    if (!(beta > 0.0 && beta <= 1.0)) throw DomainError("mittag_leffler: beta must lie in (0, 1]");
    if (!(z <= 0.0)) throw DomainError("mittag_leffler: z must be <= 0");
}

}  // namespace

MittagLefflerMethod mittag_leffler_method(double beta, double z) {
    check_args(beta, z);
    if (power_series(beta, z).converged) return MittagLefflerMethod::Series;
    if (-z >= 1e3 && asymptotic(beta, -z)) return MittagLefflerMethod::Asymptotic;
    return MittagLefflerMethod::Integral;
}

double mittag_leffler(double beta, double z, MittagLefflerMethod method) {
    check_args(beta, z);
    if (z == 0.0) return 1.0;
    if (beta == 1.0) return std::exp(z);
    switch (method) {
        case MittagLefflerMethod::Series: {
            const auto r = power_series(beta, z);
            if (!r.converged) throw DomainError("mittag_leffler: series rejected (cancellation)");
            return static_cast<double>(r.sum);
        }
        case MittagLefflerMethod::Asymptotic: {
            const auto r = asymptotic(beta, -z);
            if (!r) throw DomainError("mittag_leffler: asymptotic expansion not accurate here");
            return *r;
        }
        case MittagLefflerMethod::Integral:
            return integral(beta, -z);
    }
    return integral(beta, -z);
}

double mittag_leffler(double beta, double z) {
    check_args(beta, z);
    if (z == 0.0) return 1.0;
    if (beta == 1.0) return std::exp(z);
    if (const auto r = power_series(beta, z); r.converged) return static_cast<double>(r.sum);
    if (-z >= 1e3) {
        if (const auto a = asymptotic(beta, -z)) return *a;
    }
    return integral(beta, -z);
}

}  // namespace fracbound
