#include "fracbound/quadrature.hpp"

#include "fracbound/error.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>
#include <sstream>
#include <utility>

namespace fracbound {

QuadratureResult integrate_nothrow(const std::function<double(double)>& f, double a, double b,
                                   const QuadratureOptions& opts) {
    if (a == b) return {};
    double error = 0.0;
    double l1 = 0.0;
    // Boost terminates on error <= tol * L1; tolerance is enforced below.
    const double value = boost::math::quadrature::gauss_kronrod<double, 21>::integrate(
        f, a, b, opts.max_depth, opts.rel_tol * 0.5, &error, &l1);
    return {value, error};
}

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& opts) {
    auto r = integrate_nothrow(f, a, b, opts);
    const double target = std::max(opts.abs_tol, opts.rel_tol * std::abs(r.value));
    if (!std::isfinite(r.value) || r.error > target) {
        std::ostringstream os;
        os << "quadrature on [" << a << ", " << b << "] did not converge: achieved error "
           << r.error << ", requested " << target;
        throw QuadratureError(os.str(), r.error, target);
    }
    return r;
}

namespace {

// Returns (P_n(x), P_n'(x)) by the three-term recurrence.
std::pair<double, double> legendre(std::size_t n, double x) {
    double p0 = 1.0;
    double p1 = x;
    for (std::size_t k = 2; k <= n; ++k) {
        const double kk = static_cast<double>(k);
        const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
        p0 = p1;
        p1 = p2;
    }
    const double dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
    return {p1, dp};
}

}  // namespace

GaussRule gauss_legendre(std::size_t n) {
    if (n == 0) throw DomainError("gauss_legendre: n must be positive");
    GaussRule rule;
    if (n == 1) {
        rule.nodes = {0.0};
        rule.weights = {2.0};
        return rule;
    }
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const double nn = static_cast<double>(n);
    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
        // Tricomi initial guess, then Newton on P_n.
        double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (nn + 0.5));
        for (int iter = 0; iter < 100; ++iter) {
            const auto [p, dp] = legendre(n, x);
            const double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const double dp = legendre(n, x).second;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

GaussRule gauss_legendre(std::size_t n, double a, double b) {
    GaussRule rule = gauss_legendre(n);
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    for (std::size_t i = 0; i < n; ++i) {
        rule.nodes[i] = mid + half * rule.nodes[i];
        rule.weights[i] *= half;
    }
    return rule;
}

GaussRule composite_gauss_legendre(const std::vector<double>& breaks, std::size_t per_panel) {
    if (breaks.size() < 2) throw DomainError("composite_gauss_legendre: need at least one panel");
    const GaussRule ref = gauss_legendre(per_panel);
    GaussRule rule;
    rule.nodes.reserve((breaks.size() - 1) * per_panel);
    rule.weights.reserve((breaks.size() - 1) * per_panel);
    for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
        const double a = breaks[p];
        const double b = breaks[p + 1];
        if (!(b > a)) continue;
        const double half = 0.5 * (b - a);
        const double mid = 0.5 * (a + b);
        for (std::size_t i = 0; i < per_panel; ++i) {
            rule.nodes.push_back(mid + half * ref.nodes[i]);
            rule.weights.push_back(half * ref.weights[i]);
        }
    }
    return rule;
}

}  // namespace fracbound
