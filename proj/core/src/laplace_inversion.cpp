#include "fracbound/laplace_inversion.hpp"

#include "fracbound/error.hpp"

#include <cmath>
#include <numbers>

namespace fracbound {

double invert_talbot(const std::function<std::complex<double>(std::complex<double>)>& transform, double t,
                     int nodes) {
    if (!(t > 0.0)) throw DomainError("invert_talbot: t must be > 0");
    if (nodes < 2) throw DomainError("invert_talbot: need at least two nodes");
    const double m = static_cast<double>(nodes);
    const double r = 2.0 * m / (5.0 * t);
    double acc = 0.5 * std::real(transform({r, 0.0})) * std::exp(r * t);
    for (int k = 1; k < nodes; ++k) {
        const double theta = k * std::numbers::pi / m;
        const double cot = std::cos(theta) / std::sin(theta);
        const std::complex<double> s{r * theta * cot, r * theta};
        const std::complex<double> sigma{1.0, theta + (theta * cot - 1.0) * cot};
        acc += std::real(std::exp(t * s) * transform(s) * sigma);
    }
    return r / m * acc;
}

std::vector<long double> stehfest_weights(int order) {
    if (order < 2 || order % 2 != 0) throw DomainError("stehfest_weights: order must be even and >= 2");
    const int half = order / 2;
    auto fact = [](int n) {
        long double f = 1.0L;
        for (int i = 2; i <= n; ++i) f *= i;
        return f;
    };
    std::vector<long double> v(order);
    for (int k = 1; k <= order; ++k) {
        long double sum = 0.0L;
        for (int j = (k + 1) / 2; j <= std::min(k, half); ++j) {
            sum += std::pow(static_cast<long double>(j), half) * fact(2 * j) /
                   (fact(half - j) * fact(j) * fact(j - 1) * fact(k - j) * fact(2 * j - k));
        }
        const long double sign = ((k + half) % 2 == 0) ? 1.0L : -1.0L;
        v[k - 1] = sign * sum;
    }
    return v;
}

double invert_gaver_stehfest(const std::function<long double(long double)>& transform, double t, int order) {
    if (!(t > 0.0)) throw DomainError("invert_gaver_stehfest: t must be > 0");
    const auto v = stehfest_weights(order);
    const long double a = std::numbers::ln2_v<long double> / t;
    long double acc = 0.0L;
    for (int k = 1; k <= order; ++k) acc += v[k - 1] * transform(k * a);
    return static_cast<double>(a * acc);
}

}  // namespace fracbound
