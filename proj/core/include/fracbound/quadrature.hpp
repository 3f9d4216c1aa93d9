#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace fracbound {

struct QuadratureOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    unsigned max_depth = 18;
};

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
};

/// Adaptive 21-point Gauss-Kronrod on [a, b]. Throws QuadratureError when the
/// error estimate exceeds max(abs_tol, rel_tol * |value|).
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& opts = {});

/// Same, but never throws; the caller inspects `error`.
QuadratureResult integrate_nothrow(const std::function<double(double)>& f, double a, double b,
                                   const QuadratureOptions& opts = {});

/// Nodes and weights of an n-point Gauss-Legendre rule.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const noexcept { return nodes.size(); }
};

/// n-point Gauss-Legendre rule on [-1, 1] (Newton iteration on P_n).
GaussRule gauss_legendre(std::size_t n);

/// Rule mapped affinely onto [a, b].
GaussRule gauss_legendre(std::size_t n, double a, double b);

/// Composite rule: `per_panel` Gauss points on each panel between
/// consecutive entries of `breaks` (sorted, at least two entries).
GaussRule composite_gauss_legendre(const std::vector<double>& breaks, std::size_t per_panel);

}  // namespace fracbound
