#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

namespace fracbound {

constexpr std::size_t kMaxDims = 3;

/// Coordinates beyond the domain dimension are ignored.
using Point = std::array<double, kMaxDims>;
/// Entries beyond the domain dimension are zero.
using MultiIndex = std::array<unsigned, kMaxDims>;

/// Axis-aligned box (0, M_1) x ... x (0, M_d), 1 <= d <= 3.
class BoxDomain {
public:
    explicit BoxDomain(std::vector<double> sides);

    static BoxDomain interval(double length) { return BoxDomain({length}); }

    std::size_t dims() const noexcept { return sides_.size(); }
    double side(std::size_t axis) const { return sides_.at(axis); }
    const std::vector<double>& sides() const noexcept { return sides_; }
    double volume() const noexcept;

    /// Strict interior.
    bool contains(const Point& x) const noexcept;

private:
    std::vector<double> sides_;
};

/// Dirichlet eigenpair: lambda = sum_i (n_i pi / M_i)^2,
/// phi(x) = prod_i sqrt(2/M_i) sin(n_i pi x_i / M_i).
struct EigenPair {
    MultiIndex index{};
    double lambda = 0.0;
};

double eigenvalue(const BoxDomain& dom, const MultiIndex& n);
double eigenfunction(const BoxDomain& dom, const MultiIndex& n, const Point& x);

/// First `count` eigenpairs, ascending in lambda, ties broken
/// lexicographically on the multi-index.
std::vector<EigenPair> enumerate_eigens(const BoxDomain& dom, std::size_t count);

/// Largest index component per axis among `eigens`.
MultiIndex max_indices(const std::vector<EigenPair>& eigens);

/// phi_n(x) for every pair in `eigens`, sharing per-axis sine tables.
std::vector<double> eigenfunctions_at(const BoxDomain& dom, const std::vector<EigenPair>& eigens, const Point& x);

/// Initial datum f on a box.
class InitialDatum {
public:
    enum class Kind { Zero, Modes, Bump, Indicator, Tabulated, Custom };

    static InitialDatum zero();
    /// f = sum_k a_k phi_{n_k}.
    static InitialDatum modes(std::vector<std::pair<MultiIndex, double>> terms);
    static InitialDatum eigenmode(const MultiIndex& n, double amplitude = 1.0);
    /// exp(1 - 1/(1 - r^2)) with r = |x - center| / width, zero for r >= 1.
    static InitialDatum bump(const Point& center, double width);
    /// 1 on the closed box [lower, upper], 0 elsewhere.
    static InitialDatum indicator(const Point& lower, const Point& upper);
    /// Multilinear interpolation on a tensor grid; `values` is row-major with
    /// the last axis fastest. Zero outside the grid.
    static InitialDatum tabulated(std::vector<std::vector<double>> axes, std::vector<double> values);
    static InitialDatum custom(std::function<double(const Point&)> f, bool smooth = true,
                               std::vector<std::vector<double>> breakpoints = {});

    double operator()(const BoxDomain& dom, const Point& x) const;

    Kind kind() const noexcept { return kind_; }
    /// Whether the eigen-expansion of Delta f can be expected to converge
    /// uniformly and absolutely. False for indicators and tabulated data.
    bool smooth() const noexcept { return smooth_; }
    /// Kinks or jumps of f along `axis`, strictly inside (0, side).
    std::vector<double> breakpoints(const BoxDomain& dom, std::size_t axis) const;

    const std::vector<std::pair<MultiIndex, double>>& terms() const noexcept { return terms_; }

    /// Throws DomainError if the datum does not fit the domain.
    void validate(const BoxDomain& dom) const;

private:
    InitialDatum() = default;

    Kind kind_ = Kind::Zero;
    bool smooth_ = true;
    std::vector<std::pair<MultiIndex, double>> terms_;
    Point a_{};
    Point b_{};
    double width_ = 0.0;
    std::vector<std::vector<double>> axes_;
    std::vector<double> values_;
    std::function<double(const Point&)> fn_;
};

struct ProjectOptions {
    /// Minimum Gauss nodes per axis.
    std::size_t min_nodes = 64;
    /// Nodes per unit of the largest axis frequency index.
    std::size_t nodes_per_wave = 4;
    /// Minimum nodes on any panel between breakpoints.
    std::size_t min_panel_nodes = 8;
};

struct SpectralCoefficients {
    std::vector<EigenPair> eigens;
    std::vector<double> values;
    /// ||f||_2^2 by the same quadrature.
    double norm_sq = 0.0;
    /// ||f||_2^2 - sum fbar(n)^2.
    double parseval_residual = 0.0;

    std::size_t size() const noexcept { return values.size(); }
    /// L2 norm of the neglected part, sqrt(max(residual, 0)).
    double l2_tail() const noexcept;
};

/// fbar(n) = int_D f phi_n dx for the first `count` eigenpairs, by tensorized
/// composite Gauss-Legendre split at the datum's breakpoints.
SpectralCoefficients project(const BoxDomain& dom, const InitialDatum& f, std::size_t count,
                             const ProjectOptions& opts = {});

struct HeatKernelValue {
    double value = 0.0;
    /// Bound on sum_{n > N} e^{-lambda_n t} |phi_n(x) phi_n(y)|.
    double tail_bound = 0.0;
};

/// sum_{n <= N} e^{-lambda_n t} phi_n(x) phi_n(y) for the killed heat semigroup.
HeatKernelValue heat_kernel(const BoxDomain& dom, double t, const Point& x, const Point& y, std::size_t count);

/// sum over all n of e^{-lambda_n t}, as a product of one-dimensional theta sums.
double heat_trace(const BoxDomain& dom, double t);

}  // namespace fracbound
