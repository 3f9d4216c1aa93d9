#pragma once

#include "fracbound/eigenbasis.hpp"
#include "fracbound/hkernel.hpp"
#include "fracbound/mixing.hpp"

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace fracbound {

/// Power-law model |fbar(n)| <= c lambda_n^{-k} fitted to computed coefficients.
struct DecayFit {
    enum class Kind {
        /// Coefficients reach the rounding floor inside the computed range.
        Resolved,
        /// Power law fitted; the tail is summable in sup norm.
        PowerLaw,
        /// No usable sup-norm model; only the Parseval (L2) tail is known.
        Parseval,
    };

    Kind kind = Kind::Parseval;
    double k = 0.0;
    double c = 0.0;
    /// Estimate of sum_{n > N} |fbar(n)| sup|phi_n| (L2 tail for Kind::Parseval).
    double tail = 0.0;
};

/// Tail model for the modes beyond those in `coeffs`. Weyl growth
/// lambda_n ~ lambda_N (n/N)^{2/d} turns the power law into a summable tail
/// when 2k/d > 1.
DecayFit fit_decay(const BoxDomain& dom, const SpectralCoefficients& coeffs);

struct TruncationChoice {
    std::size_t count = 1;
    DecayFit fit;
    double estimated_tail = 0.0;
    /// Fitted k exceeds 1 + 3d/4.
    bool classical_threshold = false;
    /// Empty when the target was met with power-like or resolved decay.
    std::string warning;
};

struct TruncationOptions {
    /// Coefficients computed before fitting.
    std::size_t probe = 512;
    ProjectOptions projection;
};

/// Smallest N whose estimated sup-norm tail is below `target_tail`; falls back
/// to N = probe with a warning when the decay is not power-like or too slow.
TruncationChoice choose_truncation(const BoxDomain& dom, const InitialDatum& f, double target_tail,
                                   const TruncationOptions& opts = {});

struct SpectralOptions {
    HRoute route = HRoute::Auto;
    HOptions kernel;
    ProjectOptions projection;
    /// Workers for kernel assembly and field evaluation (0 = all cores).
    unsigned threads = 0;
};

/// Truncated series u(t, x) = sum_{n <= N} fbar(n) phi_n(x) h(t, lambda_n).
class SpectralSolution {
public:
    SpectralSolution(BoxDomain dom, InitialDatum f, const MixingMeasure& m, std::size_t count,
                     SpectralOptions opts = {});

    const BoxDomain& domain() const noexcept { return dom_; }
    const InitialDatum& datum() const noexcept { return f_; }
    const SpectralCoefficients& coefficients() const noexcept { return coeffs_; }
    const HEvaluator& kernel() const noexcept { return kernel_; }
    const SpectralOptions& options() const noexcept { return opts_; }
    std::size_t truncation() const noexcept { return coeffs_.size(); }

    /// h(t, lambda_n) for every retained mode. Throws KernelError naming lambda_n.
    std::vector<HValue> kernel_values(double t) const;

    /// The truncated series itself, t >= 0.
    double series(double t, const Point& x) const;
    /// u(t, x); u(0, x) = f(x).
    double operator()(double t, const Point& x) const;
    /// Delta u(t, x) = -sum lambda_n fbar(n) phi_n(x) h(t, lambda_n).
    double laplacian(double t, const Point& x) const;

    /// ||u(t, .)||_2 by Parseval.
    double l2_norm(double t) const;
    /// ||u(t, .) - f||_2, including the part of f beyond the truncation.
    double distance_to_datum(double t) const;

    const DecayFit& decay() const noexcept { return decay_; }
    /// Sup-norm truncation tail plus a rounding allowance for the retained sum.
    double tail_bound() const noexcept { return decay_.tail + rounding_; }

    /// Heuristic: f smooth and the partial sums of sum lambda_n |fbar(n)| sup|phi_n|
    /// have numerically converged.
    bool classical() const noexcept { return classical_; }
    const std::string& warning() const noexcept { return warning_; }

private:
    BoxDomain dom_;
    InitialDatum f_;
    SpectralOptions opts_;
    SpectralCoefficients coeffs_;
    HEvaluator kernel_;
    DecayFit decay_;
    double rounding_ = 0.0;
    bool classical_ = true;
    std::string warning_;
};

/// u on a time x space grid; values and errors are row-major [time][point].
struct SolutionField {
    std::vector<double> times;
    std::vector<Point> points;
    std::vector<double> values;
    /// Truncation tail plus propagated h error.
    std::vector<double> errors;

    double value(std::size_t i, std::size_t j) const { return values.at(i * points.size() + j); }
    double error(std::size_t i, std::size_t j) const { return errors.at(i * points.size() + j); }
};

SolutionField evaluate_field(const SpectralSolution& sol, const std::vector<double>& times,
                             const std::vector<Point>& points);

struct ResidualOptions {
    /// Checks only at grid nodes t >= t_min > 0.
    double t_min = 0.1;
    double t_max = 0.0;  // 0: end of grid
    /// Evenly spaced subset of eligible nodes.
    std::size_t max_checks = 64;
    double tolerance = 1e-3;
    /// Failures on grids coarser than this are reported as inconclusive.
    double fine_step = 1e-3;
    std::size_t beta_nodes = 64;
};

struct ResidualPoint {
    double t = 0.0;
    Point x{};
    double time_derivative = 0.0;  // D^(nu) u by the L1 scheme
    double laplacian = 0.0;
    double residual = 0.0;  // |D^(nu) u - Delta u|
    double relative = 0.0;
};

struct ResidualReport {
    enum class Status { Pass, Fail, Inconclusive };

    std::vector<ResidualPoint> points;
    double max_abs = 0.0;
    double max_rel = 0.0;
    double grid_step = 0.0;
    Status status = Status::Pass;
    std::string note;
};

/// Compares D^(nu) u from the L1 scheme on the sampled series with the exact
/// spectral Delta u. `t_grid` must start at 0.
ResidualReport verify_residual(const SpectralSolution& sol, const std::vector<double>& t_grid,
                               const std::vector<Point>& xs, const ResidualOptions& opts = {});

std::string_view to_string(ResidualReport::Status status);

}  // namespace fracbound
