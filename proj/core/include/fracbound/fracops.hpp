#pragma once

#include "fracbound/mixing.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace fracbound {

/// Samples of a scalar function of time on a grid 0 = t_0 < t_1 < ... < t_K.
class TimeSeries {
public:
    TimeSeries(std::vector<double> grid, std::vector<double> values);

    /// Samples `f` on `grid`.
    static TimeSeries sample(std::vector<double> grid, const std::function<double(double)>& f);

    std::span<const double> grid() const noexcept { return grid_; }
    std::span<const double> values() const noexcept { return values_; }
    std::size_t size() const noexcept { return grid_.size(); }

    /// Index of the grid node equal to t (relative tolerance 1e-12).
    std::size_t index_of(double t) const;

private:
    std::vector<double> grid_;
    std::vector<double> values_;
};

/// Uniform grid {0, T/K, ..., T}.
std::vector<double> uniform_grid(double horizon, std::size_t intervals);

/// Graded grid t_j = T (j/K)^r, r >= 1, refined near t = 0.
std::vector<double> graded_grid(double horizon, std::size_t intervals, double exponent);

/// L1 approximation of the Caputo derivative of order beta at grid node k:
///   1/Gamma(2-beta) sum_j (f_{j+1}-f_j)/(t_{j+1}-t_j) [(t_k-t_j)^{1-beta} - (t_k-t_{j+1})^{1-beta}].
/// Exact for affine f.
double caputo(const TimeSeries& f, double beta, std::size_t k);

/// As above, with t required to be a grid node.
double caputo_at(const TimeSeries& f, double beta, double t);

struct DistributedCaputoOptions {
    /// Gauss nodes in beta for the density part.
    std::size_t beta_nodes = 64;
};

/// Distributed-order derivative int caputo(f, beta, t) nu(d beta),
/// nu = Gamma(1-beta) mu.
double distributed_caputo(const TimeSeries& f, const MixingMeasure& m, std::size_t k,
                          const DistributedCaputoOptions& opts = {});

/// Same with a precomputed rule in beta.
double distributed_caputo(const TimeSeries& f, const OrderGrid& orders, std::size_t k);

double distributed_caputo_at(const TimeSeries& f, const MixingMeasure& m, double t,
                             const DistributedCaputoOptions& opts = {});

}  // namespace fracbound
