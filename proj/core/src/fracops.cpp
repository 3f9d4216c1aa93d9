#include "fracbound/fracops.hpp"

#include "fracbound/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fracbound {

TimeSeries::TimeSeries(std::vector<double> grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (grid_.size() < 2) throw DomainError("time series needs at least two grid points");
    if (grid_.size() != values_.size()) throw DomainError("time series grid/value size mismatch");
    if (grid_.front() != 0.0) throw DomainError("time series grid must start at t = 0");
    for (std::size_t i = 0; i + 1 < grid_.size(); ++i) {
        if (!(grid_[i + 1] > grid_[i])) throw DomainError("time series grid must be strictly increasing");
    }
    for (double v : values_) {
        if (!std::isfinite(v)) throw DomainError("time series values must be finite");
    }
}

TimeSeries TimeSeries::sample(std::vector<double> grid, const std::function<double(double)>& f) {
    std::vector<double> values(grid.size());
    std::transform(grid.begin(), grid.end(), values.begin(), f);
    return TimeSeries(std::move(grid), std::move(values));
}

std::size_t TimeSeries::index_of(double t) const {
    auto it = std::lower_bound(grid_.begin(), grid_.end(), t * (1.0 - 1e-12));
    if (it != grid_.end() && std::abs(*it - t) <= 1e-12 * std::max(1.0, std::abs(t))) {
        return static_cast<std::size_t>(it - grid_.begin());
    }
    std::ostringstream os;
    os << "t = " << t << " is not a grid node";
    throw DomainError(os.str());
}

std::vector<double> uniform_grid(double horizon, std::size_t intervals) {
    if (!(horizon > 0.0) || intervals == 0) throw DomainError("uniform_grid: need T > 0 and K >= 1");
    std::vector<double> g(intervals + 1);
    for (std::size_t j = 0; j <= intervals; ++j) g[j] = horizon * static_cast<double>(j) / static_cast<double>(intervals);
    g.back() = horizon;
    return g;
}

std::vector<double> graded_grid(double horizon, std::size_t intervals, double exponent) {
    if (!(exponent >= 1.0)) throw DomainError("graded_grid: exponent must be >= 1");
    std::vector<double> g = uniform_grid(1.0, intervals);
    for (double& t : g) t = horizon * std::pow(t, exponent);
    g.back() = horizon;
    return g;
}

double caputo(const TimeSeries& f, double beta, std::size_t k) {
    if (!(beta > 0.0 && beta < 1.0)) throw DomainError("caputo: beta must lie in (0, 1)");
    if (k == 0 || k >= f.size()) throw DomainError("caputo: grid index must be in [1, K]");
    const auto t = f.grid();
    const auto v = f.values();
    const double e = 1.0 - beta;
    const double tk = t[k];
    double acc = 0.0;
    double prev = std::pow(tk - t[0], e);
    for (std::size_t j = 0; j < k; ++j) {
        const double next = (j + 1 == k) ? 0.0 : std::pow(tk - t[j + 1], e);
        acc += (v[j + 1] - v[j]) / (t[j + 1] - t[j]) * (prev - next);
        prev = next;
    }
    return acc / std::tgamma(2.0 - beta);
}

double caputo_at(const TimeSeries& f, double beta, double t) { return caputo(f, beta, f.index_of(t)); }

double distributed_caputo(const TimeSeries& f, const OrderGrid& orders, std::size_t k) {
    // fixed summation order over the beta nodes
    double acc = 0.0;
    for (std::size_t i = 0; i < orders.size(); ++i) acc += orders.nu[i] * caputo(f, orders.beta[i], k);
    return acc;
}

double distributed_caputo(const TimeSeries& f, const MixingMeasure& m, std::size_t k,
                          const DistributedCaputoOptions& opts) {
    return distributed_caputo(f, m.order_grid(opts.beta_nodes), k);
}

double distributed_caputo_at(const TimeSeries& f, const MixingMeasure& m, double t,
                             const DistributedCaputoOptions& opts) {
    return distributed_caputo(f, m, f.index_of(t), opts);
}

}  // namespace fracbound
