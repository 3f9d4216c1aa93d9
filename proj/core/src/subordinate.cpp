#include "fracbound/subordinate.hpp"

#include "fracbound/error.hpp"
#include "fracbound/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace fracbound {

SubordinatorSpec::SubordinatorSpec(std::vector<StableComponent> components) : components_(std::move(components)) {
    if (components_.empty()) throw DomainError("subordinator: need at least one component");
    for (const auto& c : components_) {
        if (!(c.beta > 0.0 && c.beta < 1.0)) throw DomainError("subordinator: orders must lie in (0, 1)");
        if (!(c.scale > 0.0) || !std::isfinite(c.scale)) throw DomainError("subordinator: scales must be positive");
    }
}

SubordinatorSpec SubordinatorSpec::from_measure(const MixingMeasure& m, std::size_t levels) {
    const OrderGrid grid = m.order_grid(levels);
    std::vector<StableComponent> comps;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid.nu[i] <= 0.0) continue;
        comps.push_back({grid.beta[i], std::pow(grid.nu[i], 1.0 / grid.beta[i])});
    }
    return SubordinatorSpec(std::move(comps));
}

MixingMeasure SubordinatorSpec::equivalent_measure() const {
    std::vector<Atom> atoms;
    atoms.reserve(components_.size());
    for (const auto& c : components_) {
        atoms.push_back({c.beta, std::pow(c.scale, c.beta) / std::tgamma(1.0 - c.beta)});
    }
    return MixingMeasure(std::move(atoms));
}

double SubordinatorSpec::psi(double s) const {
    if (!(s >= 0.0)) throw DomainError("subordinator psi: s must be >= 0");
    double acc = 0.0;
    for (const auto& c : components_) acc += std::pow(c.scale * s, c.beta);
    return acc;
}

IncrementSampler::IncrementSampler(const SubordinatorSpec& spec, double step) {
    if (!(step > 0.0)) throw DomainError("subordinator: step must be positive");
    for (const auto& c : spec.components()) terms_.push_back({c.beta, c.scale * std::pow(step, 1.0 / c.beta)});
}

double IncrementSampler::operator()(RandomStream& rng) const {
    double w = 0.0;
    for (const auto& [beta, factor] : terms_) w += factor * sample_stable(beta, rng);
    return w;
}

// ---- sampling --------------------------------------------------------------

double sample_stable(double beta, RandomStream& rng) {
    if (!(beta > 0.0 && beta < 1.0)) throw DomainError("sample_stable: beta must lie in (0, 1)");
    const double u = std::numbers::pi * rng.uniform_open();
    const double e = rng.exponential();
    const double a = std::sin(beta * u) / std::pow(std::sin(u), 1.0 / beta);
    const double b = std::pow(std::sin((1.0 - beta) * u) / e, (1.0 - beta) / beta);
    return a * b;
}

double sample_stable_increment(double beta, double dt, RandomStream& rng) {
    if (!(dt > 0.0)) throw DomainError("sample_stable_increment: dt must be > 0");
    return std::pow(dt, 1.0 / beta) * sample_stable(beta, rng);
}

double sample_subordinator_at(const SubordinatorSpec& spec, double tau, RandomStream& rng) {
    if (!(tau >= 0.0)) throw DomainError("sample_subordinator_at: tau must be >= 0");
    if (tau == 0.0) return 0.0;
    double w = 0.0;
    for (const auto& c : spec.components()) w += c.scale * sample_stable_increment(c.beta, tau, rng);
    return w;
}

namespace {

void check_step(double step) {
    if (!(step > 0.0) || !std::isfinite(step)) throw DomainError("subordinator: step must be positive");
}

}  // namespace

SubordinatorPath sample_path(const SubordinatorSpec& spec, double horizon, double step, RandomStream& rng,
                             double cover) {
    check_step(step);
    if (!(horizon > 0.0)) throw DomainError("sample_path: horizon must be > 0");
    if (step > horizon) throw DomainError("sample_path: step exceeds horizon");
    auto target = static_cast<std::size_t>(std::ceil(horizon / step * (1.0 - 1e-12)));
    if (target > kMaxPathSteps) throw InsufficientHorizon("sample_path: horizon needs more than 2^20 steps");
    const IncrementSampler inc(spec, step);
    SubordinatorPath path;
    path.step = step;
    path.values.reserve(target + 1);
    path.values.push_back(0.0);
    for (;;) {
        while (path.steps() < target) path.values.push_back(path.values.back() + inc(rng));
        if (!(cover > 0.0) || path.values.back() > cover) break;
        if (target >= kMaxPathSteps) throw InsufficientHorizon("sample_path: W did not exceed the cover level within 2^20 steps");
        target = std::min(2 * target, kMaxPathSteps);
    }
    return path;
}

double inverse_at(const SubordinatorPath& path, double t) {
    if (!(t >= 0.0)) throw DomainError("inverse_at: t must be >= 0");
    const auto it = std::upper_bound(path.values.begin(), path.values.end(), t);
    if (it == path.values.end()) throw InsufficientHorizon("inverse_at: path never exceeds t");
    return path.time(static_cast<std::size_t>(it - path.values.begin()));
}

double sample_inverse(const SubordinatorSpec& spec, double t, double step, RandomStream& rng) {
    check_step(step);
    if (!(t >= 0.0)) throw DomainError("sample_inverse: t must be >= 0");
    const IncrementSampler inc(spec, step);
    double w = 0.0;
    for (std::size_t k = 1; k <= kMaxPathSteps; ++k) {
        w += inc(rng);
        if (w > t) return static_cast<double>(k) * step;
    }
    throw InsufficientHorizon("sample_inverse: W did not exceed t within 2^20 steps");
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) noexcept {
    std::uint64_t s = seed ^ (tag * 0xA0761D6478BD642FULL);
    return splitmix64(s);
}

MeanEstimate mean_estimate(const std::vector<double>& xs) {
    MeanEstimate out;
    out.samples = xs.size();
    if (xs.empty()) return out;
    const double n = static_cast<double>(xs.size());
    out.mean = pairwise_sum(xs) / n;
    if (xs.size() < 2) return out;
    std::vector<double> dev(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) dev[i] = (xs[i] - out.mean) * (xs[i] - out.mean);
    out.se = std::sqrt(pairwise_sum(dev) / (n - 1.0) / n);
    return out;
}

// ---- estimators ------------------------------------------------------------

std::vector<LaplaceRow> laplace_table(const SubordinatorSpec& spec, double tau, const std::vector<double>& s_values,
                                      std::size_t paths, double step, std::uint64_t seed, unsigned threads) {
    if (paths < 2) throw DomainError("laplace_table: need at least two paths");
    std::vector<double> w(paths);
    const std::uint64_t stream_seed = derive_seed(seed, 1);
    parallel_for(paths, threads, [&](std::size_t i) {
        RandomStream rng(stream_seed, i);
        w[i] = sample_path(spec, tau, step, rng).values.back();
    });
    std::vector<LaplaceRow> rows;
    std::vector<double> xs(paths);
    for (double s : s_values) {
        for (std::size_t i = 0; i < paths; ++i) xs[i] = std::exp(-s * w[i]);
        LaplaceRow row;
        row.s = s;
        row.empirical = mean_estimate(xs);
        row.exact = std::exp(-tau * spec.psi(s));
        row.z = row.empirical.se > 0.0 ? (row.empirical.mean - row.exact) / row.empirical.se : 0.0;
        rows.push_back(row);
    }
    return rows;
}

InverseRelationCheck inverse_relation_check(const SubordinatorSpec& spec, double t, double x, std::size_t paths,
                                            double step, std::uint64_t seed, unsigned threads) {
    if (!(t > 0.0) || !(x > 0.0)) throw DomainError("inverse_relation_check: t and x must be > 0");
    if (paths < 2) throw DomainError("inverse_relation_check: need at least two paths");
    std::vector<double> a(paths);
    std::vector<double> b(paths);
    const std::uint64_t seed_a = derive_seed(seed, 2);
    const std::uint64_t seed_b = derive_seed(seed, 3);
    parallel_for(paths, threads, [&](std::size_t i) {
        RandomStream ra(seed_a, i);
        a[i] = sample_inverse(spec, t, step, ra) <= x * (1.0 + 1e-12) ? 1.0 : 0.0;
        RandomStream rb(seed_b, i);
        b[i] = sample_subordinator_at(spec, x, rb) >= t ? 1.0 : 0.0;
    });
    InverseRelationCheck out;
    out.t = t;
    out.x = x;
    out.by_inverse = mean_estimate(a);
    out.by_subordinator = mean_estimate(b);
    const double se = std::hypot(out.by_inverse.se, out.by_subordinator.se);
    out.z = se > 0.0 ? (out.by_inverse.mean - out.by_subordinator.mean) / se : 0.0;
    return out;
}

double GEstimate::laplace(double lambda) const {
    if (lambda == 0.0) return normalization;
    double acc = 0.0;
    for (std::size_t b = 0; b < density.size(); ++b) {
        acc += density[b] * (std::exp(-lambda * edges[b]) - std::exp(-lambda * edges[b + 1])) / lambda;
    }
    return acc;
}

MeanEstimate GEstimate::sample_laplace(double lambda) const {
    std::vector<double> xs(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) xs[i] = std::exp(-lambda * samples[i]);
    return mean_estimate(xs);
}

double GEstimate::cdf(double x) const {
    if (samples.empty()) return 0.0;
    const auto n = std::count_if(samples.begin(), samples.end(), [x](double e) { return e <= x; });
    return static_cast<double>(n) / static_cast<double>(samples.size());
}

GEstimate estimate_g(const SubordinatorSpec& spec, double t, std::size_t paths, double step, std::uint64_t seed,
                     unsigned threads, std::size_t bins, double range) {
    if (!(t > 0.0)) throw DomainError("estimate_g: t must be > 0");
    if (paths < 2) throw DomainError("estimate_g: need at least two paths");
    if (bins == 0) throw DomainError("estimate_g: need at least one bin");
    GEstimate out;
    out.t = t;
    out.step = step;
    out.samples.resize(paths);
    const std::uint64_t stream_seed = derive_seed(seed, 4);
    parallel_for(paths, threads, [&](std::size_t i) {
        RandomStream rng(stream_seed, i);
        out.samples[i] = sample_inverse(spec, t, step, rng);
    });
    const double right = range > 0.0 ? range : *std::max_element(out.samples.begin(), out.samples.end());
    const double width = right / static_cast<double>(bins);
    out.edges.resize(bins + 1);
    for (std::size_t b = 0; b <= bins; ++b) out.edges[b] = width * static_cast<double>(b);
    std::vector<double> counts(bins, 0.0);
    for (double e : out.samples) {
        if (e > right) continue;
        const auto b = std::min(bins - 1, static_cast<std::size_t>(e / width));
        counts[b] += 1.0;
    }
    const double n = static_cast<double>(paths);
    out.widened = paths < 1000;
    out.density.resize(bins);
    out.band.resize(bins);
    for (std::size_t b = 0; b < bins; ++b) {
        out.density[b] = counts[b] / (n * width);
        out.band[b] = std::sqrt(counts[b]) / (n * width) * (out.widened ? 2.0 : 1.0);
    }
    out.normalization = pairwise_sum(out.density) * width;
    return out;
}

}  // namespace fracbound
