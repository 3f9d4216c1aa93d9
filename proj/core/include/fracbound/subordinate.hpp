#pragma once

#include "fracbound/mixing.hpp"
#include "fracbound/rng.hpp"

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace fracbound {

/// One term c W^beta of W_t = sum_j c_j W_t^{beta_j}, where W^beta is the
/// standard beta-stable subordinator, E exp(-s W^beta_t) = exp(-t s^beta).
struct StableComponent {
    double beta = 0.5;
    double scale = 1.0;
};

/// Finite mixture of independent stable subordinators with Laplace exponent
/// psi(s) = sum_j (c_j s)^{beta_j}.
class SubordinatorSpec {
public:
    explicit SubordinatorSpec(std::vector<StableComponent> components);

    /// Atoms map to c_j = (w_j Gamma(1 - beta_j))^{1/beta_j}; a density part is
    /// quantized into `levels` Gauss nodes in beta.
    static SubordinatorSpec from_measure(const MixingMeasure& m, std::size_t levels = 32);

    const std::vector<StableComponent>& components() const noexcept { return components_; }

    /// Atoms-only measure with the same Laplace exponent.
    MixingMeasure equivalent_measure() const;

    double psi(double s) const;

private:
    std::vector<StableComponent> components_;
};

/// Standard one-sided stable variate, E exp(-s S) = exp(-s^beta) (Kanter).
double sample_stable(double beta, RandomStream& rng);

/// dt^{1/beta} S.
double sample_stable_increment(double beta, double dt, RandomStream& rng);

/// W sampled exactly at operational time tau (no grid).
double sample_subordinator_at(const SubordinatorSpec& spec, double tau, RandomStream& rng);

/// W_{tau + step} - W_tau = sum_j c_j step^{1/beta_j} S_j with the factors cached.
class IncrementSampler {
public:
    IncrementSampler(const SubordinatorSpec& spec, double step);
    double operator()(RandomStream& rng) const;

private:
    std::vector<std::pair<double, double>> terms_;
};

/// Paths never grow beyond this many steps.
constexpr std::size_t kMaxPathSteps = std::size_t{1} << 20;

/// W on the grid tau_k = k step; values[0] = 0.
struct SubordinatorPath {
    double step = 0.0;
    std::vector<double> values;

    std::size_t steps() const noexcept { return values.empty() ? 0 : values.size() - 1; }
    double time(std::size_t k) const noexcept { return static_cast<double>(k) * step; }
    double horizon() const noexcept { return time(steps()); }
};

/// Grid path on [0, horizon]. With cover > 0 the horizon is doubled until
/// W exceeds `cover`; throws InsufficientHorizon past kMaxPathSteps.
SubordinatorPath sample_path(const SubordinatorSpec& spec, double horizon, double step, RandomStream& rng,
                             double cover = 0.0);

/// E_t = first grid time tau_k with W(tau_k) > t.
double inverse_at(const SubordinatorPath& path, double t);

/// E_t by streaming first passage, without storing the path.
double sample_inverse(const SubordinatorSpec& spec, double t, double step, RandomStream& rng);

/// Streams are keyed by (derive_seed(seed, tag), path index) so independent
/// estimators in one run never share draws.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) noexcept;

struct MeanEstimate {
    double mean = 0.0;
    double se = 0.0;
    std::size_t samples = 0;
};

/// Mean and standard error of per-sample values (pairwise summation).
MeanEstimate mean_estimate(const std::vector<double>& xs);

struct LaplaceRow {
    double s = 0.0;
    MeanEstimate empirical;
    double exact = 0.0;  // exp(-tau psi(s))
    double z = 0.0;
};

/// Empirical E exp(-s W_tau) from grid paths against exp(-tau psi(s)).
std::vector<LaplaceRow> laplace_table(const SubordinatorSpec& spec, double tau, const std::vector<double>& s_values,
                                      std::size_t paths, double step, std::uint64_t seed, unsigned threads = 0);

/// P(E_t <= x) from first passage against P(W_x >= t) from exact W_x.
struct InverseRelationCheck {
    double t = 0.0;
    double x = 0.0;
    MeanEstimate by_inverse;
    MeanEstimate by_subordinator;
    double z = 0.0;
};

InverseRelationCheck inverse_relation_check(const SubordinatorSpec& spec, double t, double x, std::size_t paths,
                                            double step, std::uint64_t seed, unsigned threads = 0);

/// Histogram estimate of the density g(t, .) of E_t.
struct GEstimate {
    double t = 0.0;
    double step = 0.0;
    std::vector<double> edges;
    std::vector<double> density;
    /// Pointwise standard error of each bin height, widened when flagged.
    std::vector<double> band;
    /// int g-hat over the histogram range.
    double normalization = 0.0;
    /// Fewer than 1000 paths: bands doubled.
    bool widened = false;
    std::vector<double> samples;

    /// E exp(-lambda E_t) integrated against the histogram.
    double laplace(double lambda) const;
    /// Same expectation as a sample mean, with its standard error.
    MeanEstimate sample_laplace(double lambda) const;
    /// Fraction of samples <= x.
    double cdf(double x) const;
};

/// `range` = 0 uses the largest sample as the right edge.
GEstimate estimate_g(const SubordinatorSpec& spec, double t, std::size_t paths, double step, std::uint64_t seed,
                     unsigned threads = 0, std::size_t bins = 100, double range = 0.0);

}  // namespace fracbound
