#include "doctest.h"

#include "fracbound/error.hpp"
#include "fracbound/hkernel.hpp"
#include "fracbound/mixing.hpp"
#include "fracbound/parallel.hpp"
#include "fracbound/subordinate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace fracbound;

namespace {

// Two-sample Kolmogorov-Smirnov statistic and its asymptotic p-value.
double ks_pvalue(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
    }
    const double n = static_cast<double>(a.size() * b.size()) / static_cast<double>(a.size() + b.size());
    const double lam = (std::sqrt(n) + 0.12 + 0.11 / std::sqrt(n)) * d;
    double p = 0.0;
    for (int k = 1; k < 100; ++k) p += 2.0 * (k % 2 ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lam * lam);
    return std::clamp(p, 0.0, 1.0);
}

}  // namespace

TEST_CASE("standard stable variate has the defining Laplace transform") {
    std::vector<double> xs(100000);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        RandomStream rng(1234, i);
        const double s = sample_stable(0.5, rng);
        CHECK(s > 0.0);
        xs[i] = std::exp(-s);
    }
    const MeanEstimate e = mean_estimate(xs);
    CHECK(std::abs(e.mean - std::exp(-1.0)) < 3.0 * e.se);
}

TEST_CASE("increments concentrate at dt as beta approaches one") {
    std::vector<double> xs(20001);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        RandomStream rng(5, i);
        xs[i] = sample_stable_increment(0.99, 0.01, rng);
    }
    std::nth_element(xs.begin(), xs.begin() + 10000, xs.end());
    CHECK(xs[10000] == doctest::Approx(0.01).epsilon(0.1));
    RandomStream rng(1, 1);
    CHECK_THROWS_AS(sample_stable_increment(1.0, 0.1, rng), DomainError);
    CHECK_THROWS_AS(sample_stable_increment(0.5, 0.0, rng), DomainError);
}

TEST_CASE("self-similarity: W over ct equals c^{1/beta} W over t in law") {
    const double beta = 0.6, c = 3.0;
    const SubordinatorSpec spec({StableComponent{beta, 1.0}});
    std::vector<double> a(10000), b(10000);
    for (std::size_t i = 0; i < a.size(); ++i) {
        RandomStream r1(77, i), r2(78, i);
        a[i] = sample_path(spec, c * 0.5, 0.01, r1).values.back();
        b[i] = std::pow(c, 1.0 / beta) * sample_path(spec, 0.5, 0.01, r2).values.back();
    }
    CHECK(ks_pvalue(a, b) > 0.01);
}

TEST_CASE("grid paths reproduce exp(-psi) for one and two components") {
    const SubordinatorSpec one({StableComponent{0.5, 1.0}});
    for (const auto& row : laplace_table(one, 1.0, {1.0}, 100000, 1e-2, 3)) {
        CHECK(row.exact == doctest::Approx(std::exp(-1.0)));
        CHECK(std::abs(row.empirical.mean - row.exact) < 3.0 * row.empirical.se);
    }
    const SubordinatorSpec two({StableComponent{0.3, 0.5}, StableComponent{0.8, 2.0}});
    for (const auto& row : laplace_table(two, 1.0, {0.5, 2.0}, 100000, 1e-2, 4)) {
        const double psi = std::pow(0.5 * row.s, 0.3) + std::pow(2.0 * row.s, 0.8);
        CHECK(row.exact == doctest::Approx(std::exp(-psi)).epsilon(1e-14));
        CHECK(std::abs(row.empirical.mean - row.exact) < 3.0 * row.empirical.se);
    }
}

TEST_CASE("paths start at zero, are nondecreasing, and extend to cover") {
    const SubordinatorSpec spec({StableComponent{0.4, 1.0}});
    for (std::size_t i = 0; i < 50; ++i) {
        RandomStream rng(9, i);
        const auto p = sample_path(spec, 0.01, 1e-3, rng, 5.0);
        CHECK(p.values.front() == 0.0);
        CHECK(std::is_sorted(p.values.begin(), p.values.end()));
        CHECK(p.values.back() > 5.0);
    }
    RandomStream rng(1, 1);
    CHECK_THROWS_AS(sample_path(spec, 0.01, 0.1, rng), DomainError);
    CHECK_THROWS_AS(sample_path(SubordinatorSpec({StableComponent{0.9, 1e-9}}), 1.0, 0.5, rng, 1e6),
                    InsufficientHorizon);
}

TEST_CASE("first passage: small levels, monotonicity and continuity") {
    const SubordinatorSpec spec({StableComponent{0.5, 1.0}});
    for (std::size_t i = 0; i < 200; ++i) {
        RandomStream rng(10, i);
        const auto p = sample_path(spec, 1.0, 1e-3, rng, 3.0);
        const double tiny = 0.5 * p.values[1];
        if (tiny > 0.0) {
            CHECK(inverse_at(p, tiny) >= 0.0);
            CHECK(inverse_at(p, tiny) <= p.step);
        }
        double prev = 0.0;
        for (double t = 0.0; t <= 3.0; t += 0.01) {
            const double e = inverse_at(p, t);
            CHECK(e >= prev);
            prev = e;
        }
        // consecutive levels straddling one jump differ by at most one cell
        for (std::size_t k = 1; k + 1 < p.values.size() && k < 200; ++k) {
            if (p.values[k] > p.values[k - 1]) {
                CHECK(inverse_at(p, std::nextafter(p.values[k], 0.0)) - inverse_at(p, p.values[k - 1]) <= p.step * (1 + 1e-12));
            }
        }
    }
    RandomStream rng(2, 2);
    const auto p = sample_path(spec, 0.01, 1e-3, rng);
    CHECK_THROWS_AS(inverse_at(p, p.values.back() + 1.0), InsufficientHorizon);
}

TEST_CASE("inverse relation holds between the two estimators") {
    const SubordinatorSpec spec({StableComponent{0.5, 1.0}});
    for (auto [t, x] : {std::pair{1.0, 1.0}, std::pair{2.0, 0.5}}) {
        const auto r = inverse_relation_check(spec, t, x, 20000, 1e-3, 17);
        CHECK(std::abs(r.z) < 3.0);
    }
}

TEST_CASE("g estimate: normalization, plug-in Laplace, concentration at small t") {
    const SubordinatorSpec spec({StableComponent{0.5, 1.0}});
    const GEstimate g = estimate_g(spec, 1.0, 20000, 1e-3, 21, 0, 80);
    CHECK(g.normalization == doctest::Approx(1.0).epsilon(0.01));
    CHECK_FALSE(g.widened);
    const HEvaluator ev(MixingMeasure::single_atom(0.5, 1.0 / std::sqrt(std::numbers::pi)));
    const MeanEstimate s = g.sample_laplace(1.0);
    CHECK(std::abs(g.laplace(1.0) - ev(1.0, 1.0)) < 3.0 * s.se + 0.005);

    const GEstimate small = estimate_g(spec, 1e-4, 2000, 1e-5, 22, 0, 20);
    // E_t = sqrt(2t)|Z| here, so P(E_t <= sqrt(2t)) = P(|Z| <= 1)
    CHECK(std::abs(small.cdf(std::sqrt(2e-4)) - std::erf(1.0 / std::sqrt(2.0))) < 0.035);
    CHECK(small.cdf(0.05) > 0.99);
    CHECK(estimate_g(spec, 1.0, 500, 1e-3, 23, 0, 10).widened);
}

TEST_CASE("quantizing a density: psi error shrinks from 16 to 64 levels") {
    const MixingMeasure m({}, DensityComponent::polynomial(0.2, 0.8, {0.5, 3.0}));
    double err16 = 0.0, err64 = 0.0;
    const auto q16 = SubordinatorSpec::from_measure(m, 16);
    const auto q64 = SubordinatorSpec::from_measure(m, 64);
    for (double s = 0.1; s <= 10.0; s *= 1.2) {
        const double ref = psi_w(m, s);
        err16 = std::max(err16, std::abs(q16.psi(s) - ref) / ref);
        err64 = std::max(err64, std::abs(q64.psi(s) - ref) / ref);
    }
    CHECK(err16 < 1.0 / 16);
    CHECK(err64 <= err16);
    CHECK(err64 < 1.0 / 64);
}

TEST_CASE("atom mapping reproduces psi_w") {
    const MixingMeasure m({Atom{0.3, 0.7}, Atom{0.8, 0.4}});
    const auto spec = SubordinatorSpec::from_measure(m);
    for (double s : {0.1, 1.0, 10.0}) CHECK(spec.psi(s) == doctest::Approx(psi_w(m, s)).epsilon(1e-13));
    const auto back = spec.equivalent_measure();
    CHECK(back.atoms()[0].weight == doctest::Approx(0.7).epsilon(1e-13));
    CHECK_THROWS_AS((SubordinatorSpec({StableComponent{1.0, 1.0}})), DomainError);
    CHECK_THROWS_AS((SubordinatorSpec({StableComponent{0.5, 0.0}})), DomainError);
    CHECK_THROWS_AS((SubordinatorSpec({})), DomainError);
}

TEST_CASE("estimates are bit-identical across thread counts") {
    const SubordinatorSpec spec({StableComponent{0.3, 0.5}, StableComponent{0.8, 2.0}});
    const auto a = laplace_table(spec, 1.0, {1.0}, 3000, 1e-2, 8, 1);
    const auto b = laplace_table(spec, 1.0, {1.0}, 3000, 1e-2, 8, 4);
    CHECK(a[0].empirical.mean == b[0].empirical.mean);
    CHECK(a[0].empirical.se == b[0].empirical.se);
    const auto g1 = estimate_g(spec, 1.0, 2000, 1e-3, 8, 1, 30);
    const auto g4 = estimate_g(spec, 1.0, 2000, 1e-3, 8, 4, 30);
    CHECK(g1.samples == g4.samples);
    CHECK(g1.density == g4.density);
}

TEST_CASE("increments over disjoint intervals are uncorrelated") {
    const SubordinatorSpec spec({StableComponent{0.5, 1.0}});
    std::vector<double> x(20000), y(20000), xy(20000);
    for (std::size_t i = 0; i < x.size(); ++i) {
        RandomStream rng(31, i);
        const auto p = sample_path(spec, 1.0, 0.01, rng);
        x[i] = std::exp(-p.values[50]);
        y[i] = std::exp(-(p.values[100] - p.values[50]));
        xy[i] = x[i] * y[i];
    }
    const auto ex = mean_estimate(x), ey = mean_estimate(y), exy = mean_estimate(xy);
    CHECK(std::abs(exy.mean - ex.mean * ey.mean) < 4.0 * exy.se);
}
