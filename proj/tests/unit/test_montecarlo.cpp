#include "doctest.h"

#include "fracbound/error.hpp"
#include "fracbound/montecarlo.hpp"
#include "fracbound/spectral.hpp"

#include <cmath>
#include <numbers>

using namespace fracbound;

namespace {

constexpr double pi = std::numbers::pi;
const BoxDomain kLine = BoxDomain::interval(pi);
const Point kMid{pi / 2, 0, 0};
const SubordinatorSpec kHalf({StableComponent{0.5, 1.0}});

InitialDatum sin_x() { return InitialDatum::eigenmode({1, 0, 0}, std::sqrt(pi / 2)); }
InitialDatum one() { return InitialDatum::custom([](const Point&) { return 1.0; }); }

}  // namespace

TEST_CASE("zero datum gives exactly zero") {
    const auto e = estimate_u(kLine, InitialDatum::zero(), kHalf, 1.0, kMid, 200, 1);
    CHECK(e.mean == 0.0);
    CHECK(e.se == 0.0);
}

TEST_CASE("single mode agrees with the spectral value") {
    McOptions o;
    o.bridge_correction = true;
    const auto e = estimate_u(kLine, sin_x(), kHalf, 1.0, kMid, 20000, 2, o);
    const SpectralSolution sol(kLine, sin_x(), SubordinatorSpec(kHalf).equivalent_measure(), 4);
    CHECK(std::abs(e.mean - sol(1.0, kMid)) <= 3.0 * e.se + 0.01);
}

TEST_CASE("small t returns the datum") {
    McOptions o;
    o.euler_step = 1e-6;
    o.subordinator_step = 1e-6;
    const Point x{1.0, 0, 0};
    const auto e = estimate_u(kLine, sin_x(), kHalf, 1e-9, x, 10000, 3, o);
    CHECK(std::abs(e.mean - std::sin(1.0)) <= 3.0 * e.se + 1e-12);
    CHECK(estimate_u(kLine, sin_x(), kHalf, 0.0, x, 100, 3).mean == doctest::Approx(std::sin(1.0)).epsilon(1e-15));
}

TEST_CASE("survival probability is in [0, 1] and nonincreasing in t") {
    McOptions o;
    o.euler_step = 4e-3;
    o.subordinator_step = 4e-3;
    double prev = 1.0, prev_se = 0.0;
    for (double t : {0.25, 0.5, 1.0, 2.0}) {
        const auto e = estimate_u(kLine, one(), kHalf, t, {1.0, 0, 0}, 4000, 4, o);
        CHECK(e.mean >= 0.0);
        CHECK(e.mean <= 1.0);
        CHECK(e.mean <= prev + 3.0 * std::hypot(e.se, prev_se));
        prev = e.mean;
        prev_se = e.se;
    }
}

TEST_CASE("standard error scales like paths^{-1/2}") {
    McOptions o;
    o.euler_step = 1e-2;
    o.subordinator_step = 1e-2;
    std::vector<double> scaled;
    for (std::size_t n : {1000u, 10000u, 100000u}) {
        const auto e = estimate_u(kLine, sin_x(), kHalf, 1.0, kMid, n, 5, o);
        CHECK(e.paths == n);
        scaled.push_back(e.se * std::sqrt(static_cast<double>(n)));
    }
    for (double s : scaled) CHECK(s == doctest::Approx(scaled.back()).epsilon(0.2));
}

TEST_CASE("estimates are bit-identical across runs and worker counts") {
    const BoxDomain sq({1.0, 1.0});
    const SubordinatorSpec two({StableComponent{0.3, 0.5}, StableComponent{0.8, 2.0}});
    const auto f = InitialDatum::bump({0.5, 0.5, 0}, 0.4);
    McOptions a, b;
    a.threads = 1;
    b.threads = 4;
    const auto x = estimate_u(sq, f, two, 0.2, {0.4, 0.5, 0}, 3000, 6, a);
    const auto y = estimate_u(sq, f, two, 0.2, {0.4, 0.5, 0}, 3000, 6, b);
    const auto z = estimate_u(sq, f, two, 0.2, {0.4, 0.5, 0}, 3000, 6, a);
    CHECK(x.mean == y.mean);
    CHECK(x.se == y.se);
    CHECK(x.mean == z.mean);
}

TEST_CASE("killed path invariants") {
    const BoxDomain sq({1.0, 2.0});
    const Point start{0.1, 1.0, 0};
    for (std::size_t i = 0; i < 200; ++i) {
        RandomStream rng(7, i);
        const auto p = simulate_killed_path(sq, start, 0.3, 1e-3, rng, false, true);
        CHECK(p.path.front() == start);
        bool left = false;
        for (const auto& q : p.path) left = left || !sq.contains(q);
        CHECK(left == p.exited);
        if (p.exited) {
            CHECK(p.exit_time <= 0.3);
            CHECK_FALSE(sq.contains(p.path.back()));
        }
    }
}

TEST_CASE("brownian increments have variance 2 dt per axis") {
    const BoxDomain big({1e6, 1e6});
    double s2 = 0.0;
    const std::size_t n = 20000;
    for (std::size_t i = 0; i < n; ++i) {
        RandomStream rng(8, i);
        const auto p = simulate_killed_path(big, {5e5, 5e5, 0}, 0.5, 0.01, rng);
        s2 += std::pow(p.terminal[0] - 5e5, 2) + std::pow(p.terminal[1] - 5e5, 2);
    }
    CHECK(s2 / n / 2.0 == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("argument checks") {
    CHECK_THROWS_AS(estimate_u(kLine, sin_x(), kHalf, 1.0, {0.0, 0, 0}, 200, 1), DomainError);
    CHECK_THROWS_AS(estimate_u(kLine, sin_x(), kHalf, 1.0, kMid, 10, 1), DomainError);
    CHECK_THROWS_AS(estimate_u(kLine, sin_x(), kHalf, -1.0, kMid, 200, 1), DomainError);
}

TEST_CASE("commutation: far from the boundary both indicators agree") {
    const BoxDomain huge = BoxDomain::interval(1e4);
    const auto r = check_commutation(huge, kHalf, 1.0, {5e3, 0, 0}, 500, 9);
    for (const auto& l : r.levels) CHECK(l.disagreements == 0);
}

TEST_CASE("commutation: disagreement rate falls under refinement") {
    const auto r = check_commutation(kLine, kHalf, 1.0, kMid, 10000, 10);
    REQUIRE(r.levels.size() == 3);
    CHECK(r.levels[1].step == doctest::Approx(r.levels[0].step / 2));
    CHECK(r.non_increasing);
    CHECK(r.final_rate < 0.02);
}

TEST_CASE("ctrw against the time-changed Brownian motion") {
    const auto m = MixingMeasure::single_atom(0.5, 1.0 / std::sqrt(pi));
    const auto zero = ctrw_check(kLine, InitialDatum::zero(), m, 1.0, kMid, 500, 100.0, 11);
    CHECK(zero.ctrw.mean == 0.0);
    CHECK(zero.reference.mean == 0.0);

    CtrwOptions o;
    o.reference_paths = 20000;
    const auto coarse = ctrw_check(kLine, sin_x(), m, 1.0, kMid, 10000, 1e2, 12, o);
    const auto fine = ctrw_check(kLine, sin_x(), m, 1.0, kMid, 10000, 1e4, 12, o);
    CHECK(std::abs(fine.z) < 3.0);
    CHECK(std::abs(fine.z) <= std::max(std::abs(coarse.z), 3.0));
    CHECK(fine.mean_jumps > coarse.mean_jumps);
    CHECK_THROWS_AS(ctrw_check(kLine, sin_x(), MixingMeasure({}, DensityComponent::constant(0.3, 0.6, 1.0)), 1.0, kMid,
                               100, 1e2, 1),
                    UnsupportedCase);
}
