#include "doctest.h"
#include "oracles.hpp"

#include "fracbound/error.hpp"
#include "fracbound/mixing.hpp"

#include <cmath>
#include <numbers>

using namespace fracbound;

namespace {

MixingMeasure uniform_density() {
    return MixingMeasure({}, DensityComponent::constant(0.25, 0.75, 2.0));
}

double dense(const std::function<double(double)>& f) { return oracle::trapezoid(f, 0.25, 0.75, 1'000'000); }

}  // namespace

TEST_CASE("psi_w examples") {
    const auto atom = MixingMeasure::single_atom(0.5, 1.0);
    CHECK(psi_w(atom, 0.0) == 0.0);
    CHECK(psi_w(atom, 1.0) == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-14));
    const double ref = dense([](double b) { return 2.0 * std::tgamma(1.0 - b); });
    CHECK(psi_w(uniform_density(), 1.0) == doctest::Approx(ref).epsilon(1e-10));
    CHECK_THROWS_AS(psi_w(atom, -1.0), DomainError);
}

TEST_CASE("levy_tail examples") {
    const auto atom = MixingMeasure::single_atom(0.5, 1.0);
    CHECK(levy_tail(atom, 1.0) == doctest::Approx(1.0));
    CHECK(levy_tail(atom, 4.0) == doctest::Approx(0.5));
    // Antiderivative of 2 * 2^{-b} is -2 * 2^{-b} / ln 2.
    auto anti = [](double b) { return -2.0 * std::pow(2.0, -b) / std::log(2.0); };
    CHECK(levy_tail(uniform_density(), 2.0) == doctest::Approx(anti(0.75) - anti(0.25)).epsilon(1e-12));
    CHECK_THROWS_AS(levy_tail(atom, 0.0), DomainError);
}

TEST_CASE("constant_c examples") {
    const double ref = dense([](double b) { return std::sin(b * std::numbers::pi) * std::tgamma(1.0 - b) * 2.0; });
    CHECK(constant_c(uniform_density()) == doctest::Approx(ref).epsilon(1e-10));
    CHECK_THROWS_AS(constant_c(MixingMeasure({Atom{0.5, 1.0}}, DensityComponent::constant(0.25, 0.75, 0.0))),
                    DomainError);
    CHECK_THROWS_AS(constant_c(MixingMeasure::single_atom(0.5)), UnsupportedCase);

    // Symmetric support and constant p: both halves from the same quadrature.
    const MixingMeasure sym({}, DensityComponent::constant(0.3, 0.7, 1.0));
    auto g = [](double b) { return std::sin(b * std::numbers::pi) * std::tgamma(1.0 - b); };
    const double halves = oracle::trapezoid(g, 0.3, 0.5, 400'000) + oracle::trapezoid(g, 0.5, 0.7, 400'000);
    CHECK(constant_c(sym) == doctest::Approx(halves).epsilon(1e-10));
}

TEST_CASE("k_bound examples and monotonicity") {
    const double c = constant_c(uniform_density());
    const double expected = (std::tgamma(0.25) + std::tgamma(0.75)) / (c * std::numbers::pi);
    CHECK(k_bound(uniform_density(), 1.0) == doctest::Approx(expected).epsilon(1e-12));
    // c = 1 means weight 1 / Gamma(1/2).
    const auto atom = MixingMeasure::single_atom(0.5, 1.0 / std::tgamma(0.5));
    CHECK(k_bound(atom, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
    double prev = std::numeric_limits<double>::infinity();
    for (double t = 0.01; t < 1e4; t *= 1.7) {
        const double k = k_bound(uniform_density(), t);
        CHECK(k > 0.0);
        CHECK(k <= prev);
        prev = k;
    }
    CHECK(k_bound(uniform_density(), 1e12) < 1e-2);
    CHECK_THROWS_AS(k_bound(atom, 0.0), DomainError);
}

TEST_CASE("construction rules") {
    CHECK_THROWS_AS(MixingMeasure::single_atom(1.0), DomainError);
    CHECK_THROWS_AS(MixingMeasure::single_atom(0.0), DomainError);
    CHECK_THROWS_AS(MixingMeasure::single_atom(0.5, -1.0), DomainError);
    CHECK_THROWS_AS((MixingMeasure(std::vector<Atom>{})), DomainError);
    CHECK_THROWS_AS(DensityComponent::constant(0.6, 0.4, 1.0), DomainError);
    CHECK_THROWS_AS(DensityComponent::tabulated({{0.3, 1.0}, {0.5, -1.0}}), DomainError);
    const MixingMeasure merged({Atom{0.4, 1.0}, Atom{0.4, 0.5}});
    REQUIRE(merged.atoms().size() == 1);
    CHECK(merged.atoms()[0].weight == doctest::Approx(1.5));
    CHECK(merged.admissibility_integral() == doctest::Approx(1.5 / 0.6));
}

TEST_CASE("tabulated and polynomial densities agree with their closed forms") {
    const MixingMeasure tab({}, DensityComponent::tabulated({{0.25, 2.0}, {0.75, 2.0}}));
    CHECK(psi_w(tab, 3.0) == doctest::Approx(psi_w(uniform_density(), 3.0)).epsilon(1e-12));
    const MixingMeasure poly({}, DensityComponent::polynomial(0.2, 0.8, {1.0, 2.0}));
    const double ref = oracle::trapezoid([](double b) { return std::pow(2.0, b) * std::tgamma(1.0 - b) * (1.0 + 2.0 * b); },
                                         0.2, 0.8, 1'000'000);
    CHECK(psi_w(poly, 2.0) == doctest::Approx(ref).epsilon(1e-10));
}

TEST_CASE("psi_w is a Bernstein-like function on a grid") {
    const MixingMeasure mixed({Atom{0.3, 0.7}, Atom{0.8, 0.4}}, DensityComponent::constant(0.25, 0.75, 2.0));
    double prev = 0.0, prev_diff = std::numeric_limits<double>::infinity();
    for (int i = 1; i <= 60; ++i) {
        const double v = psi_w(mixed, 0.2 * i);
        const double diff = v - prev;
        CHECK(diff >= 0.0);
        if (i > 1) CHECK(diff <= prev_diff + 1e-12);
        prev = v;
        prev_diff = diff;
    }
}

TEST_CASE("psi_w is additive over atoms") {
    const MixingMeasure both({Atom{0.3, 0.7}, Atom{0.8, 0.4}});
    for (double s : {0.1, 1.0, 7.5}) {
        const double split = psi_w(MixingMeasure::single_atom(0.3, 0.7), s) + psi_w(MixingMeasure::single_atom(0.8, 0.4), s);
        CHECK(psi_w(both, s) == doctest::Approx(split).epsilon(1e-14));
    }
}

TEST_CASE("levy tail growth bounds for a density") {
    const auto m = uniform_density();
    double big = 0.0, small = 0.0;
    for (double t = 1.0; t < 1e8; t *= 10.0) big = std::max(big, levy_tail(m, t) * std::pow(t, 0.25));
    for (double t = 1.0; t > 1e-8; t /= 10.0) small = std::max(small, levy_tail(m, t) * std::pow(t, 0.75));
    CHECK(big < 10.0);
    CHECK(small < 10.0);
    double prev = std::numeric_limits<double>::infinity();
    for (double t = 1e-3; t < 1e3; t *= 2.0) {
        CHECK(levy_tail(m, t) < prev);
        prev = levy_tail(m, t);
    }
}

TEST_CASE("order grid reproduces psi_w") {
    const MixingMeasure mixed({Atom{0.3, 0.7}}, DensityComponent::constant(0.25, 0.75, 2.0));
    const OrderGrid g = mixed.order_grid(64);
    for (double s : {0.1, 1.0, 10.0}) CHECK(g.psi(s) == doctest::Approx(psi_w(mixed, s)).epsilon(1e-12));
}
