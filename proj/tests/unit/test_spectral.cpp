#include "doctest.h"
#include "oracles.hpp"

#include "fracbound/eigenbasis.hpp"
#include "fracbound/error.hpp"
#include "fracbound/fracops.hpp"
#include "fracbound/spectral.hpp"

#include <cmath>
#include <numbers>

using namespace fracbound;

namespace {

constexpr double pi = std::numbers::pi;
const BoxDomain kLine = BoxDomain::interval(pi);
const Point kMid{pi / 2, 0, 0};

MixingMeasure half_atom() { return MixingMeasure::single_atom(0.5, 1.0 / std::sqrt(pi)); }
MixingMeasure uniform_density() { return MixingMeasure({}, DensityComponent::constant(0.25, 0.75, 2.0)); }
InitialDatum sin_x() { return InitialDatum::eigenmode({1, 0, 0}, std::sqrt(pi / 2)); }

double observed_order(const SpectralSolution& sol, double t_min) {
    std::vector<double> errs;
    for (std::size_t k : {500u, 1000u, 2000u}) {
        ResidualOptions o;
        o.t_min = t_min;
        errs.push_back(verify_residual(sol, uniform_grid(2.0, k), {kMid}, o).max_abs);
    }
    return std::log2(errs[1] / errs[2]);
}

}  // namespace

TEST_CASE("single mode collapses to h times the mode") {
    for (const auto& m : {half_atom(), uniform_density()}) {
        const SpectralSolution sol(kLine, sin_x(), m, 4);
        for (double t : {0.1, 1.0, 3.0}) {
            for (double x : {0.3, 1.2, 2.9}) {
                CHECK(sol(t, {x, 0, 0}) == doctest::Approx(sol.kernel()(t, 1.0) * std::sin(x)).epsilon(1e-13));
            }
        }
    }
}

TEST_CASE("single atom with psi = sqrt(s): u(1, pi/2) = E_{1/2}(-1)") {
    const SpectralSolution sol(kLine, sin_x(), half_atom(), 8);
    CHECK(sol(1.0, kMid) == doctest::Approx(oracle::erfcx(1.0)).epsilon(1e-10));
    CHECK(std::abs(sol(1.0, kMid) - 0.4275836) < 1e-6);
}

TEST_CASE("zero datum gives the zero field and a zero residual") {
    const SpectralSolution sol(kLine, InitialDatum::zero(), half_atom(), 6);
    const auto field = evaluate_field(sol, {0.0, 0.5, 1.0}, {{0.2, 0, 0}, kMid});
    for (double v : field.values) CHECK(v == 0.0);
    const auto rep = verify_residual(sol, uniform_grid(1.0, 100), {kMid});
    CHECK(rep.max_abs == 0.0);
    CHECK(rep.status == ResidualReport::Status::Pass);
}

TEST_CASE("single order matches an independent Mittag-Leffler series solver") {
    const BoxDomain dom({1.0, 2.0});
    const auto f = InitialDatum::bump({0.4, 1.1, 0}, 0.35);
    const double w = 0.6;
    const double beta = 0.4;
    const SpectralSolution sol(dom, f, MixingMeasure::single_atom(beta, w), 60);
    const double a = w * std::tgamma(1.0 - beta);
    const auto& c = sol.coefficients();
    for (double t : {0.2, 1.5}) {
        for (const Point& x : {Point{0.4, 1.1, 0}, Point{0.8, 0.3, 0}}) {
            double ref = 0.0;
            for (std::size_t n = 0; n < c.size(); ++n) {
                ref += c.values[n] * eigenfunction(dom, c.eigens[n].index, x) *
                       oracle::h_single_atom_cut(beta, a, t, c.eigens[n].lambda);
            }
            CHECK(std::abs(sol(t, x) - ref) < 1e-8);
        }
    }
}

TEST_CASE("truncation: single eigenmode picks its sorted index") {
    const auto choice = choose_truncation(kLine, InitialDatum::eigenmode({5, 0, 0}), 1e-10);
    CHECK(choice.count == 5);
    CHECK(choice.warning.empty());
    const BoxDomain sq({1.0, 1.0});
    const auto c2 = choose_truncation(sq, InitialDatum::eigenmode({2, 1, 0}), 1e-10);
    CHECK(c2.count == 3);
}

TEST_CASE("truncation: smooth bump tail verified by direct summation") {
    const auto f = InitialDatum::bump({1.3, 0, 0}, 1.0);
    const auto choice = choose_truncation(kLine, f, 1e-8);
    CHECK(choice.count < 512);
    CHECK(choice.classical_threshold);
    CHECK(choice.warning.empty());
    const auto all = project(kLine, f, 512);
    double tail = 0.0;
    for (std::size_t n = choice.count; n < all.size(); ++n) tail += std::abs(all.values[n]) * std::sqrt(2.0 / pi);
    CHECK(tail <= 1e-8);
}

TEST_CASE("truncation: indicator takes the warning path") {
    const auto f = InitialDatum::indicator({1.0, 0, 0}, {2.0, 0, 0});
    const auto choice = choose_truncation(kLine, f, 1e-6);
    CHECK_FALSE(choice.warning.empty());
    CHECK_FALSE(choice.classical_threshold);
    const SpectralSolution sol(kLine, f, half_atom(), 64);
    CHECK_FALSE(sol.classical());
    CHECK_FALSE(sol.warning().empty());
}

TEST_CASE("residual shrinks under refinement for a single order") {
    const SpectralSolution sol(kLine, sin_x(), half_atom(), 4);
    const double order = observed_order(sol, 0.1);
    CHECK(order >= 1.2);
}

TEST_CASE("density residual at step 1e-3 is below 1e-3") {
    const SpectralSolution sol(kLine, sin_x(), uniform_density(), 4);
    ResidualOptions o;
    o.t_min = 0.5;
    const auto rep = verify_residual(sol, uniform_grid(2.0, 2000), {kMid, {1.0, 0, 0}}, o);
    CHECK(rep.max_abs <= 1e-3);
    CHECK(rep.status == ResidualReport::Status::Pass);
    ResidualOptions strict = o;
    strict.tolerance = 1e-9;
    const auto coarse = verify_residual(sol, uniform_grid(2.0, 40), {kMid}, strict);
    CHECK(coarse.status == ResidualReport::Status::Inconclusive);
    CHECK_FALSE(coarse.note.empty());
    CHECK_THROWS_AS(verify_residual(sol, {0.5, 1.0}, {kMid}), DomainError);
}

TEST_CASE("decay estimate, boundary and initial datum") {
    const auto two = InitialDatum::modes({{{1, 0, 0}, 1.0}, {{3, 0, 0}, -0.4}});
    const SpectralSolution sol(kLine, two, uniform_density(), 8);
    const double f_norm = std::sqrt(sol.coefficients().norm_sq);
    for (double t : {0.1, 0.5, 1.0, 2.0, 5.0}) {
        CHECK(sol.l2_norm(t) <= sol.kernel()(t, 1.0) * f_norm * (1.0 + 1e-6));
        for (double x : {0.0, pi}) CHECK(std::abs(sol(t, {x, 0, 0})) <= sol.tail_bound());
    }
    const SpectralSolution bump(kLine, InitialDatum::bump({1.0, 0, 0}, 0.8), half_atom(), 48);
    double prev = std::numeric_limits<double>::infinity();
    for (double t : {1e-1, 1e-2, 1e-3}) {
        const double d = bump.distance_to_datum(t);
        CHECK(d < prev);
        prev = d;
    }
    CHECK(bump(0.0, {0.7, 0, 0}) == InitialDatum::bump({1.0, 0, 0}, 0.8)(kLine, {0.7, 0, 0}));
}

TEST_CASE("higher modes decay faster") {
    const SpectralSolution sol(kLine, InitialDatum::modes({{{1, 0, 0}, 1.0}, {{2, 0, 0}, 1.0}}), half_atom(), 4);
    double prev = 1.0;
    for (double t = 0.05; t < 20.0; t *= 1.4) {
        const double r = sol.kernel()(t, 4.0) / sol.kernel()(t, 1.0);
        CHECK(r <= prev + 1e-12);
        prev = r;
    }
}

TEST_CASE("field errors and boundary rows") {
    const BoxDomain sq({1.0, 1.0});
    const SpectralSolution sol(sq, InitialDatum::bump({0.5, 0.5, 0}, 0.4), uniform_density(), 40);
    const auto field = evaluate_field(sol, {0.0, 0.3}, {{0.0, 0.5, 0}, {0.5, 0.5, 0}, {1.0, 0.2, 0}});
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(std::isfinite(field.value(i, 1)));
        CHECK(field.error(i, 1) >= 0.0);
        CHECK(std::abs(field.value(i, 0)) <= std::max(field.error(i, 0), 1e-15));
        CHECK(std::abs(field.value(i, 2)) <= std::max(field.error(i, 2), 1e-15));
    }
    CHECK_THROWS_AS(evaluate_field(sol, {0.1}, {{1.5, 0.5, 0}}), DomainError);
    CHECK_THROWS_AS((SpectralSolution(sq, InitialDatum::zero(), uniform_density(), 0)), DomainError);
}

TEST_CASE("parallel assembly is deterministic") {
    const BoxDomain sq({1.0, 1.0});
    SpectralOptions one, four;
    one.threads = 1;
    four.threads = 4;
    const auto f = InitialDatum::bump({0.3, 0.6, 0}, 0.25);
    const SpectralSolution a(sq, f, uniform_density(), 30, one);
    const SpectralSolution b(sq, f, uniform_density(), 30, four);
    const std::vector<Point> pts{{0.2, 0.2, 0}, {0.6, 0.7, 0}};
    CHECK(evaluate_field(a, {0.1, 1.0}, pts).values == evaluate_field(b, {0.1, 1.0}, pts).values);
}
