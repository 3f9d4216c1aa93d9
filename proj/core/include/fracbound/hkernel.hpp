#pragma once

#include "fracbound/mixing.hpp"
#include "fracbound/quadrature.hpp"

#include <complex>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace fracbound {

enum class HRoute { MittagLeffler, Kochubei, LaplaceInversion, Auto };
enum class InversionMethod { Talbot, GaverStehfest };

std::string_view to_string(HRoute route);
HRoute parse_route(std::string_view name);

struct HOptions {
    InversionMethod inversion = InversionMethod::Talbot;
    int talbot_nodes = 32;
    int stehfest_order = 18;
    /// Gauss nodes in beta for the density part of psi_W.
    std::size_t beta_nodes = 128;
    QuadratureOptions kochubei{1e-13, 1e-11, 15};
    /// Auto route: compare against Talbot on a probe grid at construction.
    bool cross_validate = true;
    bool memoize = true;
};

struct HValue {
    double value = 1.0;
    double est_error = 0.0;
    HRoute route = HRoute::Auto;
    /// Gaver-Stehfest was requested but rejected in favour of Talbot.
    bool fell_back = false;
};

/// h(t, lambda) = E[exp(-lambda E_t)], the temporal eigenfunction of the
/// distributed-order derivative: D^(nu) h = -lambda h, h(0, lambda) = 1, with
/// Laplace transform h~(s, lambda) = psi_W(s) / (s (lambda + psi_W(s))).
///
/// Routes:
///  - MittagLeffler (single atom): E_beta(-lambda t^beta / (w Gamma(1-beta)));
///  - Kochubei (pure density): h = (lambda/pi) int_0^inf r^{-1} e^{-tr} Phi(r) dr,
///    Phi = Im psi(r e^{i pi}) / |lambda + psi(r e^{i pi})|^2, split at r = 1;
///  - LaplaceInversion: Talbot (default) or Gaver-Stehfest on h~.
///
/// Copies share the memo cache. Evaluation is thread-safe.
class HEvaluator {
public:
    explicit HEvaluator(MixingMeasure measure, HRoute route = HRoute::Auto, HOptions opts = {});

    HValue evaluate(double t, double lambda) const;
    double operator()(double t, double lambda) const { return evaluate(t, lambda).value; }

    /// Evaluates through an explicit route, bypassing the cache.
    HValue evaluate_with(HRoute route, double t, double lambda) const;

    /// Laplace inversion with an explicit method (no fallback).
    double invert(InversionMethod method, double t, double lambda) const;

    double transform(double s, double lambda) const;
    long double transform(long double s, double lambda) const;
    std::complex<double> transform(std::complex<double> s, double lambda) const;

    /// Phi(r, 1) of the Kochubei representation.
    double kochubei_phi(double r, double lambda) const;

    /// Resolved route (never Auto).
    HRoute route() const noexcept { return route_; }
    const MixingMeasure& measure() const noexcept { return measure_; }
    const OrderGrid& orders() const noexcept { return orders_; }
    const HOptions& options() const noexcept { return opts_; }

    /// Largest |route - Talbot| seen on the construction probe grid (0 if skipped).
    double probe_discrepancy() const noexcept { return probe_discrepancy_; }

private:
    HValue mittag_leffler_route(double t, double lambda) const;
    HValue kochubei_route(double t, double lambda) const;
    HValue inversion_route(double t, double lambda) const;

    struct Cache;

    MixingMeasure measure_;
    HRoute route_;
    HOptions opts_;
    OrderGrid orders_;
    std::vector<double> cos_;
    std::vector<double> sin_;
    double beta_min_ = 0.5;
    double probe_discrepancy_ = 0.0;
    std::shared_ptr<Cache> cache_;
};

/// Outcome of comparing |d/dt h| (central differences) with lambda k(t).
struct DerivativeCheck {
    enum class Status { Holds, Violated, Inconclusive };

    double t = 0.0;
    double lambda = 0.0;
    double derivative = 0.0;  // |d/dt h|
    double bound = 0.0;       // lambda k(t) (1 + slack)
    Status status = Status::Inconclusive;
};

DerivativeCheck h_dt_bound_check(const HEvaluator& ev, double t, double lambda, double slack = 0.05);

}  // namespace fracbound
