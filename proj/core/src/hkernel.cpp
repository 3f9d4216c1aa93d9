#include "fracbound/hkernel.hpp"

#include "fracbound/error.hpp"
#include "fracbound/laplace_inversion.hpp"
#include "fracbound/mittag_leffler.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <mutex>
#include <numbers>
#include <unordered_map>

namespace fracbound {

std::string_view to_string(HRoute route) {
    switch (route) {
        case HRoute::MittagLeffler: return "mittag-leffler";
        case HRoute::Kochubei: return "kochubei-integral";
        case HRoute::LaplaceInversion: return "laplace-inversion";
        case HRoute::Auto: return "auto";
    }
    return "auto";
}

HRoute parse_route(std::string_view name) {
    if (name == "mittag-leffler") return HRoute::MittagLeffler;
    if (name == "kochubei-integral" || name == "kochubei") return HRoute::Kochubei;
    if (name == "laplace-inversion") return HRoute::LaplaceInversion;
    if (name == "auto") return HRoute::Auto;
    throw DomainError("unknown h route '" + std::string(name) + "'");
}

struct HEvaluator::Cache {
    struct Key {
        std::uint64_t t;
        std::uint64_t lambda;
        bool operator==(const Key&) const = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const noexcept {
            return std::hash<std::uint64_t>{}(k.t * 0x9E3779B97F4A7C15ULL ^ k.lambda);
        }
    };
    std::mutex mutex;
    std::unordered_map<Key, HValue, KeyHash> values;
};

namespace {

bool single_atom(const MixingMeasure& m) { return m.atoms_only() && m.atoms().size() == 1; }

}  // namespace

HEvaluator::HEvaluator(MixingMeasure measure, HRoute route, HOptions opts)
    : measure_(std::move(measure)),
      route_(route),
      opts_(opts),
      orders_(measure_.order_grid(opts.beta_nodes)),
      cache_(std::make_shared<Cache>()) {
    beta_min_ = *std::min_element(orders_.beta.begin(), orders_.beta.end());
    for (double b : orders_.beta) {
        cos_.push_back(std::cos(b * std::numbers::pi));
        sin_.push_back(std::sin(b * std::numbers::pi));
    }
    if (route_ == HRoute::Auto) {
        if (single_atom(measure_)) {
            route_ = HRoute::MittagLeffler;
        } else if (measure_.density_only()) {
            route_ = HRoute::Kochubei;
        } else {
            route_ = HRoute::LaplaceInversion;
        }
        if (opts_.cross_validate && !(route_ == HRoute::LaplaceInversion &&
                                      opts_.inversion == InversionMethod::Talbot)) {
            for (double t : {0.5, 2.0}) {
                for (double lambda : {1.0, 10.0}) {
                    const double a = evaluate_with(route_, t, lambda).value;
                    const double b = invert(InversionMethod::Talbot, t, lambda);
                    probe_discrepancy_ = std::max(probe_discrepancy_, std::abs(a - b));
                }
            }
        }
    } else if (route_ == HRoute::MittagLeffler && !single_atom(measure_)) {
        throw UnsupportedCase("mittag-leffler route needs a single-atom measure");
    } else if (route_ == HRoute::Kochubei && !measure_.density_only()) {
        throw UnsupportedCase("kochubei-integral route needs a pure density measure");
    }
}

double HEvaluator::transform(double s, double lambda) const {
    const double psi = orders_.psi(s);
    return psi / (s * (lambda + psi));
}

long double HEvaluator::transform(long double s, double lambda) const {
    const long double psi = orders_.psi(s);
    return psi / (s * (lambda + psi));
}

std::complex<double> HEvaluator::transform(std::complex<double> s, double lambda) const {
    const std::complex<double> psi = orders_.psi(s);
    return psi / (s * (lambda + psi));
}

double HEvaluator::kochubei_phi(double r, double lambda) const {
    const double log_r = std::log(r);
    double re = 0.0;
    double im = 0.0;
    for (std::size_t i = 0; i < orders_.size(); ++i) {
        const double mag = orders_.nu[i] * std::exp(orders_.beta[i] * log_r);
        re += mag * cos_[i];
        im += mag * sin_[i];
    }
    return im / ((re + lambda) * (re + lambda) + im * im);
}

HValue HEvaluator::evaluate(double t, double lambda) const {
    if (!(t >= 0.0) || !(lambda >= 0.0)) throw DomainError("h: t and lambda must be >= 0");
    if (t == 0.0 || lambda == 0.0) return {1.0, 0.0, route_, false};
    if (!opts_.memoize) return evaluate_with(route_, t, lambda);
    const Cache::Key key{std::bit_cast<std::uint64_t>(t), std::bit_cast<std::uint64_t>(lambda)};
    {
        std::lock_guard lock(cache_->mutex);
        if (auto it = cache_->values.find(key); it != cache_->values.end()) return it->second;
    }
    const HValue v = evaluate_with(route_, t, lambda);
    std::lock_guard lock(cache_->mutex);
    cache_->values.emplace(key, v);
    return v;
}

HValue HEvaluator::evaluate_with(HRoute route, double t, double lambda) const {
    if (!(t >= 0.0) || !(lambda >= 0.0)) throw DomainError("h: t and lambda must be >= 0");
    if (t == 0.0 || lambda == 0.0) return {1.0, 0.0, route, false};
    switch (route) {
        case HRoute::MittagLeffler:
            if (!single_atom(measure_)) throw UnsupportedCase("mittag-leffler route needs a single-atom measure");
            return mittag_leffler_route(t, lambda);
        case HRoute::Kochubei:
            if (!measure_.density_only()) throw UnsupportedCase("kochubei-integral route needs a pure density measure");
            return kochubei_route(t, lambda);
        case HRoute::LaplaceInversion:
            return inversion_route(t, lambda);
        case HRoute::Auto:
            return evaluate_with(route_, t, lambda);
    }
    return inversion_route(t, lambda);
}

HValue HEvaluator::mittag_leffler_route(double t, double lambda) const {
    const Atom& a = measure_.atoms().front();
    const double scale = a.weight * std::tgamma(1.0 - a.beta);
    const double z = -lambda / scale * std::pow(t, a.beta);
    return {mittag_leffler(a.beta, z), 1e-14, HRoute::MittagLeffler, false};
}

HValue HEvaluator::kochubei_route(double t, double lambda) const {
    // (0, 1]: r = e^{-u} turns r^{-1} dr into du. For a density near beta_0,
    // Phi(e^{-u}) ~ e^{-beta_0 u} / u, so the integrand decays exponentially.
    const double u_max = 40.0 / beta_min_;
    auto inner = [&](double u) {
        const double r = std::exp(-u);
        return std::exp(-t * r) * kochubei_phi(r, lambda);
    };
    // (1, inf): same substitution; e^{-t e^u} is negligible past u = log(45/t).
    const double u_top = std::max(1.0, std::log(45.0 / t));
    auto outer = [&](double u) {
        const double r = std::exp(u);
        return std::exp(-t * r) * kochubei_phi(r, lambda);
    };
    const auto lo = integrate(inner, 0.0, u_max, opts_.kochubei);
    const auto hi = integrate(outer, 0.0, u_top, opts_.kochubei);
    const double pref = lambda / std::numbers::pi;
    return {pref * (lo.value + hi.value), pref * (lo.error + hi.error), HRoute::Kochubei, false};
}

double HEvaluator::invert(InversionMethod method, double t, double lambda) const {
    if (!(t > 0.0)) throw DomainError("h inversion: t must be > 0");
    if (method == InversionMethod::Talbot) {
        return invert_talbot([&](std::complex<double> s) { return transform(s, lambda); }, t, opts_.talbot_nodes);
    }
    return invert_gaver_stehfest([&](long double s) { return transform(s, lambda); }, t, opts_.stehfest_order);
}

HValue HEvaluator::inversion_route(double t, double lambda) const {
    if (opts_.inversion == InversionMethod::GaverStehfest) {
        const double a = invert(InversionMethod::GaverStehfest, t, lambda);
        const double b = invert_gaver_stehfest([&](long double s) { return transform(s, lambda); }, t,
                                               std::max(2, opts_.stehfest_order - 2));
        const bool sane = std::isfinite(a) && a > -1e-3 && a < 1.0 + 1e-3 && std::abs(a - b) < 1e-3;
        if (sane) return {a, std::abs(a - b), HRoute::LaplaceInversion, false};
    }
    const double a = invert(InversionMethod::Talbot, t, lambda);
    const int coarse = std::max(8, (3 * opts_.talbot_nodes) / 4);
    const double b = invert_talbot([&](std::complex<double> s) { return transform(s, lambda); }, t, coarse);
    return {a, std::abs(a - b), HRoute::LaplaceInversion, opts_.inversion == InversionMethod::GaverStehfest};
}

DerivativeCheck h_dt_bound_check(const HEvaluator& ev, double t, double lambda, double slack) {
    if (!(t > 0.0)) throw DomainError("h_dt_bound_check: t must be > 0");
    if (!(lambda >= 0.0)) throw DomainError("h_dt_bound_check: lambda must be >= 0");
    DerivativeCheck out;
    out.t = t;
    out.lambda = lambda;
    if (lambda == 0.0) {
        out.status = DerivativeCheck::Status::Holds;
        return out;
    }
    out.bound = lambda * k_bound(ev.measure(), t) * (1.0 + slack);
    const double step = 1e-4 * t;
    if (step < 1e-12) return out;  // inconclusive
    const double up = ev.evaluate_with(ev.route(), t + step, lambda).value;
    const double down = ev.evaluate_with(ev.route(), t - step, lambda).value;
    out.derivative = std::abs(up - down) / (2.0 * step);
    out.status = out.derivative <= out.bound ? DerivativeCheck::Status::Holds : DerivativeCheck::Status::Violated;
    return out;
}

}  // namespace fracbound
