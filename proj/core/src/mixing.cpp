#include "fracbound/mixing.hpp"

#include "fracbound/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

namespace fracbound {

namespace {

void check_order(double beta, const char* what) {
    if (!(beta > MixingMeasure::kBoundaryGuard && beta < 1.0 - MixingMeasure::kBoundaryGuard)) {
        std::ostringstream os;
        os << what << " " << beta << " must lie strictly inside (0, 1)";
        throw DomainError(os.str());
    }
}

}  // namespace

// ---- DensityComponent -------------------------------------------------------

DensityComponent DensityComponent::tabulated(std::vector<std::pair<double, double>> nodes) {
    if (nodes.size() < 2) throw DomainError("tabulated density needs at least two nodes");
    std::sort(nodes.begin(), nodes.end());
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        if (!(nodes[i + 1].first > nodes[i].first))
            throw DomainError("tabulated density nodes must have distinct orders");
    }
    for (const auto& [b, p] : nodes) {
        check_order(b, "density node");
        if (!(p >= 0.0) || !std::isfinite(p)) throw DomainError("density values must be finite and >= 0");
    }
    DensityComponent d;
    d.form_ = Form::Tabulated;
    d.beta0_ = nodes.front().first;
    d.beta1_ = nodes.back().first;
    d.nodes_ = std::move(nodes);
    return d;
}

DensityComponent DensityComponent::constant(double beta0, double beta1, double value) {
    check_order(beta0, "density beta0");
    check_order(beta1, "density beta1");
    if (!(beta1 > beta0)) throw DomainError("density support needs beta0 < beta1");
    if (!(value >= 0.0) || !std::isfinite(value)) throw DomainError("density value must be finite and >= 0");
    DensityComponent d;
    d.form_ = Form::Constant;
    d.beta0_ = beta0;
    d.beta1_ = beta1;
    d.coeffs_ = {value};
    return d;
}

DensityComponent DensityComponent::polynomial(double beta0, double beta1, std::vector<double> coeffs) {
    check_order(beta0, "density beta0");
    check_order(beta1, "density beta1");
    if (!(beta1 > beta0)) throw DomainError("density support needs beta0 < beta1");
    if (coeffs.empty()) throw DomainError("polynomial density needs coefficients");
    DensityComponent d;
    d.form_ = Form::Polynomial;
    d.beta0_ = beta0;
    d.beta1_ = beta1;
    d.coeffs_ = std::move(coeffs);
    // nonnegativity is checked on a fine grid; a polynomial dipping below
    // zero between samples is not caught
    constexpr int kSamples = 1001;
    for (int i = 0; i < kSamples; ++i) {
        const double b = beta0 + (beta1 - beta0) * i / (kSamples - 1);
        if (!(d(b) >= 0.0)) throw DomainError("polynomial density is negative on its support");
    }
    return d;
}

double DensityComponent::operator()(double beta) const {
    if (beta < beta0_ || beta > beta1_) return 0.0;
    switch (form_) {
        case Form::Constant:
            return coeffs_[0];
        case Form::Polynomial: {
            double acc = 0.0;
            for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * beta + *it;
            return acc;
        }
        case Form::Tabulated: {
            auto hi = std::upper_bound(nodes_.begin(), nodes_.end(), beta,
                                       [](double b, const auto& n) { return b < n.first; });
            if (hi == nodes_.end()) return nodes_.back().second;
            if (hi == nodes_.begin()) return nodes_.front().second;
            auto lo = hi - 1;
            const double w = (beta - lo->first) / (hi->first - lo->first);
            return (1.0 - w) * lo->second + w * hi->second;
        }
    }
    return 0.0;
}

std::vector<double> DensityComponent::breakpoints() const {
    if (form_ != Form::Tabulated) return {beta0_, beta1_};
    std::vector<double> out;
    out.reserve(nodes_.size());
    for (const auto& n : nodes_) out.push_back(n.first);
    return out;
}

bool DensityComponent::identically_zero() const {
    switch (form_) {
        case Form::Constant:
            return coeffs_[0] == 0.0;
        case Form::Polynomial:
            return std::all_of(coeffs_.begin(), coeffs_.end(), [](double c) { return c == 0.0; });
        case Form::Tabulated:
            return std::all_of(nodes_.begin(), nodes_.end(), [](const auto& n) { return n.second == 0.0; });
    }
    return false;
}

// ---- OrderGrid -------------------------------------------------------------

double OrderGrid::psi(double s) const {
    if (s == 0.0) return 0.0;
    double acc = 0.0;
    for (std::size_t i = 0; i < beta.size(); ++i) acc += nu[i] * std::pow(s, beta[i]);
    return acc;
}

long double OrderGrid::psi(long double s) const {
    if (s == 0.0L) return 0.0L;
    long double acc = 0.0L;
    for (std::size_t i = 0; i < beta.size(); ++i) {
        acc += static_cast<long double>(nu[i]) * std::pow(s, static_cast<long double>(beta[i]));
    }
    return acc;
}

std::complex<double> OrderGrid::psi(std::complex<double> s) const {
    if (s == 0.0) return 0.0;
    const std::complex<double> log_s = std::log(s);
    std::complex<double> acc = 0.0;
    for (std::size_t i = 0; i < beta.size(); ++i) acc += nu[i] * std::exp(beta[i] * log_s);
    return acc;
}

// ---- MixingMeasure ---------------------------------------------------------

MixingMeasure::MixingMeasure(std::vector<Atom> atoms, std::optional<DensityComponent> density,
                             QuadratureOptions quadrature)
    : density_(std::move(density)), quadrature_(quadrature) {
    std::map<double, double> merged;
    for (const auto& a : atoms) {
        check_order(a.beta, "atom order");
        if (!(a.weight > 0.0) || !std::isfinite(a.weight))
            throw DomainError("atom weights must be finite and strictly positive");
        merged[a.beta] += a.weight;
    }
    atoms_.reserve(merged.size());
    for (const auto& [b, w] : merged) atoms_.push_back({b, w});

    if (!(total_mass() > 0.0)) throw DomainError("mixing measure must have positive total mass");
    const double adm = admissibility_integral();
    if (!std::isfinite(adm)) throw DomainError("mixing measure violates int (1-beta)^{-1} mu(d beta) < inf");
}

QuadratureResult MixingMeasure::integrate_density(const std::function<double(double)>& f) const {
    if (!density_) return {};
    const auto breaks = density_->breakpoints();
    QuadratureResult total;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const auto& p = *density_;
        auto r = fracbound::integrate([&](double b) { return f(b) * p(b); }, breaks[i], breaks[i + 1],
                                      quadrature_);
        total.value += r.value;
        total.error += r.error;
    }
    return total;
}

double MixingMeasure::integrate(const std::function<double(double)>& f) const {
    double acc = 0.0;
    for (const auto& a : atoms_) acc += a.weight * f(a.beta);
    return acc + integrate_density(f).value;
}

double MixingMeasure::total_mass() const {
    return integrate([](double) { return 1.0; });
}

double MixingMeasure::admissibility_integral() const {
    return integrate([](double b) { return 1.0 / (1.0 - b); });
}

OrderGrid MixingMeasure::order_grid(std::size_t density_nodes) const {
    OrderGrid g;
    for (const auto& a : atoms_) {
        g.beta.push_back(a.beta);
        g.nu.push_back(a.weight * std::tgamma(1.0 - a.beta));
    }
    if (density_ && !density_->identically_zero()) {
        const auto breaks = density_->breakpoints();
        const std::size_t panels = breaks.size() - 1;
        const std::size_t per_panel = std::max<std::size_t>(4, (density_nodes + panels - 1) / panels);
        const GaussRule rule = composite_gauss_legendre(breaks, per_panel);
        for (std::size_t i = 0; i < rule.size(); ++i) {
            const double b = rule.nodes[i];
            g.beta.push_back(b);
            g.nu.push_back(rule.weights[i] * (*density_)(b) * std::tgamma(1.0 - b));
        }
    }
    return g;
}

// ---- scalar functionals ----------------------------------------------------

double psi_w(const MixingMeasure& m, double s) {
    if (!(s >= 0.0)) throw DomainError("psi_w: s must be >= 0");
    if (s == 0.0) return 0.0;
    double acc = 0.0;
    for (const auto& a : m.atoms()) acc += a.weight * std::tgamma(1.0 - a.beta) * std::pow(s, a.beta);
    acc += m.integrate_density([s](double b) { return std::pow(s, b) * std::tgamma(1.0 - b); }).value;
    return acc;
}

double levy_tail(const MixingMeasure& m, double t) {
    if (!(t > 0.0)) throw DomainError("levy_tail: t must be > 0");
    return m.integrate([t](double b) { return std::pow(t, -b); });
}

double constant_c(const MixingMeasure& m) {
    if (!m.has_density())
        throw UnsupportedCase("constant_c requires a density component; use the atom-case bounds");
    const double c = m.integrate_density([](double b) {
                          return std::sin(b * std::numbers::pi) * std::tgamma(1.0 - b);
                      }).value;
    if (!(c > m.quadrature().abs_tol))
        throw DomainError("constant C must be > 0 for the density-case derivative bound");
    return c;
}

DerivativeBounds::DerivativeBounds(const MixingMeasure& m) : kind_(Kind::Atom) {
    for (const auto& a : m.atoms())
        atom_terms_.emplace_back(a.beta, a.weight * std::tgamma(1.0 - a.beta));
    if (m.has_density() && !m.density()->identically_zero()) {
        c_ = constant_c(m);
        kind_ = Kind::Density;
        beta0_ = m.density()->beta0();
        beta1_ = m.density()->beta1();
    } else if (atom_terms_.empty()) {
        throw DomainError("constant C must be > 0 for the density-case derivative bound");
    }
}

double DerivativeBounds::k(double t) const {
    if (!(t > 0.0)) throw DomainError("k_bound: t must be > 0");
    double best = std::numeric_limits<double>::infinity();
    if (kind_ == Kind::Density) {
        best = (std::tgamma(1.0 - beta1_) * std::pow(t, beta1_ - 1.0) +
                std::tgamma(1.0 - beta0_) * std::pow(t, beta0_ - 1.0)) /
               (c_ * std::numbers::pi);
    }
    // Adding mass only increases Im psi_W on the negative axis, so every
    // individual bound stays valid and the smallest one is kept.
    for (const auto& [beta, cb] : atom_terms_) {
        best = std::min(best, std::pow(t, beta - 1.0) / (cb * std::sin(beta * std::numbers::pi)));
    }
    return best;
}

double k_bound(const MixingMeasure& m, double t) { return DerivativeBounds(m).k(t); }

}  // namespace fracbound
