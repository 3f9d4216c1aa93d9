#include "fracbound/eigenbasis.hpp"

#include "fracbound/error.hpp"
#include "fracbound/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace fracbound {

using std::numbers::pi;

// ---- BoxDomain -------------------------------------------------------------

BoxDomain::BoxDomain(std::vector<double> sides) : sides_(std::move(sides)) {
    if (sides_.empty() || sides_.size() > kMaxDims) throw DomainError("box domain: dimension must be 1, 2 or 3");
    for (double m : sides_) {
        if (!(m > 0.0) || !std::isfinite(m)) throw DomainError("box domain: sides must be positive and finite");
    }
}

double BoxDomain::volume() const noexcept {
    double v = 1.0;
    for (double m : sides_) v *= m;
    return v;
}

bool BoxDomain::contains(const Point& x) const noexcept {
    for (std::size_t i = 0; i < dims(); ++i) {
        if (!(x[i] > 0.0 && x[i] < sides_[i])) return false;
    }
    return true;
}

// ---- eigenpairs ------------------------------------------------------------

double eigenvalue(const BoxDomain& dom, const MultiIndex& n) {
    double lambda = 0.0;
    for (std::size_t i = 0; i < dom.dims(); ++i) {
        if (n[i] == 0) throw DomainError("eigenvalue: index components must be >= 1");
        const double k = n[i] * pi / dom.side(i);
        lambda += k * k;
    }
    return lambda;
}

double eigenfunction(const BoxDomain& dom, const MultiIndex& n, const Point& x) {
    double v = 1.0;
    for (std::size_t i = 0; i < dom.dims(); ++i) {
        const double m = dom.side(i);
        v *= std::sqrt(2.0 / m) * std::sin(n[i] * pi * x[i] / m);
    }
    return v;
}

namespace {

bool eigen_less(const EigenPair& a, const EigenPair& b) {
    const double tol = 1e-12 * std::max(a.lambda, b.lambda);
    if (std::abs(a.lambda - b.lambda) > tol) return a.lambda < b.lambda;
    return a.index < b.index;
}

// All multi-indices with lambda <= cap, appended to `out`.
void collect(const BoxDomain& dom, double cap, std::vector<EigenPair>& out) {
    const std::size_t d = dom.dims();
    std::array<double, kMaxDims> unit{};
    std::array<unsigned, kMaxDims> top{};
    for (std::size_t i = 0; i < d; ++i) {
        unit[i] = (pi / dom.side(i)) * (pi / dom.side(i));
        top[i] = static_cast<unsigned>(std::floor(std::sqrt(cap / unit[i]))) + 1;
    }
    MultiIndex n{};
    auto rec = [&](auto&& self, std::size_t axis, double acc) -> void {
        if (axis == d) {
            out.push_back({n, acc});
            return;
        }
        for (unsigned k = 1; k <= top[axis]; ++k) {
            const double next = acc + unit[axis] * k * k;
            if (next > cap) break;
            n[axis] = k;
            self(self, axis + 1, next);
        }
        n[axis] = 0;
    };
    rec(rec, 0, 0.0);
}

}  // namespace

std::vector<EigenPair> enumerate_eigens(const BoxDomain& dom, std::size_t count) {
    if (count == 0) return {};
    MultiIndex ones{};
    for (std::size_t i = 0; i < dom.dims(); ++i) ones[i] = 1;
    double cap = 4.0 * eigenvalue(dom, ones);
    std::vector<EigenPair> all;
    for (;;) {
        all.clear();
        collect(dom, cap * (1.0 + 1e-9), all);
        if (all.size() >= count) break;
        cap *= 2.0;
    }
    // Recompute in a fixed summation order so equal spectra compare equal.
    for (auto& e : all) e.lambda = eigenvalue(dom, e.index);
    std::sort(all.begin(), all.end(), eigen_less);
    all.resize(count);
    return all;
}

MultiIndex max_indices(const std::vector<EigenPair>& eigens) {
    MultiIndex top{};
    for (const auto& e : eigens) {
        for (std::size_t i = 0; i < kMaxDims; ++i) top[i] = std::max(top[i], e.index[i]);
    }
    return top;
}

std::vector<double> eigenfunctions_at(const BoxDomain& dom, const std::vector<EigenPair>& eigens, const Point& x) {
    const MultiIndex top = max_indices(eigens);
    std::array<std::vector<double>, kMaxDims> tables;
    for (std::size_t i = 0; i < dom.dims(); ++i) {
        const double m = dom.side(i);
        const double amp = std::sqrt(2.0 / m);
        tables[i].assign(top[i] + 1, 0.0);
        for (unsigned k = 1; k <= top[i]; ++k) tables[i][k] = amp * std::sin(k * pi * x[i] / m);
    }
    std::vector<double> out(eigens.size());
    for (std::size_t j = 0; j < eigens.size(); ++j) {
        double v = 1.0;
        for (std::size_t i = 0; i < dom.dims(); ++i) v *= tables[i][eigens[j].index[i]];
        out[j] = v;
    }
    return out;
}

// ---- InitialDatum ----------------------------------------------------------

InitialDatum InitialDatum::zero() { return InitialDatum{}; }

InitialDatum InitialDatum::modes(std::vector<std::pair<MultiIndex, double>> terms) {
    InitialDatum f;
    f.kind_ = Kind::Modes;
    for (const auto& [n, a] : terms) {
        if (!std::isfinite(a)) throw DomainError("modes datum: amplitudes must be finite");
        if (n[0] == 0) throw DomainError("modes datum: index components must be >= 1");
    }
    f.terms_ = std::move(terms);
    return f;
}

InitialDatum InitialDatum::eigenmode(const MultiIndex& n, double amplitude) { return modes({{n, amplitude}}); }

InitialDatum InitialDatum::bump(const Point& center, double width) {
    if (!(width > 0.0) || !std::isfinite(width)) throw DomainError("bump datum: width must be positive");
    InitialDatum f;
    f.kind_ = Kind::Bump;
    f.a_ = center;
    f.width_ = width;
    return f;
}

InitialDatum InitialDatum::indicator(const Point& lower, const Point& upper) {
    InitialDatum f;
    f.kind_ = Kind::Indicator;
    f.smooth_ = false;
    f.a_ = lower;
    f.b_ = upper;
    return f;
}

InitialDatum InitialDatum::tabulated(std::vector<std::vector<double>> axes, std::vector<double> values) {
    if (axes.empty() || axes.size() > kMaxDims) throw DomainError("tabulated datum: need 1 to 3 axes");
    std::size_t total = 1;
    for (const auto& ax : axes) {
        if (ax.size() < 2) throw DomainError("tabulated datum: each axis needs at least two nodes");
        for (std::size_t k = 1; k < ax.size(); ++k) {
            if (!(ax[k] > ax[k - 1])) throw DomainError("tabulated datum: axis nodes must be strictly increasing");
        }
        total *= ax.size();
    }
    if (values.size() != total) throw DomainError("tabulated datum: value count does not match the grid");
    for (double v : values) {
        if (!std::isfinite(v)) throw DomainError("tabulated datum: values must be finite");
    }
    InitialDatum f;
    f.kind_ = Kind::Tabulated;
    f.smooth_ = false;
    f.axes_ = std::move(axes);
    f.values_ = std::move(values);
    return f;
}

InitialDatum InitialDatum::custom(std::function<double(const Point&)> fn, bool smooth,
                                  std::vector<std::vector<double>> breakpoints) {
    if (!fn) throw DomainError("custom datum: empty function");
    InitialDatum f;
    f.kind_ = Kind::Custom;
    f.smooth_ = smooth;
    f.fn_ = std::move(fn);
    f.axes_ = std::move(breakpoints);
    return f;
}

void InitialDatum::validate(const BoxDomain& dom) const {
    const std::size_t d = dom.dims();
    switch (kind_) {
        case Kind::Modes:
            for (const auto& [n, a] : terms_) {
                for (std::size_t i = 0; i < kMaxDims; ++i) {
                    if ((i < d) != (n[i] != 0)) throw DomainError("modes datum: index dimension does not match domain");
                }
            }
            break;
        case Kind::Indicator:
            for (std::size_t i = 0; i < d; ++i) {
                if (!(a_[i] < b_[i])) throw DomainError("indicator datum: lower corner must be below upper corner");
            }
            break;
        case Kind::Tabulated:
            if (axes_.size() != d) throw DomainError("tabulated datum: axis count does not match domain");
            break;
        default:
            break;
    }
}

namespace {

// Linear interpolation weight of x within axis nodes; returns false outside.
bool locate(const std::vector<double>& ax, double x, std::size_t& k, double& w) {
    if (x < ax.front() || x > ax.back()) return false;
    const auto it = std::upper_bound(ax.begin(), ax.end(), x);
    k = std::min<std::size_t>(static_cast<std::size_t>(it - ax.begin()), ax.size() - 1) - 1;
    w = (x - ax[k]) / (ax[k + 1] - ax[k]);
    return true;
}

}  // namespace

double InitialDatum::operator()(const BoxDomain& dom, const Point& x) const {
    const std::size_t d = dom.dims();
    switch (kind_) {
        case Kind::Zero:
            return 0.0;
        case Kind::Modes: {
            double s = 0.0;
            for (const auto& [n, a] : terms_) s += a * eigenfunction(dom, n, x);
            return s;
        }
        case Kind::Bump: {
            double r2 = 0.0;
            for (std::size_t i = 0; i < d; ++i) r2 += (x[i] - a_[i]) * (x[i] - a_[i]);
            r2 /= width_ * width_;
            return r2 < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - r2)) : 0.0;
        }
        case Kind::Indicator:
            for (std::size_t i = 0; i < d; ++i) {
                if (x[i] < a_[i] || x[i] > b_[i]) return 0.0;
            }
            return 1.0;
        case Kind::Tabulated: {
            const std::size_t na = axes_.size();
            std::array<std::size_t, kMaxDims> k{};
            std::array<double, kMaxDims> w{};
            for (std::size_t i = 0; i < na; ++i) {
                if (!locate(axes_[i], x[i], k[i], w[i])) return 0.0;
            }
            double acc = 0.0;
            for (unsigned corner = 0; corner < (1u << na); ++corner) {
                double weight = 1.0;
                std::size_t flat = 0;
                for (std::size_t i = 0; i < na; ++i) {
                    const bool up = (corner >> i) & 1u;
                    weight *= up ? w[i] : 1.0 - w[i];
                    flat = flat * axes_[i].size() + k[i] + (up ? 1 : 0);
                }
                if (weight != 0.0) acc += weight * values_[flat];
            }
            return acc;
        }
        case Kind::Custom:
            return fn_(x);
    }
    return 0.0;
}

std::vector<double> InitialDatum::breakpoints(const BoxDomain& dom, std::size_t axis) const {
    std::vector<double> out;
    switch (kind_) {
        case Kind::Bump:
            out = {a_[axis] - width_, a_[axis] + width_};
            break;
        case Kind::Indicator:
            out = {a_[axis], b_[axis]};
            break;
        case Kind::Tabulated:
        case Kind::Custom:
            if (axis < axes_.size()) out = axes_[axis];
            break;
        default:
            break;
    }
    const double m = dom.side(axis);
    std::erase_if(out, [m](double b) { return !(b > 0.0 && b < m); });
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// ---- projection ------------------------------------------------------------

double SpectralCoefficients::l2_tail() const noexcept { return std::sqrt(std::max(parseval_residual, 0.0)); }

namespace {

GaussRule axis_rule(const BoxDomain& dom, const InitialDatum& f, std::size_t axis, unsigned max_k,
                    const ProjectOptions& opts) {
    const double m = dom.side(axis);
    std::vector<double> breaks{0.0};
    for (double b : f.breakpoints(dom, axis)) breaks.push_back(b);
    breaks.push_back(m);
    const double total = static_cast<double>(std::max(opts.min_nodes, opts.nodes_per_wave * max_k + 16));
    GaussRule out;
    for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
        const double len = breaks[p + 1] - breaks[p];
        if (len <= 0.0) continue;
        const auto n = std::max<std::size_t>(opts.min_panel_nodes, static_cast<std::size_t>(std::ceil(total * len / m)));
        const GaussRule panel = gauss_legendre(n, breaks[p], breaks[p + 1]);
        out.nodes.insert(out.nodes.end(), panel.nodes.begin(), panel.nodes.end());
        out.weights.insert(out.weights.end(), panel.weights.begin(), panel.weights.end());
    }
    return out;
}

}  // namespace

SpectralCoefficients project(const BoxDomain& dom, const InitialDatum& f, std::size_t count,
                             const ProjectOptions& opts) {
    f.validate(dom);
    SpectralCoefficients out;
    out.eigens = enumerate_eigens(dom, count);
    out.values.assign(out.eigens.size(), 0.0);
    if (f.kind() == InitialDatum::Kind::Zero) return out;

    const std::size_t d = dom.dims();
    const MultiIndex top = max_indices(out.eigens);

    // Axes beyond d become a single node of weight 1 with a unit "sine" row 0.
    std::array<std::vector<double>, kMaxDims> nodes;
    std::array<std::vector<double>, kMaxDims> weights;
    std::array<std::size_t, kMaxDims> nq{1, 1, 1};
    std::array<std::size_t, kMaxDims> nk{1, 1, 1};
    std::array<std::vector<double>, kMaxDims> sines;  // [k][q], weights folded in
    for (std::size_t i = 0; i < kMaxDims; ++i) {
        if (i < d) {
            GaussRule rule = axis_rule(dom, f, i, top[i], opts);
            nodes[i] = std::move(rule.nodes);
            weights[i] = std::move(rule.weights);
            nq[i] = nodes[i].size();
            nk[i] = top[i] + 1;
            const double m = dom.side(i);
            const double amp = std::sqrt(2.0 / m);
            sines[i].assign(nk[i] * nq[i], 0.0);
            for (std::size_t k = 1; k < nk[i]; ++k) {
                for (std::size_t q = 0; q < nq[i]; ++q) {
                    sines[i][k * nq[i] + q] = weights[i][q] * amp * std::sin(k * pi * nodes[i][q] / m);
                }
            }
        } else {
            nodes[i] = {0.0};
            weights[i] = {1.0};
            sines[i] = {1.0};
        }
    }

    // Samples F[q0][q1][q2].
    std::vector<double> values(nq[0] * nq[1] * nq[2]);
    double norm_sq = 0.0;
    Point x{};
    for (std::size_t q0 = 0; q0 < nq[0]; ++q0) {
        x[0] = nodes[0][q0];
        for (std::size_t q1 = 0; q1 < nq[1]; ++q1) {
            x[1] = nodes[1][q1];
            for (std::size_t q2 = 0; q2 < nq[2]; ++q2) {
                x[2] = nodes[2][q2];
                const double v = f(dom, x);
                if (!std::isfinite(v)) throw DomainError("project: initial datum is not finite at a quadrature node");
                values[(q0 * nq[1] + q1) * nq[2] + q2] = v;
                norm_sq += weights[0][q0] * weights[1][q1] * weights[2][q2] * v * v;
            }
        }
    }

    // Contract axis 2, then 1, then 0.
    std::vector<double> a(nk[2] * nq[0] * nq[1], 0.0);  // [k2][q0][q1]
    for (std::size_t k2 = 0; k2 < nk[2]; ++k2) {
        const double* s = &sines[2][k2 * nq[2]];
        for (std::size_t q01 = 0; q01 < nq[0] * nq[1]; ++q01) {
            const double* row = &values[q01 * nq[2]];
            double acc = 0.0;
            for (std::size_t q2 = 0; q2 < nq[2]; ++q2) acc += row[q2] * s[q2];
            a[k2 * nq[0] * nq[1] + q01] = acc;
        }
    }
    std::vector<double> b(nk[1] * nk[2] * nq[0], 0.0);  // [k1][k2][q0]
    for (std::size_t k1 = 0; k1 < nk[1]; ++k1) {
        const double* s = &sines[1][k1 * nq[1]];
        for (std::size_t k2 = 0; k2 < nk[2]; ++k2) {
            for (std::size_t q0 = 0; q0 < nq[0]; ++q0) {
                const double* row = &a[(k2 * nq[0] + q0) * nq[1]];
                double acc = 0.0;
                for (std::size_t q1 = 0; q1 < nq[1]; ++q1) acc += row[q1] * s[q1];
                b[(k1 * nk[2] + k2) * nq[0] + q0] = acc;
            }
        }
    }
    for (std::size_t j = 0; j < out.eigens.size(); ++j) {
        const MultiIndex& n = out.eigens[j].index;
        const double* s = &sines[0][n[0] * nq[0]];
        const double* row = &b[(n[1] * nk[2] + n[2]) * nq[0]];
        double acc = 0.0;
        for (std::size_t q0 = 0; q0 < nq[0]; ++q0) acc += row[q0] * s[q0];
        out.values[j] = acc;
    }

    out.norm_sq = norm_sq;
    double captured = 0.0;
    for (double c : out.values) captured += c * c;
    out.parseval_residual = norm_sq - captured;
    return out;
}

// ---- heat kernel -----------------------------------------------------------

namespace {

// sum_{k >= 1} exp(-a k^2)
double theta_sum(double a) {
    if (a < 1e-4) {
        // Poisson summation; the dual terms exp(-pi^2 k^2 / a) underflow.
        return 0.5 * (std::sqrt(pi / a) - 1.0);
    }
    double s = 0.0;
    for (long k = 1;; ++k) {
        const double term = std::exp(-a * static_cast<double>(k) * static_cast<double>(k));
        s += term;
        if (term < 1e-18 * s) break;
    }
    return s;
}

}  // namespace

double heat_trace(const BoxDomain& dom, double t) {
    if (!(t > 0.0)) throw DomainError("heat_trace: t must be > 0");
    double p = 1.0;
    for (double m : dom.sides()) p *= theta_sum((pi / m) * (pi / m) * t);
    return p;
}

HeatKernelValue heat_kernel(const BoxDomain& dom, double t, const Point& x, const Point& y, std::size_t count) {
    if (!(t > 0.0)) throw DomainError("heat_kernel: t must be > 0");
    if (!dom.contains(x) || !dom.contains(y)) throw DomainError("heat_kernel: points must lie inside the domain");
    const auto eigens = enumerate_eigens(dom, count);
    const auto px = eigenfunctions_at(dom, eigens, x);
    const auto py = eigenfunctions_at(dom, eigens, y);
    HeatKernelValue out;
    double partial = 0.0;
    for (std::size_t j = 0; j < eigens.size(); ++j) {
        const double e = std::exp(-eigens[j].lambda * t);
        out.value += e * (px[j] * py[j]);
        partial += e;
    }
    const double trace = heat_trace(dom, t);
    double amp = 1.0;
    for (double m : dom.sides()) amp *= 2.0 / m;
    const double rounding = (static_cast<double>(count) + 4.0) * std::numeric_limits<double>::epsilon() * trace;
    out.tail_bound = amp * (std::max(trace - partial, 0.0) + rounding);
    return out;
}

}  // namespace fracbound
