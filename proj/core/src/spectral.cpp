#include "fracbound/spectral.hpp"

#include "fracbound/error.hpp"
#include "fracbound/fracops.hpp"
#include "fracbound/parallel.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>

namespace fracbound {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

std::string num(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 6);
    return std::string(buf, res.ptr);
}

double sup_phi(const BoxDomain& dom) {
    double s = 1.0;
    for (double m : dom.sides()) s *= std::sqrt(2.0 / m);
    return s;
}

void check_closed(const BoxDomain& dom, const Point& x) {
    for (std::size_t i = 0; i < dom.dims(); ++i) {
        if (!(x[i] >= 0.0 && x[i] <= dom.side(i))) throw DomainError("spectral solution: point outside the closed box");
    }
}

}  // namespace

// ---- decay model -----------------------------------------------------------

DecayFit fit_decay(const BoxDomain& dom, const SpectralCoefficients& coeffs) {
    DecayFit fit;
    const std::size_t n = coeffs.size();
    const double sup = sup_phi(dom);
    double max_c = 0.0;
    for (double c : coeffs.values) max_c = std::max(max_c, std::abs(c));
    if (n == 0 || max_c == 0.0) {
        fit.kind = DecayFit::Kind::Resolved;
        return fit;
    }
    const double noise = 1e-13 * std::max(max_c, std::sqrt(std::max(coeffs.norm_sq, 0.0)));

    if (n >= 4) {
        const std::size_t from = n - n / 4;
        bool quiet = true;
        double rest = 0.0;
        for (std::size_t j = from; j < n; ++j) {
            quiet = quiet && std::abs(coeffs.values[j]) <= noise;
            rest += std::abs(coeffs.values[j]);
        }
        if (quiet) {
            fit.kind = DecayFit::Kind::Resolved;
            fit.tail = sup * rest;
            return fit;
        }
    }

    std::vector<std::size_t> sig;
    for (std::size_t j = 0; j < n; ++j) {
        if (std::abs(coeffs.values[j]) > noise) sig.push_back(j);
    }
    if (sig.size() >= 8) {
        const std::size_t first = sig.size() / 2;
        double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
        const double m = static_cast<double>(sig.size() - first);
        for (std::size_t i = first; i < sig.size(); ++i) {
            const double x = std::log(coeffs.eigens[sig[i]].lambda);
            const double y = std::log(std::abs(coeffs.values[sig[i]]));
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        const double denom = m * sxx - sx * sx;
        if (denom > 0.0) {
            fit.k = -(m * sxy - sx * sy) / denom;
            for (std::size_t i = first; i < sig.size(); ++i) {
                const auto j = sig[i];
                fit.c = std::max(fit.c, std::abs(coeffs.values[j]) * std::pow(coeffs.eigens[j].lambda, fit.k));
            }
            const double p = 2.0 * fit.k / static_cast<double>(dom.dims());
            if (p > 1.05) {
                const double lambda_n = coeffs.eigens.back().lambda;
                fit.kind = DecayFit::Kind::PowerLaw;
                fit.tail = sup * fit.c * std::pow(lambda_n, -fit.k) * static_cast<double>(n) / (p - 1.0);
                return fit;
            }
        }
    }

    const double residual = std::max(coeffs.parseval_residual, 0.0);
    fit.kind = residual <= 64.0 * kEps * coeffs.norm_sq ? DecayFit::Kind::Resolved : DecayFit::Kind::Parseval;
    fit.tail = std::sqrt(residual);
    return fit;
}

TruncationChoice choose_truncation(const BoxDomain& dom, const InitialDatum& f, double target_tail,
                                   const TruncationOptions& opts) {
    if (!(target_tail > 0.0)) throw DomainError("choose_truncation: target tail must be > 0");
    if (opts.probe == 0) throw DomainError("choose_truncation: probe must be >= 1");
    const SpectralCoefficients coeffs = project(dom, f, opts.probe, opts.projection);
    TruncationChoice out;
    out.fit = fit_decay(dom, coeffs);
    const double d = static_cast<double>(dom.dims());
    out.classical_threshold = out.fit.kind == DecayFit::Kind::Resolved ||
                              (out.fit.kind == DecayFit::Kind::PowerLaw && out.fit.k > 1.0 + 0.75 * d);

    const double sup = sup_phi(dom);
    const double beyond = out.fit.kind == DecayFit::Kind::Parseval ? std::numeric_limits<double>::infinity()
                                                                   : out.fit.tail;
    // suffix[j] = sup * sum_{i >= j} |c_i|
    std::vector<double> suffix(coeffs.size() + 1, 0.0);
    for (std::size_t j = coeffs.size(); j-- > 0;) suffix[j] = suffix[j + 1] + sup * std::abs(coeffs.values[j]);

    out.count = coeffs.size();
    out.estimated_tail = beyond;
    bool met = false;
    for (std::size_t n = 1; n <= coeffs.size(); ++n) {
        const double tail = suffix[n] + beyond;
        if (tail <= target_tail) {
            out.count = n;
            out.estimated_tail = tail;
            met = true;
            break;
        }
    }
    if (!met) {
        out.warning = "coefficient decay is not power-like enough to reach the target tail; using N = " +
                      std::to_string(out.count);
    }
    if (!out.classical_threshold) {
        if (!out.warning.empty()) out.warning += "; ";
        out.warning += "no classical-solution guarantee: fitted decay exponent k = " + num(out.fit.k) +
                       " does not exceed 1 + 3d/4";
    }
    return out;
}

// ---- solution --------------------------------------------------------------

SpectralSolution::SpectralSolution(BoxDomain dom, InitialDatum f, const MixingMeasure& m, std::size_t count,
                                   SpectralOptions opts)
    : dom_(std::move(dom)),
      f_(std::move(f)),
      opts_(std::move(opts)),
      coeffs_(project(dom_, f_, count, opts_.projection)),
      kernel_(m, opts_.route, opts_.kernel) {
    if (count == 0) throw DomainError("spectral solution: truncation must be >= 1");
    decay_ = fit_decay(dom_, coeffs_);

    const double sup = sup_phi(dom_);
    double total = 0.0;
    double late = 0.0;
    const std::size_t n = coeffs_.size();
    for (std::size_t j = 0; j < n; ++j) {
        const auto& idx = coeffs_.eigens[j].index;
        double phase = 4.0;
        for (std::size_t i = 0; i < dom_.dims(); ++i) phase += std::numbers::pi * idx[i];
        rounding_ += std::abs(coeffs_.values[j]) * sup * phase * kEps;
        const double term = coeffs_.eigens[j].lambda * std::abs(coeffs_.values[j]) * sup;
        total += term;
        if (n >= 4 && j >= n - n / 4) late += term;
    }
    const bool converged = decay_.kind == DecayFit::Kind::Resolved || total == 0.0 || late <= 1e-2 * total;
    classical_ = f_.smooth() && converged;
    if (!f_.smooth()) {
        warning_ = "initial datum is outside the classical-solution hypothesis; results hold in L2 only";
    } else if (!converged) {
        warning_ = "partial sums of sum lambda_n |fbar(n)| have not converged at this truncation";
    }
}

std::vector<HValue> SpectralSolution::kernel_values(double t) const {
    if (!(t >= 0.0)) throw DomainError("spectral solution: t must be >= 0");
    std::vector<HValue> out(coeffs_.size());
    parallel_for(coeffs_.size(), opts_.threads, [&](std::size_t j) {
        const double lambda = coeffs_.eigens[j].lambda;
        try {
            out[j] = kernel_.evaluate(t, lambda);
        } catch (const std::exception& e) {
            throw KernelError("h(t, lambda) failed at t = " + num(t) + ", lambda = " + num(lambda) + ": " + e.what(),
                              lambda);
        }
    });
    return out;
}

double SpectralSolution::series(double t, const Point& x) const {
    check_closed(dom_, x);
    const auto phi = eigenfunctions_at(dom_, coeffs_.eigens, x);
    const auto h = kernel_values(t);
    double acc = 0.0;
    for (std::size_t j = 0; j < phi.size(); ++j) acc += coeffs_.values[j] * phi[j] * h[j].value;
    return acc;
}

double SpectralSolution::operator()(double t, const Point& x) const {
    if (t == 0.0) {
        check_closed(dom_, x);
        return f_(dom_, x);
    }
    return series(t, x);
}

double SpectralSolution::laplacian(double t, const Point& x) const {
    check_closed(dom_, x);
    const auto phi = eigenfunctions_at(dom_, coeffs_.eigens, x);
    const auto h = kernel_values(t);
    double acc = 0.0;
    for (std::size_t j = 0; j < phi.size(); ++j) {
        acc -= coeffs_.eigens[j].lambda * coeffs_.values[j] * phi[j] * h[j].value;
    }
    return acc;
}

double SpectralSolution::l2_norm(double t) const {
    const auto h = kernel_values(t);
    double acc = 0.0;
    for (std::size_t j = 0; j < h.size(); ++j) {
        const double v = coeffs_.values[j] * h[j].value;
        acc += v * v;
    }
    return std::sqrt(acc);
}

double SpectralSolution::distance_to_datum(double t) const {
    const auto h = kernel_values(t);
    double acc = std::max(coeffs_.parseval_residual, 0.0);
    for (std::size_t j = 0; j < h.size(); ++j) {
        const double v = coeffs_.values[j] * (1.0 - h[j].value);
        acc += v * v;
    }
    return std::sqrt(acc);
}

SolutionField evaluate_field(const SpectralSolution& sol, const std::vector<double>& times,
                             const std::vector<Point>& points) {
    SolutionField out;
    out.times = times;
    out.points = points;
    out.values.assign(times.size() * points.size(), 0.0);
    out.errors.assign(times.size() * points.size(), 0.0);
    const auto& dom = sol.domain();
    const auto& coeffs = sol.coefficients();
    std::vector<std::vector<double>> phis(points.size());
    parallel_for(points.size(), sol.options().threads, [&](std::size_t j) {
        check_closed(dom, points[j]);
        phis[j] = eigenfunctions_at(dom, coeffs.eigens, points[j]);
    });
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double t = times[i];
        if (t == 0.0) {
            for (std::size_t j = 0; j < points.size(); ++j) out.values[i * points.size() + j] = sol.datum()(dom, points[j]);
            continue;
        }
        const auto h = sol.kernel_values(t);
        parallel_for(points.size(), sol.options().threads, [&](std::size_t j) {
            double v = 0.0;
            double e = 0.0;
            for (std::size_t n = 0; n < h.size(); ++n) {
                const double a = coeffs.values[n] * phis[j][n];
                v += a * h[n].value;
                e += std::abs(a) * h[n].est_error;
            }
            out.values[i * points.size() + j] = v;
            out.errors[i * points.size() + j] = e + sol.tail_bound();
        });
    }
    return out;
}

// ---- residual --------------------------------------------------------------

std::string_view to_string(ResidualReport::Status status) {
    switch (status) {
        case ResidualReport::Status::Pass:
            return "pass";
        case ResidualReport::Status::Fail:
            return "fail";
        case ResidualReport::Status::Inconclusive:
            return "inconclusive";
    }
    return "inconclusive";
}

ResidualReport verify_residual(const SpectralSolution& sol, const std::vector<double>& t_grid,
                               const std::vector<Point>& xs, const ResidualOptions& opts) {
    if (!(opts.t_min > 0.0)) throw DomainError("verify_residual: checks must start after t = 0");
    if (t_grid.size() < 2 || t_grid.front() != 0.0) throw DomainError("verify_residual: time grid must start at 0");
    const double t_max = opts.t_max > 0.0 ? opts.t_max : t_grid.back();

    ResidualReport report;
    for (std::size_t k = 1; k < t_grid.size(); ++k) report.grid_step = std::max(report.grid_step, t_grid[k] - t_grid[k - 1]);

    std::vector<std::size_t> eligible;
    for (std::size_t k = 0; k < t_grid.size(); ++k) {
        if (t_grid[k] >= opts.t_min * (1.0 - 1e-12) && t_grid[k] <= t_max * (1.0 + 1e-12)) eligible.push_back(k);
    }
    if (eligible.empty()) throw DomainError("verify_residual: no grid node inside the check window");
    std::vector<std::size_t> checks;
    if (eligible.size() <= opts.max_checks || opts.max_checks < 2) {
        checks = eligible;
    } else {
        for (std::size_t i = 0; i < opts.max_checks; ++i) {
            const double pos = static_cast<double>(i) * static_cast<double>(eligible.size() - 1) /
                               static_cast<double>(opts.max_checks - 1);
            checks.push_back(eligible[static_cast<std::size_t>(std::lround(pos))]);
        }
        checks.erase(std::unique(checks.begin(), checks.end()), checks.end());
    }

    const auto& coeffs = sol.coefficients();
    const std::size_t n = coeffs.size();
    // h[k][j] = h(t_k, lambda_j); only nodes up to the last check are needed.
    const std::size_t last = checks.back();
    std::vector<std::vector<double>> h(last + 1, std::vector<double>(n, 1.0));
    for (std::size_t k = 1; k <= last; ++k) {
        const auto hv = sol.kernel_values(t_grid[k]);
        for (std::size_t j = 0; j < n; ++j) h[k][j] = hv[j].value;
    }
    const std::vector<double> grid(t_grid.begin(), t_grid.begin() + static_cast<std::ptrdiff_t>(last + 1));
    const OrderGrid orders = sol.kernel().measure().order_grid(opts.beta_nodes);

    for (const Point& x : xs) {
        const auto phi = eigenfunctions_at(sol.domain(), coeffs.eigens, x);
        std::vector<double> u(last + 1, 0.0);
        std::vector<double> lap(last + 1, 0.0);
        for (std::size_t k = 0; k <= last; ++k) {
            for (std::size_t j = 0; j < n; ++j) {
                const double a = coeffs.values[j] * phi[j] * h[k][j];
                u[k] += a;
                lap[k] -= coeffs.eigens[j].lambda * a;
            }
        }
        const TimeSeries series(grid, u);
        for (std::size_t k : checks) {
            ResidualPoint p;
            p.t = t_grid[k];
            p.x = x;
            p.time_derivative = distributed_caputo(series, orders, k);
            p.laplacian = lap[k];
            p.residual = std::abs(p.time_derivative - p.laplacian);
            const double scale = std::max(std::abs(p.laplacian), std::abs(p.time_derivative));
            p.relative = scale > 0.0 ? p.residual / scale : 0.0;
            report.max_abs = std::max(report.max_abs, p.residual);
            report.max_rel = std::max(report.max_rel, p.relative);
            report.points.push_back(p);
        }
    }

    if (report.max_abs <= opts.tolerance) {
        report.status = ResidualReport::Status::Pass;
    } else if (report.grid_step > opts.fine_step * (1.0 + 1e-9)) {
        report.status = ResidualReport::Status::Inconclusive;
        report.note = "residual " + num(report.max_abs) + " above tolerance on a grid with step " +
                      num(report.grid_step) + "; refine the time grid below " + num(opts.fine_step);
    } else {
        report.status = ResidualReport::Status::Fail;
        report.note = "residual " + num(report.max_abs) + " above tolerance " + num(opts.tolerance);
    }
    return report;
}

}  // namespace fracbound
