#include "fracbound/montecarlo.hpp"

#include "fracbound/error.hpp"
#include "fracbound/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace fracbound {

namespace {

bool outside(const BoxDomain& dom, const Point& p) { return !dom.contains(p); }

// Probability that a Brownian bridge with variance 2 per unit time, between
// interior points a and b over dt, stays inside the box.
double bridge_survival(const BoxDomain& dom, const Point& a, const Point& b, double dt) {
    double s = 1.0;
    for (std::size_t i = 0; i < dom.dims(); ++i) {
        const double m = dom.side(i);
        s *= 1.0 - std::exp(-a[i] * b[i] / dt);
        s *= 1.0 - std::exp(-(m - a[i]) * (m - b[i]) / dt);
    }
    return s;
}

}  // namespace

KilledPathSample simulate_killed_path(const BoxDomain& dom, const Point& start, double horizon, double step,
                                      RandomStream& rng, bool bridge_correction, bool record) {
    if (!dom.contains(start)) throw DomainError("killed path: start must lie inside the domain");
    if (!(step > 0.0)) throw DomainError("killed path: step must be > 0");
    if (!(horizon >= 0.0)) throw DomainError("killed path: horizon must be >= 0");
    KilledPathSample s;
    s.start = start;
    s.terminal = start;
    if (record) s.path.push_back(start);
    const auto full = static_cast<std::size_t>(std::floor(horizon / step * (1.0 + 1e-12)));
    const double rest = horizon - static_cast<double>(full) * step;
    const std::size_t total = full + (rest > 1e-12 * step ? 1 : 0);
    double clock = 0.0;
    Point cur = start;
    for (std::size_t k = 0; k < total; ++k) {
        const double dt = k < full ? step : rest;
        const double sd = std::sqrt(2.0 * dt);
        Point next = cur;
        for (std::size_t i = 0; i < dom.dims(); ++i) next[i] += sd * rng.normal();
        clock = k < full ? static_cast<double>(k + 1) * step : horizon;
        if (record) s.path.push_back(next);
        if (outside(dom, next)) {
            s.exited = true;
            s.exit_time = clock;
            s.terminal = next;
            s.weight = 0.0;
            return s;
        }
        if (bridge_correction) s.weight *= bridge_survival(dom, cur, next, dt);
        cur = next;
    }
    s.terminal = cur;
    return s;
}

MCEstimate estimate_u(const BoxDomain& dom, const InitialDatum& f, const SubordinatorSpec& spec, double t,
                      const Point& x, std::size_t paths, std::uint64_t seed, const McOptions& opts) {
    if (!dom.contains(x)) throw DomainError("estimate_u: x must lie inside the domain");
    if (!(t >= 0.0)) throw DomainError("estimate_u: t must be >= 0");
    if (paths < 100) throw DomainError("estimate_u: need at least 100 paths");
    f.validate(dom);
    std::vector<double> values(paths, 0.0);
    const std::uint64_t stream_seed = derive_seed(seed, 10);
    parallel_for(paths, opts.threads, [&](std::size_t i) {
        if (t == 0.0) {
            values[i] = f(dom, x);
            return;
        }
        RandomStream rng(stream_seed, i);
        const double e = sample_inverse(spec, t, opts.subordinator_step, rng);
        const auto path = simulate_killed_path(dom, x, e, opts.euler_step, rng, opts.bridge_correction);
        values[i] = path.exited ? 0.0 : path.weight * f(dom, path.terminal);
    });
    const MeanEstimate m = mean_estimate(values);
    MCEstimate out;
    out.t = t;
    out.x = x;
    out.mean = m.mean;
    out.se = m.se;
    out.paths = paths;
    out.euler_step = opts.euler_step;
    out.subordinator_step = opts.subordinator_step;
    out.bridge_correction = opts.bridge_correction;
    return out;
}

// ---- commutation -----------------------------------------------------------

CommutationReport check_commutation(const BoxDomain& dom, const SubordinatorSpec& spec, double t, const Point& x,
                                    std::size_t paths, std::uint64_t seed, const CommutationOptions& opts) {
    if (!dom.contains(x)) throw DomainError("check_commutation: x must lie inside the domain");
    if (!(t > 0.0)) throw DomainError("check_commutation: t must be > 0");
    if (opts.levels == 0 || opts.levels > 12) throw DomainError("check_commutation: levels must be in [1, 12]");
    if (!(opts.base_step > 0.0) || !(opts.s_fraction > 0.0)) throw DomainError("check_commutation: bad steps");
    if (paths < 2) throw DomainError("check_commutation: need at least two paths");

    const std::size_t levels = opts.levels;
    const std::size_t coarsest = std::size_t{1} << (levels - 1);  // stride of level 0 in fine cells
    const double fine = opts.base_step / static_cast<double>(coarsest);

    std::vector<double> steps(levels);
    std::vector<double> s_steps(levels);
    std::vector<std::size_t> strides(levels);
    for (std::size_t l = 0; l < levels; ++l) {
        strides[l] = coarsest >> l;
        steps[l] = fine * static_cast<double>(strides[l]);
        double typical = 0.0;
        for (const auto& c : spec.components()) typical = std::max(typical, c.scale * std::pow(steps[l], 1.0 / c.beta));
        s_steps[l] = opts.s_fraction * typical;
    }

    const IncrementSampler inc(spec, fine);
    // disagree[l * paths + i]
    std::vector<unsigned char> disagree(levels * paths, 0);
    const std::uint64_t stream_seed = derive_seed(seed, 20);
    parallel_for(paths, opts.threads, [&](std::size_t i) {
        RandomStream rng(stream_seed, i);
        // Fine subordinator path up to the first multiple of the coarsest
        // stride at which W > t; every level's first passage lies inside.
        std::vector<double> w{0.0};
        w.push_back(inc(rng));
        while (!(w.back() > t) || (w.size() - 1) % coarsest != 0) {
            if (w.size() > kMaxPathSteps) throw InsufficientHorizon("check_commutation: W did not exceed t");
            w.push_back(w.back() + inc(rng));
        }
        const std::size_t cells = w.size() - 1;
        std::vector<Point> b(cells + 1, x);
        const double sd = std::sqrt(2.0 * fine);
        for (std::size_t k = 1; k <= cells; ++k) {
            b[k] = b[k - 1];
            for (std::size_t a = 0; a < dom.dims(); ++a) b[k][a] += sd * rng.normal();
        }
        for (std::size_t l = 0; l < levels; ++l) {
            const std::size_t s = strides[l];
            const double delta = s_steps[l];
            bool exit_operational = false;
            bool exit_composed = false;
            for (std::size_t k = 1; k * s <= cells; ++k) {
                const double w_prev = w[(k - 1) * s];
                const double w_here = w[k * s];
                const bool out = outside(dom, b[k * s]);
                exit_operational = exit_operational || out;
                // tau_k is visited by s -> E_s iff some s-grid point lies in [W_{k-1}, W_k).
                const bool visited = std::ceil(w_prev / delta) * delta < w_here && std::ceil(w_prev / delta) * delta <= t;
                exit_composed = exit_composed || (out && visited);
                if (w_here > t) break;
            }
            disagree[l * paths + i] = exit_operational != exit_composed ? 1 : 0;
        }
    });

    CommutationReport report;
    for (std::size_t l = 0; l < levels; ++l) {
        CommutationLevel lv;
        lv.step = steps[l];
        lv.s_step = s_steps[l];
        lv.paths = paths;
        for (std::size_t i = 0; i < paths; ++i) lv.disagreements += disagree[l * paths + i];
        lv.rate = static_cast<double>(lv.disagreements) / static_cast<double>(paths);
        lv.se = std::sqrt(lv.rate * (1.0 - lv.rate) / static_cast<double>(paths));
        if (!report.levels.empty() && lv.rate > report.levels.back().rate) report.non_increasing = false;
        report.levels.push_back(lv);
    }
    report.final_rate = report.levels.back().rate;
    return report;
}

// ---- CTRW ------------------------------------------------------------------

CtrwReport ctrw_check(const BoxDomain& dom, const InitialDatum& f, const MixingMeasure& m, double t, const Point& x,
                      std::size_t walkers, double c, std::uint64_t seed, const CtrwOptions& opts) {
    if (!m.atoms_only()) throw UnsupportedCase("ctrw_check: needs an atoms-only measure");
    if (!dom.contains(x)) throw DomainError("ctrw_check: x must lie inside the domain");
    if (!(t > 0.0)) throw DomainError("ctrw_check: t must be > 0");
    if (!(c > 0.0)) throw DomainError("ctrw_check: scale c must be > 0");
    if (walkers < 2) throw DomainError("ctrw_check: need at least two walkers");
    f.validate(dom);

    const auto& atoms = m.atoms();
    const double mass = m.total_mass();
    std::vector<double> cumulative;
    double acc = 0.0;
    for (const auto& a : atoms) {
        acc += a.weight / mass;
        cumulative.push_back(acc);
    }
    cumulative.back() = 1.0;
    const double sd = std::sqrt(2.0 / (c * mass));

    std::vector<double> values(walkers, 0.0);
    std::vector<double> jumps(walkers, 0.0);
    const std::uint64_t stream_seed = derive_seed(seed, 30);
    parallel_for(walkers, opts.threads, [&](std::size_t i) {
        RandomStream rng(stream_seed, i);
        Point pos = x;
        double clock = 0.0;
        std::size_t n = 0;
        for (;;) {
            const double pick = rng.uniform();
            const auto j = static_cast<std::size_t>(std::upper_bound(cumulative.begin(), cumulative.end(), pick) -
                                                    cumulative.begin());
            const double beta = atoms[std::min(j, atoms.size() - 1)].beta;
            clock += std::pow(c * rng.uniform_open(), -1.0 / beta);
            if (clock > t) {
                values[i] = f(dom, pos);
                break;
            }
            for (std::size_t a = 0; a < dom.dims(); ++a) pos[a] += sd * rng.normal();
            ++n;
            if (!dom.contains(pos)) break;
        }
        jumps[i] = static_cast<double>(n);
    });

    CtrwReport report;
    report.c = c;
    report.ctrw = mean_estimate(values);
    report.mean_jumps = pairwise_sum(jumps) / static_cast<double>(walkers);
    McOptions ref = opts.reference;
    ref.threads = opts.threads;
    report.reference = estimate_u(dom, f, SubordinatorSpec::from_measure(m), t, x, opts.reference_paths,
                                  derive_seed(seed, 31), ref);
    const double se = std::hypot(report.ctrw.se, report.reference.se);
    report.z = se > 0.0 ? (report.ctrw.mean - report.reference.mean) / se : 0.0;
    return report;
}

}  // namespace fracbound
